//! Leave-one-out cross-validated bandwidth for the kernel mean.
//!
//! Observations sharing the left-out covariate value are left out with it,
//! so a tie cannot predict its own twin.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimators::{sample_sd, KernelSpec, PairedSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CvMode {
    #[default]
    LeaveOneOut,
}

/// Candidate bandwidths scanned by [`select_bandwidth`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthSearch {
    candidates: Vec<f64>,
    mode: CvMode,
}

pub const DEFAULT_CANDIDATES: usize = 25;

impl BandwidthSearch {
    pub fn new(candidates: Vec<f64>) -> Result<Self> {
        if candidates.len() < 5 {
            return Err(invalid("bandwidth search needs at least 5 candidates"));
        }
        if candidates.iter().any(|g| !(*g > 0.0 && g.is_finite())) {
            return Err(invalid("bandwidth candidates must be positive and finite"));
        }
        if candidates.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("bandwidth candidates must be strictly increasing"));
        }
        Ok(Self {
            candidates,
            mode: CvMode::LeaveOneOut,
        })
    }

    /// `count` log-spaced values from `lo` to `hi` inclusive.
    pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && count >= 2) {
            return Err(invalid(format!("invalid log-spaced range [{lo}, {hi}] x {count}")));
        }
        let (a, b) = (lo.ln(), hi.ln());
        let step = (b - a) / (count - 1) as f64;
        Self::new((0..count).map(|i| (a + step * i as f64).exp()).collect())
    }

    /// 25 log-spaced values between 0.05 and 2 covariate standard deviations.
    pub fn default_for(sample: &PairedSample) -> Result<Self> {
        let sd = sample_sd(sample.covariate());
        if !(sd > 0.0 && sd.is_finite()) {
            return Err(Error::Selection("covariate has zero spread".into()));
        }
        Self::log_spaced(0.05 * sd, 2.0 * sd, DEFAULT_CANDIDATES)
    }

    pub fn candidates(&self) -> &[f64] {
        &self.candidates
    }

    pub fn mode(&self) -> CvMode {
        self.mode
    }
}

/// CV(g) = (1/n) Σ_i (Y_i - μ̂_{-i}(X_i; g))², where μ̂_{-i} is fitted
/// without any observation whose covariate equals X_i.
///
/// Returns `Ok(f64::INFINITY)` when some leave-one-out mean is undefined
/// (a compact kernel with an isolated point).
pub fn cv_score(sample: &PairedSample, kernel: KernelSpec, bandwidth: f64) -> Result<f64> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(invalid(format!("bandwidth must be positive, got {bandwidth}")));
    }
    let xs = sample.covariate();
    let ys = sample.marker();
    let mut w = Vec::with_capacity(xs.len());
    let mut total = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        match kernel.weights_into(x, xs, bandwidth, true, &mut w) {
            Ok(()) => {}
            Err(Error::Evaluation { .. }) => return Ok(f64::INFINITY),
            Err(e) => return Err(e),
        }
        let pred: f64 = w.iter().zip(ys).map(|(a, b)| a * b).sum();
        total += (y - pred) * (y - pred);
    }
    Ok(total / xs.len() as f64)
}

/// Exact argmin of [`cv_score`] over the candidates; ties go to the
/// smallest bandwidth.
pub fn select_bandwidth(sample: &PairedSample, kernel: KernelSpec, search: &BandwidthSearch) -> Result<f64> {
    if sample.len() < 10 {
        return Err(invalid(format!(
            "bandwidth selection needs at least 10 observations, got {}",
            sample.len()
        )));
    }
    let scores = search
        .candidates
        .par_iter()
        .map(|&g| cv_score(sample, kernel, g))
        .collect::<Result<Vec<f64>>>()?;
    let mut best: Option<(f64, f64)> = None;
    for (&g, &s) in search.candidates.iter().zip(&scores) {
        if s.is_finite() && best.map_or(true, |(_, bs)| s < bs) {
            best = Some((g, s));
        }
    }
    best.map(|(g, _)| g)
        .ok_or_else(|| Error::Selection("every candidate bandwidth gives a degenerate fit".into()))
}
