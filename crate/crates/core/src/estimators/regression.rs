//! Nadaraya-Watson location-scale regression.

use crate::error::{invalid, Result};

use super::ecdf::Ecdf;
use super::kernel::KernelSpec;
use super::types::PairedSample;

/// 1e-8 times the marker standard deviation (or 1e-8 when the marker is
/// constant).
pub fn default_variance_floor(marker: &[f64]) -> f64 {
    let sd = sample_sd(marker);
    1e-8 * if sd > 0.0 && sd.is_finite() { sd } else { 1.0 }
}

pub(crate) fn sample_sd(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
}

#[inline]
fn dot(w: &[f64], y: &[f64]) -> f64 {
    w.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Kernel estimates of the conditional mean and standard deviation.
///
/// mean(x) = Σ W_i(x, g) Y_i
/// sd(x)   = max(floor, sqrt(Σ W_i(x, g) (Y_i - mean(X_i))²))
#[derive(Debug, Clone)]
pub struct RegressionFit {
    training: PairedSample,
    bandwidth: f64,
    kernel: KernelSpec,
    variance_floor: f64,
    fitted_mean: Vec<f64>,
    fitted_sd: Vec<f64>,
    sq_resid: Vec<f64>,
}

pub fn nw_fit(
    sample: &PairedSample,
    bandwidth: f64,
    kernel: KernelSpec,
    variance_floor: f64,
) -> Result<RegressionFit> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(invalid(format!("bandwidth must be positive, got {bandwidth}")));
    }
    if !(variance_floor > 0.0 && variance_floor.is_finite()) {
        return Err(invalid(format!("variance floor must be positive, got {variance_floor}")));
    }
    if sample.len() < 2 {
        return Err(invalid("kernel regression needs at least 2 observations"));
    }
    let xs = sample.covariate();
    let ys = sample.marker();
    let mut w = Vec::with_capacity(xs.len());
    let mut fitted_mean = Vec::with_capacity(xs.len());
    for &x in xs {
        kernel.weights_into(x, xs, bandwidth, false, &mut w)?;
        fitted_mean.push(dot(&w, ys));
    }
    let sq_resid: Vec<f64> = ys
        .iter()
        .zip(&fitted_mean)
        .map(|(y, m)| (y - m) * (y - m))
        .collect();
    let mut fit = RegressionFit {
        training: sample.clone(),
        bandwidth,
        kernel,
        variance_floor,
        fitted_mean,
        fitted_sd: Vec::new(),
        sq_resid,
    };
    let mut fitted_sd = Vec::with_capacity(xs.len());
    for &x in xs {
        kernel.weights_into(x, xs, bandwidth, false, &mut w)?;
        fitted_sd.push(fit.sd_from_weights(&w));
    }
    fit.fitted_sd = fitted_sd;
    Ok(fit)
}

impl RegressionFit {
    fn sd_from_weights(&self, w: &[f64]) -> f64 {
        dot(w, &self.sq_resid).sqrt().max(self.variance_floor)
    }

    /// (mean(x), sd(x)).
    pub fn mean_sd(&self, x: f64) -> Result<(f64, f64)> {
        let mut w = Vec::new();
        self.kernel
            .weights_into(x, self.training.covariate(), self.bandwidth, false, &mut w)?;
        Ok((dot(&w, self.training.marker()), self.sd_from_weights(&w)))
    }

    pub fn mean(&self, x: f64) -> Result<f64> {
        self.mean_sd(x).map(|(m, _)| m)
    }

    pub fn sd(&self, x: f64) -> Result<f64> {
        self.mean_sd(x).map(|(_, s)| s)
    }

    pub fn training(&self) -> &PairedSample {
        &self.training
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    pub fn variance_floor(&self) -> f64 {
        self.variance_floor
    }

    /// mean(X_i) at each training covariate.
    pub fn fitted_mean(&self) -> &[f64] {
        &self.fitted_mean
    }

    /// sd(X_i) at each training covariate.
    pub fn fitted_sd(&self) -> &[f64] {
        &self.fitted_sd
    }
}

/// Standardized residuals of a fit together with their ECDF Ĥ.
#[derive(Debug, Clone)]
pub struct ResidualSet {
    residuals: Vec<f64>,
    ecdf: Ecdf,
}

impl ResidualSet {
    pub(crate) fn from_residuals(residuals: Vec<f64>) -> Self {
        let ecdf = Ecdf::new(&residuals);
        Self { residuals, ecdf }
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn ecdf(&self) -> &Ecdf {
        &self.ecdf
    }

    pub fn len(&self) -> usize {
        self.residuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// ε̂_i = (Y_i - mean(X_i)) / sd(X_i).
pub fn standardized_residuals(fit: &RegressionFit) -> ResidualSet {
    let residuals = fit
        .training
        .marker()
        .iter()
        .zip(fit.fitted_mean.iter().zip(&fit.fitted_sd))
        .map(|(y, (m, s))| (y - m) / s)
        .collect();
    ResidualSet::from_residuals(residuals)
}

/// Dense matrix of normalized kernel weights, one row per evaluation
/// point. Applying it to a marker vector gives the same bits as
/// [`RegressionFit::mean_sd`] at those points.
#[derive(Debug, Clone)]
pub(crate) struct WeightMatrix {
    cols: usize,
    w: Vec<f64>,
}

impl WeightMatrix {
    pub fn new(eval: &[f64], train: &[f64], bandwidth: f64, kernel: KernelSpec) -> Result<Self> {
        let cols = train.len();
        let mut w = Vec::with_capacity(eval.len() * cols);
        let mut row = Vec::with_capacity(cols);
        for &x in eval {
            kernel.weights_into(x, train, bandwidth, false, &mut row)?;
            w.extend_from_slice(&row);
        }
        Ok(Self { cols, w })
    }

    pub fn apply(&self, y: &[f64], out: &mut Vec<f64>) {
        debug_assert_eq!(y.len(), self.cols);
        out.clear();
        out.extend(self.w.chunks_exact(self.cols).map(|row| dot(row, y)));
    }
}
