//! Observed statistics and the doubly centered bootstrap.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandwidth::{select_bandwidth, BandwidthSearch};
use crate::error::{invalid, Error, Result};
use crate::estimators::{
    auc, default_variance_floor, nw_fit, pooled_roc_values, standardized_residuals, ArocEngine,
    ArocScratch, Curve, Ecdf, Grid, KernelSpec, PairedSample,
};
use crate::io::StudyDataset;
use crate::rng::{substream, StreamTag};

use super::distance::DistanceKind;
use super::split::{split_sample, SplitConfig, SplitRecord};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BandwidthPolicy {
    /// Cross-validate on the AROC part. With `reselect_in_bootstrap` the
    /// healthy bandwidth is chosen again for every bootstrap sample;
    /// otherwise the original-sample bandwidths are reused.
    Auto { reselect_in_bootstrap: bool },
    Fixed { diseased: f64, healthy: f64 },
}

impl Default for BandwidthPolicy {
    fn default() -> Self {
        BandwidthPolicy::Auto {
            reselect_in_bootstrap: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bandwidths {
    pub diseased: f64,
    pub healthy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    /// B, the number of bootstrap samples.
    pub bootstrap_iterations: usize,
    pub split: SplitConfig,
    pub distances: Vec<DistanceKind>,
    pub grid_size: usize,
    pub kernel: KernelSpec,
    pub bandwidth: BandwidthPolicy,
    /// Master seed for the bootstrap substreams.
    pub seed: u64,
    /// Evaluate replicates on the rayon pool. Output does not depend on it.
    #[serde(default)]
    pub parallel: bool,
}

impl TestConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            bootstrap_iterations: 200,
            split: SplitConfig { rho: 0.5, seed },
            distances: DistanceKind::ALL.to_vec(),
            grid_size: 500,
            kernel: KernelSpec::Gaussian,
            bandwidth: BandwidthPolicy::default(),
            seed,
            parallel: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bootstrap_iterations < 1 {
            return Err(invalid("bootstrap iterations B must be at least 1"));
        }
        if self.grid_size < 10 {
            return Err(invalid(format!("grid size must be at least 10, got {}", self.grid_size)));
        }
        if self.distances.is_empty() {
            return Err(invalid("at least one distance is required"));
        }
        if let BandwidthPolicy::Fixed { diseased, healthy } = self.bandwidth {
            if !(diseased > 0.0 && diseased.is_finite() && healthy > 0.0 && healthy.is_finite()) {
                return Err(invalid("fixed bandwidths must be positive"));
            }
        }
        self.split.validate()
    }

    fn kinds(&self) -> Vec<DistanceKind> {
        self.distances.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    /// Observed s_ψ.
    pub statistics: BTreeMap<DistanceKind, f64>,
    pub p_values: BTreeMap<DistanceKind, f64>,
    /// t_ψ^{b*}, b = 1..B.
    pub bootstrap_replicates: BTreeMap<DistanceKind, Vec<f64>>,
    pub roc_curve: Curve,
    pub aroc_curve: Curve,
    pub auc: f64,
    pub aauc: f64,
    pub bandwidths: Bandwidths,
    pub bootstrap_iterations: usize,
    pub seed: u64,
    pub split: SplitRecord,
}

fn resample(rng: &mut ChaCha8Rng, from: &[f64], out: &mut Vec<f64>) {
    out.clear();
    out.extend((0..from.len()).map(|_| from[rng.gen_range(0..from.len())]));
}

fn resolve_bandwidths(
    policy: BandwidthPolicy,
    diseased: &PairedSample,
    healthy: &PairedSample,
    kernel: KernelSpec,
) -> Result<Bandwidths> {
    match policy {
        BandwidthPolicy::Fixed { diseased, healthy } => Ok(Bandwidths { diseased, healthy }),
        BandwidthPolicy::Auto { .. } => {
            let pick = |s: &PairedSample, label: &str| {
                BandwidthSearch::default_for(s)
                    .and_then(|search| select_bandwidth(s, kernel, &search))
                    .map_err(|e| Error::Selection(format!("{label} AROC part: {e}")))
            };
            Ok(Bandwidths {
                diseased: pick(diseased, "diseased")?,
                healthy: pick(healthy, "healthy")?,
            })
        }
    }
}

/// Bootstrap test of H0: AROC = ROC.
///
/// 1. Split each population; estimate the pooled ROC on one part and the
///    AROC on the other; s_ψ = ψ(ROC - AROC).
/// 2. For b = 1..B resample the ROC-part markers from their ECDFs, and
///    rebuild the AROC-part markers as μ̂(X_i) + σ̂(X_i) ε*_i with ε*_i
///    drawn from the residual ECDF of the same population.
/// 3. Re-estimate both curves on the bootstrap samples.
/// 4. t_ψ^{b*} = ψ((ROC^{b*} - ROC) - (AROC^{b*} - AROC)).
/// 5. p = (1/B) #{b : s_ψ <= t_ψ^{b*}}.
pub fn run_test(data: &StudyDataset, cfg: &TestConfig) -> Result<TestResult> {
    cfg.validate()?;
    let kinds = cfg.kinds();
    let grid = Grid::uniform(cfg.grid_size)?;
    let split = split_sample(data, &cfg.split)?;
    let bandwidths = resolve_bandwidths(cfg.bandwidth, &split.aroc_diseased, &split.aroc_healthy, cfg.kernel)?;

    // Step 1.
    let roc_d = split.roc_diseased.values();
    let roc_h = split.roc_healthy.values();
    let roc_values = pooled_roc_values(&Ecdf::new(roc_d), &Ecdf::new(roc_h), &grid);

    let ad = &split.aroc_diseased;
    let ah = &split.aroc_healthy;
    let fit_d = nw_fit(ad, bandwidths.diseased, cfg.kernel, default_variance_floor(ad.marker()))?;
    let fit_h = nw_fit(ah, bandwidths.healthy, cfg.kernel, default_variance_floor(ah.marker()))?;
    let res_d = standardized_residuals(&fit_d);
    let res_h = standardized_residuals(&fit_h);
    let engine = ArocEngine::new(ad.covariate(), ah.covariate(), bandwidths.healthy, cfg.kernel)?;
    let aroc_values = engine.values(ad.marker(), ah.marker(), &grid, &mut ArocScratch::default());

    let statistics: BTreeMap<DistanceKind, f64> = kinds
        .iter()
        .map(|&k| (k, k.of_difference(roc_values.iter().zip(&aroc_values).map(|(r, a)| r - a))))
        .collect();

    let reselect = matches!(
        cfg.bandwidth,
        BandwidthPolicy::Auto {
            reselect_in_bootstrap: true
        }
    );

    // Steps 2-4 for one replicate.
    let replicate = |b: usize, scratch: &mut Scratch| -> Result<Vec<f64>> {
        let mut rng = substream(cfg.seed, StreamTag::Bootstrap, b as u64);
        resample(&mut rng, roc_d, &mut scratch.d);
        resample(&mut rng, roc_h, &mut scratch.h);
        let roc_star = pooled_roc_values(&Ecdf::new(&scratch.d), &Ecdf::new(&scratch.h), &grid);

        resample(&mut rng, res_d.residuals(), &mut scratch.d);
        resample(&mut rng, res_h.residuals(), &mut scratch.h);
        let y_d: Vec<f64> = scratch
            .d
            .iter()
            .zip(fit_d.fitted_mean().iter().zip(fit_d.fitted_sd()))
            .map(|(e, (m, s))| m + s * e)
            .collect();
        let y_h: Vec<f64> = scratch
            .h
            .iter()
            .zip(fit_h.fitted_mean().iter().zip(fit_h.fitted_sd()))
            .map(|(e, (m, s))| m + s * e)
            .collect();

        let aroc_star = if reselect {
            let wrap = |e: Error| Error::Replicate {
                replicate: b,
                population: "healthy",
                source: Box::new(e),
            };
            let boot_h = ah.with_marker(y_h.clone()).map_err(wrap)?;
            let g = BandwidthSearch::default_for(&boot_h)
                .and_then(|s| select_bandwidth(&boot_h, cfg.kernel, &s))
                .map_err(wrap)?;
            ArocEngine::new(ad.covariate(), ah.covariate(), g, cfg.kernel)
                .map_err(wrap)?
                .values(&y_d, &y_h, &grid, &mut scratch.aroc)
        } else {
            engine.values(&y_d, &y_h, &grid, &mut scratch.aroc)
        };

        let centered = |k: usize| {
            (roc_star[k] - roc_values[k]) - (aroc_star[k] - aroc_values[k])
        };
        Ok(kinds
            .iter()
            .map(|kind| kind.of_difference((0..grid.len()).map(centered)))
            .collect())
    };

    let b_total = cfg.bootstrap_iterations;
    let rows: Vec<Vec<f64>> = if cfg.parallel {
        (0..b_total)
            .into_par_iter()
            .map_init(Scratch::default, |s, b| replicate(b, s))
            .collect::<Result<_>>()?
    } else {
        let mut s = Scratch::default();
        (0..b_total).map(|b| replicate(b, &mut s)).collect::<Result<_>>()?
    };

    // Step 5.
    let mut bootstrap_replicates = BTreeMap::new();
    let mut p_values = BTreeMap::new();
    for (j, &kind) in kinds.iter().enumerate() {
        let reps: Vec<f64> = rows.iter().map(|r| r[j]).collect();
        let s = statistics[&kind];
        let exceed = reps.iter().filter(|&&t| s <= t).count();
        p_values.insert(kind, exceed as f64 / b_total as f64);
        bootstrap_replicates.insert(kind, reps);
    }

    let roc_curve = Curve::new(grid.clone(), roc_values)?;
    let aroc_curve = Curve::new(grid, aroc_values)?;
    Ok(TestResult {
        statistics,
        p_values,
        bootstrap_replicates,
        auc: auc(&roc_curve),
        aauc: auc(&aroc_curve),
        roc_curve,
        aroc_curve,
        bandwidths,
        bootstrap_iterations: b_total,
        seed: cfg.seed,
        split: split.record,
    })
}

#[derive(Default)]
struct Scratch {
    d: Vec<f64>,
    h: Vec<f64>,
    aroc: ArocScratch,
}
