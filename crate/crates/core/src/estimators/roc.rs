//! Pooled, covariate-adjusted and conditional ROC estimators.

use crate::error::{invalid, Result};

use super::ecdf::Ecdf;
use super::kernel::KernelSpec;
use super::regression::{
    default_variance_floor, nw_fit, standardized_residuals, RegressionFit, ResidualSet,
    WeightMatrix,
};
use super::types::{Curve, Grid, MarkerSample, PairedSample};

/// (n - #{v <= t}) / n, i.e. the survival function 1 - F̂(t) as an exact
/// fraction.
#[inline]
fn survival(ecdf: &Ecdf, t: f64) -> f64 {
    let n = ecdf.len();
    (n - ecdf.count_le(t)) as f64 / n as f64
}

/// 1 - F̂(Ĝ⁻¹(1 - p)) at each grid point.
pub(crate) fn pooled_roc_values(diseased: &Ecdf, healthy: &Ecdf, grid: &Grid) -> Vec<f64> {
    grid.points()
        .iter()
        .map(|&p| {
            let threshold = healthy
                .quantile(1.0 - p)
                .expect("grid points lie in (0, 1)");
            survival(diseased, threshold)
        })
        .collect()
}

/// Empirical pooled ROC curve.
pub fn pooled_roc(diseased: &MarkerSample, healthy: &MarkerSample, grid: &Grid) -> Curve {
    let values = pooled_roc_values(&Ecdf::from_sample(diseased), &Ecdf::from_sample(healthy), grid);
    Curve::new(grid.clone(), values).expect("empirical ROC is a valid curve")
}

/// (1/n) #{U_i > 1 - p} for each grid point. Sorts `placements` in place.
pub(crate) fn adjusted_values(placements: &mut [f64], grid: &Grid) -> Vec<f64> {
    placements.sort_by(|a, b| a.partial_cmp(b).expect("placement values are finite"));
    let n = placements.len();
    grid.points()
        .iter()
        .map(|&p| {
            let t = 1.0 - p;
            let at_or_below = placements.partition_point(|&u| u <= t);
            (n - at_or_below) as f64 / n as f64
        })
        .collect()
}

/// Placement values U_i = Ĥ^G((Y_i^F - μ̂^G(X_i^F)) / σ̂^G(X_i^F)).
pub fn healthy_placements(
    diseased: &PairedSample,
    healthy_fit: &RegressionFit,
    healthy_residuals: &ResidualSet,
) -> Result<Vec<f64>> {
    diseased
        .covariate()
        .iter()
        .zip(diseased.marker())
        .map(|(&x, &y)| {
            let (m, s) = healthy_fit.mean_sd(x)?;
            Ok(healthy_residuals.ecdf().eval((y - m) / s))
        })
        .collect()
}

/// Covariate-adjusted ROC curve: the share of diseased subjects whose
/// placement in the covariate-specific healthy distribution exceeds 1 - p.
pub fn aroc_estimate(
    diseased: &PairedSample,
    healthy: &PairedSample,
    healthy_bandwidth: f64,
    kernel: KernelSpec,
    grid: &Grid,
) -> Result<Curve> {
    if healthy.len() < 2 {
        return Err(invalid("AROC estimation needs at least 2 healthy observations"));
    }
    let floor = default_variance_floor(healthy.marker());
    let fit = nw_fit(healthy, healthy_bandwidth, kernel, floor)?;
    let residuals = standardized_residuals(&fit);
    let mut placements = healthy_placements(diseased, &fit, &residuals)?;
    let values = adjusted_values(&mut placements, grid);
    Ok(Curve::new(grid.clone(), values).expect("AROC estimate is a valid curve"))
}

/// Re-evaluates the AROC estimator for new marker values on fixed
/// covariates and a fixed healthy bandwidth, reusing the kernel weights.
/// Bit-identical to [`aroc_estimate`] for the same inputs.
#[derive(Debug, Clone)]
pub struct ArocEngine {
    healthy_train: WeightMatrix,
    healthy_at_diseased: WeightMatrix,
    n_diseased: usize,
    n_healthy: usize,
}

#[derive(Debug, Default)]
pub(crate) struct ArocScratch {
    mean: Vec<f64>,
    var: Vec<f64>,
    sq: Vec<f64>,
    eps: Vec<f64>,
    u: Vec<f64>,
}

impl ArocEngine {
    pub fn new(
        diseased_covariate: &[f64],
        healthy_covariate: &[f64],
        healthy_bandwidth: f64,
        kernel: KernelSpec,
    ) -> Result<Self> {
        if !(healthy_bandwidth > 0.0 && healthy_bandwidth.is_finite()) {
            return Err(invalid(format!("bandwidth must be positive, got {healthy_bandwidth}")));
        }
        if healthy_covariate.len() < 2 {
            return Err(invalid("AROC estimation needs at least 2 healthy observations"));
        }
        Ok(Self {
            healthy_train: WeightMatrix::new(healthy_covariate, healthy_covariate, healthy_bandwidth, kernel)?,
            healthy_at_diseased: WeightMatrix::new(
                diseased_covariate,
                healthy_covariate,
                healthy_bandwidth,
                kernel,
            )?,
            n_diseased: diseased_covariate.len(),
            n_healthy: healthy_covariate.len(),
        })
    }

    pub fn estimate(&self, diseased_marker: &[f64], healthy_marker: &[f64], grid: &Grid) -> Curve {
        let values = self.values(diseased_marker, healthy_marker, grid, &mut ArocScratch::default());
        Curve::new(grid.clone(), values).expect("AROC estimate is a valid curve")
    }

    pub(crate) fn values(
        &self,
        diseased_marker: &[f64],
        healthy_marker: &[f64],
        grid: &Grid,
        s: &mut ArocScratch,
    ) -> Vec<f64> {
        assert_eq!(diseased_marker.len(), self.n_diseased);
        assert_eq!(healthy_marker.len(), self.n_healthy);
        let floor = default_variance_floor(healthy_marker);

        self.healthy_train.apply(healthy_marker, &mut s.mean);
        s.sq.clear();
        s.sq.extend(healthy_marker.iter().zip(&s.mean).map(|(y, m)| (y - m) * (y - m)));
        self.healthy_train.apply(&s.sq, &mut s.var);
        s.eps.clear();
        s.eps.extend(
            healthy_marker
                .iter()
                .zip(s.mean.iter().zip(&s.var))
                .map(|(y, (m, v))| (y - m) / v.sqrt().max(floor)),
        );
        let residual_ecdf = Ecdf::new(&s.eps);

        self.healthy_at_diseased.apply(healthy_marker, &mut s.mean);
        self.healthy_at_diseased.apply(&s.sq, &mut s.var);
        s.u.clear();
        s.u.extend(
            diseased_marker
                .iter()
                .zip(s.mean.iter().zip(&s.var))
                .map(|(y, (m, v))| residual_ecdf.eval((y - m) / v.sqrt().max(floor))),
        );
        adjusted_values(&mut s.u, grid)
    }
}

/// Covariate-specific ROC curve at `x` from the two location-scale fits:
/// 1 - Ĥ^F((μ̂^G(x) + σ̂^G(x) (Ĥ^G)⁻¹(1 - p) - μ̂^F(x)) / σ̂^F(x)).
pub fn conditional_roc(
    x: f64,
    fit_diseased: &RegressionFit,
    fit_healthy: &RegressionFit,
    res_diseased: &ResidualSet,
    res_healthy: &ResidualSet,
    grid: &Grid,
) -> Result<Curve> {
    let (mu_f, sd_f) = fit_diseased.mean_sd(x)?;
    let (mu_g, sd_g) = fit_healthy.mean_sd(x)?;
    let values = grid
        .points()
        .iter()
        .map(|&p| {
            let q = res_healthy.ecdf().quantile(1.0 - p)?;
            let threshold = (mu_g + sd_g * q - mu_f) / sd_f;
            Ok(survival(res_diseased.ecdf(), threshold))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Curve::new(grid.clone(), values).expect("conditional ROC is a valid curve"))
}

/// Trapezoidal area under a curve, anchored at (0, 0) and (1, 1).
pub fn auc(curve: &Curve) -> f64 {
    let mut area = 0.0;
    let (mut p0, mut v0) = (0.0, 0.0);
    for (p, v) in curve.iter().chain(std::iter::once((1.0, 1.0))) {
        area += (p - p0) * (v + v0) * 0.5;
        p0 = p;
        v0 = v;
    }
    area
}
