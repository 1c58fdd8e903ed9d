//! Full-sample pooled, adjusted and conditional curves with their areas.

use serde::{Deserialize, Serialize};

use crate::bandwidth::{select_bandwidth, BandwidthSearch};
use crate::error::{Error, Result};
use crate::estimators::{
    aroc_estimate, auc, conditional_roc, default_variance_floor, nw_fit, pooled_roc, standardized_residuals,
    Curve, Ecdf, Grid, KernelSpec, PairedSample,
};
use crate::io::StudyDataset;
use crate::testing::Bandwidths;

/// Percentiles used when no covariate values are requested.
pub const DEFAULT_PERCENTILES: [f64; 5] = [0.10, 0.25, 0.50, 0.75, 0.90];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRequest {
    pub grid_size: usize,
    pub kernel: KernelSpec,
    /// Cross-validated per population when `None`.
    pub bandwidths: Option<Bandwidths>,
    /// Covariate values for conditional curves; defaults to
    /// [`DEFAULT_PERCENTILES`] of the pooled covariate.
    pub at: Option<Vec<f64>>,
}

impl Default for CurveRequest {
    fn default() -> Self {
        Self {
            grid_size: 500,
            kernel: KernelSpec::Gaussian,
            bandwidths: None,
            at: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalCurve {
    pub covariate: f64,
    pub curve: Curve,
    pub auc: f64,
    /// False when `covariate` lies outside the range observed in either
    /// population; such estimates rest on kernel extrapolation.
    pub within_observed_range: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub roc: Curve,
    pub aroc: Curve,
    pub auc: f64,
    pub aauc: f64,
    pub conditional: Vec<ConditionalCurve>,
    pub bandwidths: Bandwidths,
}

pub fn default_covariate_points(data: &StudyDataset) -> Vec<f64> {
    let pooled: Vec<f64> = data
        .diseased
        .covariate()
        .iter()
        .chain(data.healthy.covariate())
        .copied()
        .collect();
    let e = Ecdf::new(&pooled);
    DEFAULT_PERCENTILES
        .iter()
        .map(|&p| e.quantile(p).expect("percentiles lie in (0, 1]"))
        .collect()
}

fn range(s: &PairedSample) -> (f64, f64) {
    s.covariate()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

pub fn estimate_curves(data: &StudyDataset, req: &CurveRequest) -> Result<CurveSummary> {
    let grid = Grid::uniform(req.grid_size)?;
    let bandwidths = match req.bandwidths {
        Some(b) => b,
        None => {
            let pick = |s: &PairedSample, label: &str| {
                BandwidthSearch::default_for(s)
                    .and_then(|search| select_bandwidth(s, req.kernel, &search))
                    .map_err(|e| Error::Selection(format!("{label} population: {e}")))
            };
            Bandwidths {
                diseased: pick(&data.diseased, "diseased")?,
                healthy: pick(&data.healthy, "healthy")?,
            }
        }
    };
    let roc = pooled_roc(&data.diseased.markers(), &data.healthy.markers(), &grid);
    let aroc = aroc_estimate(&data.diseased, &data.healthy, bandwidths.healthy, req.kernel, &grid)?;

    let fit_d = nw_fit(
        &data.diseased,
        bandwidths.diseased,
        req.kernel,
        default_variance_floor(data.diseased.marker()),
    )?;
    let fit_h = nw_fit(
        &data.healthy,
        bandwidths.healthy,
        req.kernel,
        default_variance_floor(data.healthy.marker()),
    )?;
    let res_d = standardized_residuals(&fit_d);
    let res_h = standardized_residuals(&fit_h);
    let (lo_d, hi_d) = range(&data.diseased);
    let (lo_h, hi_h) = range(&data.healthy);
    let points = req.at.clone().unwrap_or_else(|| default_covariate_points(data));
    let conditional = points
        .into_iter()
        .map(|x| {
            let curve = conditional_roc(x, &fit_d, &fit_h, &res_d, &res_h, &grid)?;
            Ok(ConditionalCurve {
                covariate: x,
                auc: auc(&curve),
                curve,
                within_observed_range: x >= lo_d.max(lo_h) && x <= hi_d.min(hi_h),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveSummary {
        auc: auc(&roc),
        aauc: auc(&aroc),
        roc,
        aroc,
        conditional,
        bandwidths,
    })
}

/// Plot-ready table: one row per grid point with the pooled, adjusted and
/// each conditional curve as columns.
pub fn curves_to_csv(summary: &CurveSummary) -> String {
    use std::fmt::Write;
    let mut out = String::from("p,roc,aroc");
    for c in &summary.conditional {
        let _ = write!(out, ",roc_x={}", c.covariate);
    }
    out.push('\n');
    for (k, &p) in summary.roc.grid().points().iter().enumerate() {
        let _ = write!(out, "{p},{},{}", summary.roc.values()[k], summary.aroc.values()[k]);
        for c in &summary.conditional {
            let _ = write!(out, ",{}", c.curve.values()[k]);
        }
        out.push('\n');
    }
    out.push_str("\nsummary,covariate,area\n");
    let _ = writeln!(out, "auc,,{}", summary.auc);
    let _ = writeln!(out, "aauc,,{}", summary.aauc);
    for c in &summary.conditional {
        let _ = writeln!(out, "auc_x,{},{}", c.covariate, c.auc);
    }
    out
}
