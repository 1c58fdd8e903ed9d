//! Empirical distribution machinery, kernel location-scale regression and
//! the pooled, conditional and covariate-adjusted ROC estimators.

mod ecdf;
mod kernel;
mod regression;
mod roc;
mod types;

pub use ecdf::{ecdf_eval, empirical_quantile, Ecdf};
pub use kernel::KernelSpec;
pub use regression::{default_variance_floor, nw_fit, standardized_residuals, RegressionFit, ResidualSet};
pub use roc::{aroc_estimate, auc, conditional_roc, healthy_placements, pooled_roc, ArocEngine};
pub use types::{Curve, Grid, MarkerSample, PairedSample};

pub(crate) use regression::sample_sd;
pub(crate) use roc::{pooled_roc_values, ArocScratch};
