//! Pooled, conditional and covariate-adjusted ROC curves for a continuous
//! marker with one continuous covariate, and a bootstrap test of whether
//! the covariate-adjusted ROC (AROC) equals the pooled ROC.
//!
//! The main entry points are [`estimators`] for the curve estimators,
//! [`testing::run_test`] for the test, and [`simulation`] for the
//! scenario generators and Monte Carlo harness.
//!
//! ```
//! use covroc_core::simulation::{generate_scenario, Scenario};
//! use covroc_core::testing::{run_test, TestConfig};
//!
//! let data = generate_scenario(Scenario::C, 60, 60, 1).unwrap();
//! let mut cfg = TestConfig::new(7);
//! cfg.bootstrap_iterations = 20;
//! cfg.grid_size = 50;
//! let result = run_test(&data, &cfg).unwrap();
//! for (kind, p) in &result.p_values {
//!     println!("{kind}: s = {:.4}, p = {p}", result.statistics[kind]);
//! }
//! ```

pub mod bandwidth;
pub mod curves;
pub mod error;
pub mod estimators;
pub mod io;
pub mod normal;
pub mod rng;
pub mod simulation;
pub mod testing;

pub use error::{Error, Result};
pub use estimators::{Curve, Grid, KernelSpec, MarkerSample, PairedSample};
pub use io::StudyDataset;
pub use testing::{run_test, DistanceKind, TestConfig, TestResult};
