//! Distance statistics, sample splitting and the bootstrap test of
//! equality between the pooled ROC and the AROC curve.

mod bootstrap;
mod distance;
mod split;

pub use bootstrap::{run_test, BandwidthPolicy, Bandwidths, TestConfig, TestResult};
pub use distance::{curve_distance, DistanceKind};
pub use split::{roc_part_size, split_sample, SampleSplit, SplitConfig, SplitRecord};
