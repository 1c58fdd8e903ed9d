//! Shared fixtures for the criterion benchmarks.

use covroc_core::simulation::{generate_scenario, Scenario};
use covroc_core::StudyDataset;

/// Scenario C study of the given size, fixed seed.
pub fn scenario_c(n: usize) -> StudyDataset {
    generate_scenario(Scenario::C, n, n, 42).expect("valid sizes")
}
