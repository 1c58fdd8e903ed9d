//! Scenario generators and the Monte Carlo level/power harness.

mod montecarlo;
mod scenario;

pub use montecarlo::{
    calibration_interval, run_cell, run_monte_carlo, run_monte_carlo_with, tabulate, CellKey, CellOutcome,
    MonteCarloPlan, RejectionRow, RejectionTable,
};
pub use scenario::{binormal_roc, generate_scenario, scenario_c_analytic_roc, Population, Scenario};
