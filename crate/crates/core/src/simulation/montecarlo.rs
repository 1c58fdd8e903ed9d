//! Level and power study driver.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::{derive_seed, StreamTag};
use crate::testing::{run_test, DistanceKind, SplitConfig, TestConfig};

use super::scenario::{generate_scenario, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloPlan {
    pub scenario: Scenario,
    /// (n^F, n^G) pairs.
    pub sample_sizes: Vec<(usize, usize)>,
    pub rhos: Vec<f64>,
    /// n_s, simulated datasets per cell.
    pub replications: usize,
    pub alphas: Vec<f64>,
    /// Template for each test; split rho and all seeds are overridden.
    pub test: TestConfig,
    pub seed: u64,
}

impl MonteCarloPlan {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(invalid("number of replications must be at least 1"));
        }
        if self.sample_sizes.is_empty() || self.rhos.is_empty() || self.alphas.is_empty() {
            return Err(invalid("plan needs at least one sample size, rho and alpha"));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(invalid(format!("alpha = {a} is outside (0, 1)")));
        }
        for &rho in &self.rhos {
            SplitConfig::new(rho, 0)?;
        }
        self.test.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellKey {
    pub scenario: Scenario,
    pub n_diseased: usize,
    pub n_healthy: usize,
    pub rho: f64,
}

impl std::fmt::Display for CellKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "scenario {} ({}, {}) rho = {}",
            self.scenario, self.n_diseased, self.n_healthy, self.rho
        )
    }
}

/// p-values of every replication in one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellOutcome {
    pub key: CellKey,
    pub p_values: BTreeMap<DistanceKind, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionRow {
    pub scenario: Scenario,
    pub n_diseased: usize,
    pub n_healthy: usize,
    pub rho: f64,
    pub distance: DistanceKind,
    pub alpha: f64,
    pub rejections: usize,
    pub replications: usize,
    pub proportion: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionTable {
    pub rows: Vec<RejectionRow>,
    pub cells: Vec<CellOutcome>,
}

impl RejectionTable {
    pub fn find(&self, n: (usize, usize), rho: f64, distance: DistanceKind, alpha: f64) -> Option<&RejectionRow> {
        self.rows.iter().find(|r| {
            (r.n_diseased, r.n_healthy) == n
                && (r.rho - rho).abs() < 1e-12
                && r.distance == distance
                && (r.alpha - alpha).abs() < 1e-12
        })
    }
}

/// p̂ ± 1.96 √(α(1 - α)/n_s), clipped to [0, 1].
pub fn calibration_interval(p_hat: f64, alpha: f64, n_s: usize) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha = {alpha} is outside (0, 1)")));
    }
    if n_s < 1 {
        return Err(invalid("n_s must be at least 1"));
    }
    let half = 1.96 * (alpha * (1.0 - alpha) / n_s as f64).sqrt();
    Ok(((p_hat - half).max(0.0), (p_hat + half).min(1.0)))
}

/// Seeds for replication `r` of the `size_index`-th sample size. They do
/// not depend on rho, so partitions are compared on the same datasets.
fn replication_seeds(plan_seed: u64, size_index: usize, r: usize) -> (u64, u64, u64) {
    let data = derive_seed(plan_seed, StreamTag::Replication, ((size_index as u64) << 32) | r as u64);
    (
        data,
        derive_seed(data, StreamTag::Split, 0),
        derive_seed(data, StreamTag::Bootstrap, 0),
    )
}

/// Simulates and tests the n_s datasets of one cell.
pub fn run_cell(plan: &MonteCarloPlan, size_index: usize, rho: f64) -> Result<CellOutcome> {
    let (n_diseased, n_healthy) = *plan
        .sample_sizes
        .get(size_index)
        .ok_or_else(|| invalid(format!("no sample size at index {size_index}")))?;
    let key = CellKey {
        scenario: plan.scenario,
        n_diseased,
        n_healthy,
        rho,
    };
    let one = |r: usize| -> Result<BTreeMap<DistanceKind, f64>> {
        let (data_seed, split_seed, test_seed) = replication_seeds(plan.seed, size_index, r);
        let data = generate_scenario(plan.scenario, n_diseased, n_healthy, data_seed)?;
        let mut cfg = plan.test.clone();
        cfg.split = SplitConfig::new(rho, split_seed)?;
        cfg.seed = test_seed;
        cfg.parallel = false;
        Ok(run_test(&data, &cfg)?.p_values)
    };
    let per_rep = (0..plan.replications)
        .into_par_iter()
        .map(|r| {
            one(r).map_err(|e| Error::Cell {
                cell: key.to_string(),
                replication: r,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut p_values: BTreeMap<DistanceKind, Vec<f64>> = BTreeMap::new();
    for rep in per_rep {
        for (k, p) in rep {
            p_values.entry(k).or_default().push(p);
        }
    }
    Ok(CellOutcome { key, p_values })
}

/// Rejection proportions (p-value <= alpha) of one cell.
pub fn tabulate(cell: &CellOutcome, alphas: &[f64]) -> Result<Vec<RejectionRow>> {
    let mut rows = Vec::new();
    for (&distance, ps) in &cell.p_values {
        let n_s = ps.len();
        for &alpha in alphas {
            let rejections = ps.iter().filter(|&&p| p <= alpha).count();
            let proportion = rejections as f64 / n_s as f64;
            let (lower, upper) = calibration_interval(proportion, alpha, n_s)?;
            rows.push(RejectionRow {
                scenario: cell.key.scenario,
                n_diseased: cell.key.n_diseased,
                n_healthy: cell.key.n_healthy,
                rho: cell.key.rho,
                distance,
                alpha,
                rejections,
                replications: n_s,
                proportion,
                lower,
                upper,
            });
        }
    }
    Ok(rows)
}

pub fn run_monte_carlo(plan: &MonteCarloPlan) -> Result<RejectionTable> {
    run_monte_carlo_with(plan, |_| {})
}

/// As [`run_monte_carlo`], calling `on_cell` after each finished cell.
pub fn run_monte_carlo_with(plan: &MonteCarloPlan, mut on_cell: impl FnMut(&CellOutcome)) -> Result<RejectionTable> {
    plan.validate()?;
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for size_index in 0..plan.sample_sizes.len() {
        for &rho in &plan.rhos {
            let cell = run_cell(plan, size_index, rho)?;
            on_cell(&cell);
            rows.extend(tabulate(&cell, &plan.alphas)?);
            cells.push(cell);
        }
    }
    Ok(RejectionTable { rows, cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_arithmetic() {
        let (lo, hi) = calibration_interval(0.05, 0.05, 1000).unwrap();
        // 1.96 * sqrt(0.0475 / 1000) = 0.013508...
        assert!((lo - 0.036492).abs() < 1e-6, "{lo}");
        assert!((hi - 0.063508).abs() < 1e-6, "{hi}");
        let (lo, hi) = calibration_interval(0.5, 0.5, 100_000_000).unwrap();
        assert!(hi - lo < 0.001);
        let (lo, _) = calibration_interval(0.01, 0.025, 1000).unwrap();
        assert!(lo >= 0.0);
        let (lo, hi) = calibration_interval(0.0, 0.025, 1000).unwrap();
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0);
        let (_, hi) = calibration_interval(1.0, 0.1, 50).unwrap();
        assert_eq!(hi, 1.0);
        assert!(calibration_interval(0.1, 0.0, 10).is_err());
        assert!(calibration_interval(0.1, 1.0, 10).is_err());
    }

    fn tiny_plan(replications: usize) -> MonteCarloPlan {
        let mut test = TestConfig::new(0);
        test.bootstrap_iterations = 20;
        test.grid_size = 50;
        MonteCarloPlan {
            scenario: Scenario::A,
            sample_sizes: vec![(40, 40)],
            rhos: vec![0.5],
            replications,
            alphas: vec![0.05, 0.5],
            test,
            seed: 3,
        }
    }

    #[test]
    fn single_replication_is_zero_or_one() {
        let table = run_monte_carlo(&tiny_plan(1)).unwrap();
        assert_eq!(table.rows.len(), 3 * 2);
        for row in &table.rows {
            assert!(row.proportion == 0.0 || row.proportion == 1.0);
            assert!(row.lower <= row.proportion && row.proportion <= row.upper);
        }
    }

    #[test]
    fn proportions_are_fractions_and_deterministic() {
        let plan = tiny_plan(6);
        let a = run_monte_carlo(&plan).unwrap();
        let b = run_monte_carlo(&plan).unwrap();
        assert_eq!(a, b);
        for row in &a.rows {
            assert_eq!(row.proportion * 6.0, row.rejections as f64);
        }
    }

    #[test]
    fn plan_validation() {
        let mut plan = tiny_plan(0);
        assert!(plan.validate().is_err());
        plan.replications = 1;
        plan.alphas = vec![1.2];
        assert!(plan.validate().is_err());
        plan.alphas = vec![0.05];
        plan.rhos = vec![1.0];
        assert!(plan.validate().is_err());
    }
}
