//! Empirical distribution function and its left-continuous inverse.

use crate::error::{invalid, Result};

use super::types::MarkerSample;

/// Sorted copy of a sample, supporting O(log n) evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    /// Panics if `values` is empty or contains NaN; use [`MarkerSample`]
    /// for validated input.
    pub fn new(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "ECDF of an empty sample");
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("NaN in ECDF input"));
        Self { sorted }
    }

    pub fn from_sample(sample: &MarkerSample) -> Self {
        Self::new(sample.values())
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// #{i : x_i <= t}.
    pub fn count_le(&self, t: f64) -> usize {
        self.sorted.partition_point(|&v| v <= t)
    }

    /// (1/n) #{i : x_i <= t}.
    pub fn eval(&self, t: f64) -> f64 {
        self.count_le(t) as f64 / self.sorted.len() as f64
    }

    /// Smallest k in 1..=n with k/n >= p, computed in the same floating
    /// point arithmetic as [`Ecdf::eval`].
    fn quantile_rank(&self, p: f64) -> usize {
        let n = self.sorted.len();
        let nf = n as f64;
        let mut k = ((p * nf).ceil() as usize).clamp(1, n);
        while k > 1 && (k - 1) as f64 / nf >= p {
            k -= 1;
        }
        while k < n && (k as f64 / nf) < p {
            k += 1;
        }
        k
    }

    /// inf{t : eval(t) >= p} for p in (0, 1], the ⌈np⌉-th order statistic.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(invalid(format!("quantile level {p} is outside (0, 1]")));
        }
        Ok(self.sorted[self.quantile_rank(p) - 1])
    }
}

/// F̂(t) of a marker sample.
pub fn ecdf_eval(sample: &MarkerSample, t: f64) -> f64 {
    Ecdf::from_sample(sample).eval(t)
}

/// F̂⁻¹(p) = inf{t : F̂(t) >= p}.
pub fn empirical_quantile(sample: &MarkerSample, p: f64) -> Result<f64> {
    Ecdf::from_sample(sample).quantile(p)
}
