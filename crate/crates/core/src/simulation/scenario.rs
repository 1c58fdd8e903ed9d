use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, Uniform};
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimators::PairedSample;
use crate::io::{DatasetMetadata, StudyDataset};
use crate::normal;
use crate::rng::{substream, StreamTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Population {
    Diseased,
    Healthy,
}

/// Location-scale data-generating models with standard normal errors.
///
/// | id | μ^F          | μ^G              | σ^F | σ^G | X         |
/// |----|--------------|------------------|-----|-----|-----------|
/// | A  | 2.5          | 1                | 1.3 | 1   | U(0, 1)   |
/// | B  | 1.5x         | 0                | 0.5 | 0.5 | U(0, 1)   |
/// | C  | 2.5 + 2ln x  | 1 + 2ln x        | 1.3 | 1   | U(1, 15)  |
/// | D  | x²           | 3 sin(π(x + 1))  | 1   | 1   | U(0, 1)   |
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scenario {
    A,
    B,
    C,
    D,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::A, Scenario::B, Scenario::C, Scenario::D];

    pub fn mean(self, pop: Population, x: f64) -> f64 {
        use Population::*;
        match (self, pop) {
            (Scenario::A, Diseased) => 2.5,
            (Scenario::A, Healthy) => 1.0,
            (Scenario::B, Diseased) => 1.5 * x,
            (Scenario::B, Healthy) => 0.0,
            (Scenario::C, Diseased) => 2.5 + 2.0 * x.ln(),
            (Scenario::C, Healthy) => 1.0 + 2.0 * x.ln(),
            (Scenario::D, Diseased) => x * x,
            (Scenario::D, Healthy) => 3.0 * (PI * (x + 1.0)).sin(),
        }
    }

    pub fn sd(self, pop: Population, _x: f64) -> f64 {
        use Population::*;
        match (self, pop) {
            (Scenario::A | Scenario::C, Diseased) => 1.3,
            (Scenario::A | Scenario::C, Healthy) => 1.0,
            (Scenario::B, _) => 0.5,
            (Scenario::D, _) => 1.0,
        }
    }

    /// Support of the uniform covariate law (same for both populations).
    pub fn covariate_range(self) -> (f64, f64) {
        match self {
            Scenario::C => (1.0, 15.0),
            _ => (0.0, 1.0),
        }
    }

    /// Whether the pooled ROC equals the AROC under this model.
    pub fn satisfies_null(self) -> bool {
        matches!(self, Scenario::A | Scenario::B)
    }

    /// True conditional ROC at covariate `x`, from the normal errors.
    pub fn conditional_roc(self, x: f64, p: f64) -> f64 {
        use Population::*;
        let (mf, sf) = (self.mean(Diseased, x), self.sd(Diseased, x));
        let (mg, sg) = (self.mean(Healthy, x), self.sd(Healthy, x));
        binormal_roc(p, mf, sf, mg, sg)
    }

    fn sample(self, pop: Population, n: usize, seed: u64) -> Result<PairedSample> {
        let tag = match pop {
            Population::Diseased => StreamTag::Diseased,
            Population::Healthy => StreamTag::Healthy,
        };
        let mut rng = substream(seed, tag, 0);
        let (lo, hi) = self.covariate_range();
        let law = Uniform::new_inclusive(lo, hi);
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let xi = law.sample(&mut rng);
            let e: f64 = StandardNormal.sample(&mut rng);
            x.push(xi);
            y.push(self.mean(pop, xi) + self.sd(pop, xi) * e);
        }
        PairedSample::new(x, y)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Scenario::A),
            "B" => Ok(Scenario::B),
            "C" => Ok(Scenario::C),
            "D" => Ok(Scenario::D),
            other => Err(invalid(format!("unknown scenario '{other}' (expected A, B, C or D)"))),
        }
    }
}

/// ROC of N(mu_f, sd_f) against N(mu_g, sd_g).
pub fn binormal_roc(p: f64, mu_f: f64, sd_f: f64, mu_g: f64, sd_g: f64) -> f64 {
    let threshold = mu_g + sd_g * normal::quantile(1.0 - p);
    1.0 - normal::cdf((threshold - mu_f) / sd_f)
}

/// Draws one study from a scenario. Each population uses its own
/// substream of `seed`.
pub fn generate_scenario(spec: Scenario, n_diseased: usize, n_healthy: usize, seed: u64) -> Result<StudyDataset> {
    if n_diseased == 0 || n_healthy == 0 {
        return Err(invalid("scenario sample sizes must be at least 1"));
    }
    Ok(StudyDataset {
        diseased: spec.sample(Population::Diseased, n_diseased, seed)?,
        healthy: spec.sample(Population::Healthy, n_healthy, seed)?,
        metadata: DatasetMetadata {
            marker_name: "y".into(),
            covariate_name: "x".into(),
            negated: false,
            dropped_rows: 0,
        },
    })
}

/// Scenario C conditional ROC, identical for every x:
/// 1 - Φ((10/13)(Φ⁻¹(1 - p) - 3/2)).
pub fn scenario_c_analytic_roc(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("p = {p} is outside (0, 1)")));
    }
    Ok(1.0 - normal::cdf((10.0 / 13.0) * (normal::quantile(1.0 - p) - 1.5)))
}
