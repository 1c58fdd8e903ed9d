use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Marker values of one population, covariates discarded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MarkerSample {
    values: Vec<f64>,
}

impl MarkerSample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("marker sample is empty"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("marker value {i} is not finite")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl TryFrom<Vec<f64>> for MarkerSample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<MarkerSample> for Vec<f64> {
    fn from(s: MarkerSample) -> Self {
        s.values
    }
}

/// (covariate, marker) observations of one population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPaired")]
pub struct PairedSample {
    covariate: Vec<f64>,
    marker: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPaired {
    covariate: Vec<f64>,
    marker: Vec<f64>,
}

impl TryFrom<RawPaired> for PairedSample {
    type Error = Error;

    fn try_from(raw: RawPaired) -> Result<Self> {
        Self::new(raw.covariate, raw.marker)
    }
}

impl PairedSample {
    pub fn new(covariate: Vec<f64>, marker: Vec<f64>) -> Result<Self> {
        if covariate.len() != marker.len() {
            return Err(invalid(format!(
                "covariate has {} entries but marker has {}",
                covariate.len(),
                marker.len()
            )));
        }
        if covariate.is_empty() {
            return Err(invalid("paired sample is empty"));
        }
        if let Some(i) = covariate.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("covariate value {i} is not finite")));
        }
        if let Some(i) = marker.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("marker value {i} is not finite")));
        }
        Ok(Self { covariate, marker })
    }

    pub fn covariate(&self) -> &[f64] {
        &self.covariate
    }

    pub fn marker(&self) -> &[f64] {
        &self.marker
    }

    pub fn len(&self) -> usize {
        self.marker.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marker.is_empty()
    }

    /// Marker column alone.
    pub fn markers(&self) -> MarkerSample {
        MarkerSample {
            values: self.marker.clone(),
        }
    }

    /// Same covariates, new marker values.
    pub fn with_marker(&self, marker: Vec<f64>) -> Result<Self> {
        Self::new(self.covariate.clone(), marker)
    }

    /// Sub-sample at the given indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        Self::new(
            indices.iter().map(|&i| self.covariate[i]).collect(),
            indices.iter().map(|&i| self.marker[i]).collect(),
        )
    }
}

/// Strictly increasing evaluation points in the open unit interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Grid(Vec<f64>);

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("grid is empty"));
        }
        for (k, &p) in points.iter().enumerate() {
            if !(p > 0.0 && p < 1.0) {
                return Err(invalid(format!("grid point {k} = {p} is outside (0, 1)")));
            }
            if k > 0 && points[k - 1] >= p {
                return Err(invalid(format!("grid is not strictly increasing at index {k}")));
            }
        }
        Ok(Self(points))
    }

    /// `m` equispaced points k/(m+1), k = 1..=m.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(invalid("grid size must be positive"));
        }
        let denom = (m + 1) as f64;
        Self::new((1..=m).map(|k| k as f64 / denom).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for Grid {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<Grid> for Vec<f64> {
    fn from(g: Grid) -> Self {
        g.0
    }
}

/// A ROC-type curve tabulated on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct Curve {
    grid: Grid,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawCurve {
    grid: Grid,
    values: Vec<f64>,
}

impl TryFrom<RawCurve> for Curve {
    type Error = Error;

    fn try_from(raw: RawCurve) -> Result<Self> {
        Self::new(raw.grid, raw.values)
    }
}

impl Curve {
    /// Checks values lie in [0, 1] and are nondecreasing.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(invalid(format!(
                "grid has {} points but curve has {} values",
                grid.len(),
                values.len()
            )));
        }
        for (k, &v) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(format!("curve value {k} = {v} is outside [0, 1]")));
            }
            if k > 0 && values[k - 1] > v {
                return Err(invalid(format!("curve decreases at index {k}")));
            }
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.points().iter().copied().zip(self.values.iter().copied())
    }
}
