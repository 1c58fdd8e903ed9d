use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimators::Curve;

/// Functional distance between two curves on a shared grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DistanceKind {
    L1,
    L2,
    KS,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 3] = [DistanceKind::L1, DistanceKind::L2, DistanceKind::KS];

    /// Grid approximation of the distance of a difference function from 0:
    /// mean |d|, mean d², or max |d|.
    pub fn of_difference<I>(self, diff: I) -> f64
    where
        I: IntoIterator<Item = f64>,
    {
        let mut n = 0usize;
        let mut acc = 0.0;
        for d in diff {
            n += 1;
            match self {
                DistanceKind::L1 => acc += d.abs(),
                DistanceKind::L2 => acc += d * d,
                DistanceKind::KS => acc = f64::max(acc, d.abs()),
            }
        }
        match self {
            DistanceKind::KS => acc,
            _ if n == 0 => 0.0,
            _ => acc / n as f64,
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceKind::L1 => "L1",
            DistanceKind::L2 => "L2",
            DistanceKind::KS => "KS",
        })
    }
}

impl FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "L1" => Ok(DistanceKind::L1),
            "L2" => Ok(DistanceKind::L2),
            "KS" => Ok(DistanceKind::KS),
            other => Err(invalid(format!("unknown distance '{other}' (expected L1, L2 or KS)"))),
        }
    }
}

pub fn curve_distance(a: &Curve, b: &Curve, kind: DistanceKind) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(invalid("curves are tabulated on different grids"));
    }
    Ok(kind.of_difference(a.values().iter().zip(b.values()).map(|(x, y)| x - y)))
}
