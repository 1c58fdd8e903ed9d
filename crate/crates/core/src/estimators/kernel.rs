use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Smoothing kernel for the Nadaraya-Watson weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelSpec {
    /// Standard normal density.
    #[default]
    Gaussian,
    /// (3/4)(1 - u²) on [-1, 1]. Compact support, so weights can vanish.
    Epanechnikov,
}

impl KernelSpec {
    /// Kernel density κ(u).
    pub fn density(self, u: f64) -> f64 {
        match self {
            KernelSpec::Gaussian => (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            KernelSpec::Epanechnikov => {
                if u.abs() <= 1.0 {
                    0.75 * (1.0 - u * u)
                } else {
                    0.0
                }
            }
        }
    }

    /// Normalized weights W_i(x, g) = κ_g(x - X_i) / Σ_l κ_g(x - X_l),
    /// written into `out`. With `exclude_x`, points equal to `x` get zero
    /// weight (leave-one-out, with tied covariate values left out together).
    ///
    /// Constant factors of κ cancel in the ratio and are not computed.
    /// The Gaussian exponent is shifted by its minimum so the nearest
    /// point always has unit raw weight and the sum cannot underflow.
    pub fn weights_into(
        self,
        x: f64,
        points: &[f64],
        bandwidth: f64,
        exclude_x: bool,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        out.clear();
        out.reserve(points.len());
        let mut sum = 0.0;
        match self {
            KernelSpec::Gaussian => {
                let inv = 1.0 / bandwidth;
                let mut min_sq = f64::INFINITY;
                for &xi in points {
                    let u = (x - xi) * inv;
                    let sq = u * u;
                    out.push(sq);
                    if !(exclude_x && xi == x) && sq < min_sq {
                        min_sq = sq;
                    }
                }
                for (w, &xi) in out.iter_mut().zip(points) {
                    *w = if exclude_x && xi == x {
                        0.0
                    } else {
                        (-0.5 * (*w - min_sq)).exp()
                    };
                    sum += *w;
                }
            }
            KernelSpec::Epanechnikov => {
                let inv = 1.0 / bandwidth;
                for &xi in points {
                    let u = (x - xi) * inv;
                    let w = if (exclude_x && xi == x) || u.abs() > 1.0 {
                        0.0
                    } else {
                        1.0 - u * u
                    };
                    out.push(w);
                    sum += w;
                }
            }
        }
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::Evaluation { x, bandwidth });
        }
        let inv_sum = 1.0 / sum;
        for w in out.iter_mut() {
            *w *= inv_sum;
        }
        Ok(())
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelSpec::Gaussian => "gaussian",
            KernelSpec::Epanechnikov => "epanechnikov",
        })
    }
}

impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(KernelSpec::Gaussian),
            "epanechnikov" => Ok(KernelSpec::Epanechnikov),
            other => Err(invalid(format!("unknown kernel '{other}'"))),
        }
    }
}
