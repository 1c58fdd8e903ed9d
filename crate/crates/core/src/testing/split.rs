use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::estimators::{MarkerSample, PairedSample};
use crate::io::StudyDataset;
use crate::rng::{substream, StreamTag};

/// Fraction `rho` of each population goes to the pooled-ROC part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub rho: f64,
    pub seed: u64,
}

impl SplitConfig {
    pub fn new(rho: f64, seed: u64) -> Result<Self> {
        let cfg = Self { rho, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(invalid(format!("split fraction rho = {} is outside (0, 1)", self.rho)));
        }
        Ok(())
    }
}

/// ⌊rho·n⌋, tolerant of representation error in rho (so 1/3 of 300 is 100).
pub fn roc_part_size(n: usize, rho: f64) -> usize {
    ((rho * n as f64) + 1e-9).floor() as usize
}

/// Which original rows went where. Indices are sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub seed: u64,
    pub rho: f64,
    pub roc_diseased: Vec<usize>,
    pub roc_healthy: Vec<usize>,
    pub aroc_diseased: Vec<usize>,
    pub aroc_healthy: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SampleSplit {
    pub roc_diseased: MarkerSample,
    pub roc_healthy: MarkerSample,
    pub aroc_diseased: PairedSample,
    pub aroc_healthy: PairedSample,
    pub record: SplitRecord,
}

fn partition(
    sample: &PairedSample,
    rho: f64,
    seed: u64,
    stream: u64,
    label: &str,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = sample.len();
    let k = roc_part_size(n, rho);
    if k < 2 || n - k < 2 {
        return Err(invalid(format!(
            "{label} population of size {n} split with rho = {rho} leaves {k} observations for the ROC part and {} for the AROC part; both need at least 2",
            n - k
        )));
    }
    let mut rng = substream(seed, StreamTag::Split, stream);
    let mut chosen = vec![false; n];
    for i in index::sample(&mut rng, n, k) {
        chosen[i] = true;
    }
    let roc = (0..n).filter(|&i| chosen[i]).collect();
    let aroc = (0..n).filter(|&i| !chosen[i]).collect();
    Ok((roc, aroc))
}

/// Random per-population split into a pooled-ROC part (markers only) and
/// an AROC part (covariate and marker).
pub fn split_sample(data: &StudyDataset, cfg: &SplitConfig) -> Result<SampleSplit> {
    cfg.validate()?;
    let (roc_d, aroc_d) = partition(&data.diseased, cfg.rho, cfg.seed, 0, "diseased")?;
    let (roc_h, aroc_h) = partition(&data.healthy, cfg.rho, cfg.seed, 1, "healthy")?;
    let markers = |s: &PairedSample, idx: &[usize]| {
        MarkerSample::new(idx.iter().map(|&i| s.marker()[i]).collect())
    };
    Ok(SampleSplit {
        roc_diseased: markers(&data.diseased, &roc_d)?,
        roc_healthy: markers(&data.healthy, &roc_h)?,
        aroc_diseased: data.diseased.select(&aroc_d)?,
        aroc_healthy: data.healthy.select(&aroc_h)?,
        record: SplitRecord {
            seed: cfg.seed,
            rho: cfg.rho,
            roc_diseased: roc_d,
            roc_healthy: roc_h,
            aroc_diseased: aroc_d,
            aroc_healthy: aroc_h,
        },
    })
}
