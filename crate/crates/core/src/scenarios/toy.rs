//! Two interleaved half-moons in the plane.
//!
//! Class 0 points lie on the upper arc `(cos t, sin t)`, class 1 on the lower
//! arc `(1 − cos t, 0.5 − sin t)`, with `t ~ U(0, π)` and independent Gaussian
//! noise of scale `noise` added to each coordinate. The first `⌈n/2⌉` rows
//! are class 0.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{FeatureSpec, LabeledDataset};
use crate::rng::{self, Purpose};
use crate::{Error, Matrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToyGenConfig {
    pub n_rows: usize,
    pub noise: f64,
    pub seed: u64,
}

impl Default for ToyGenConfig {
    fn default() -> Self {
        Self {
            n_rows: 2000,
            noise: 0.2,
            seed: 0,
        }
    }
}

pub fn toy_schema() -> Vec<FeatureSpec> {
    alloc::vec![FeatureSpec::numeric("x"), FeatureSpec::numeric("y")]
}

pub fn generate_moons(cfg: &ToyGenConfig) -> Result<LabeledDataset> {
    if cfg.n_rows < 4 {
        return Err(Error::InvalidConfig("toy data needs at least 4 rows".into()));
    }
    if !(cfg.noise >= 0.0 && cfg.noise.is_finite()) {
        return Err(Error::InvalidConfig("noise must be a finite nonnegative number".into()));
    }
    let mut rng = rng::substream(rng::derive_key(cfg.seed, Purpose::Generator), 1);
    let n = cfg.n_rows;
    let n0 = n.div_ceil(2);
    let mut features = Matrix::zeros(n, 2);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let t = core::f64::consts::PI * rng.random::<f64>();
        let (x, y) = if i < n0 {
            (libm::cos(t), libm::sin(t))
        } else {
            (1.0 - libm::cos(t), 0.5 - libm::sin(t))
        };
        let ex: f64 = StandardNormal.sample(&mut rng);
        let ey: f64 = StandardNormal.sample(&mut rng);
        features.set(i, 0, x + cfg.noise * ex);
        features.set(i, 1, y + cfg.noise * ey);
        labels.push(usize::from(i >= n0));
    }
    LabeledDataset::new(features, labels, toy_schema(), 2)
}
