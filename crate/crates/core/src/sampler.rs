//! Synthetic data: a box-shaped sampling region over the feature space,
//! uniform draws inside it, and labels assigned by an oracle classifier.
//!
//! Samples are produced in chunks. Chunk `c` is drawn from ChaCha8 stream `c`
//! under a key derived from the seed, so the matrix for a given seed is the
//! same regardless of how many workers generate it. Chunks are cut at fixed
//! row offsets, so a sample of `N` rows is a prefix of any larger sample drawn
//! with the same seed and chunk size.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{anonymous_schema, FeatureSpec, LabeledDataset};
use crate::models::Classifier;
use crate::rng::{self, Purpose};
use crate::{par, Error, Matrix, Result};

pub const DEFAULT_CHUNK_SIZE: usize = 65_536;

/// Per-feature closed intervals `[lower[i], upper[i]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingRegion {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl SamplingRegion {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let r = Self { lower, upper };
        r.validate()?;
        Ok(r)
    }

    pub fn unit_cube(d: usize) -> Self {
        Self {
            lower: alloc::vec![0.0; d],
            upper: alloc::vec![1.0; d],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower.len() != self.upper.len() {
            return Err(Error::DimensionMismatch {
                expected: self.lower.len(),
                found: self.upper.len(),
            });
        }
        for (feature, (lo, hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidRegion { feature });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }
}

/// Bounding box of `features` widened by `margin · range` on each side.
/// Zero-range features get `value ± 0.5`.
pub fn fit_region(features: &Matrix, margin: f64) -> Result<SamplingRegion> {
    if features.rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    if !(margin >= 0.0 && margin.is_finite()) {
        return Err(Error::InvalidConfig("margin must be a finite nonnegative number".into()));
    }
    let d = features.cols();
    let mut lower = alloc::vec![f64::INFINITY; d];
    let mut upper = alloc::vec![f64::NEG_INFINITY; d];
    for row in features.iter_rows() {
        for j in 0..d {
            lower[j] = lower[j].min(row[j]);
            upper[j] = upper[j].max(row[j]);
        }
    }
    for j in 0..d {
        let range = upper[j] - lower[j];
        if range == 0.0 {
            lower[j] -= 0.5;
            upper[j] += 0.5;
        } else {
            lower[j] -= margin * range;
            upper[j] += margin * range;
        }
    }
    SamplingRegion::new(lower, upper)
}

/// Shape of the sampling distribution over the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    #[default]
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    pub n_samples: usize,
    pub seed: u64,
    /// Region expansion as a fraction of each feature's observed range.
    pub margin: f64,
    pub chunk_size: usize,
    pub distribution: Distribution,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            n_samples: 1_000_000,
            seed: 0,
            margin: 0.05,
            chunk_size: DEFAULT_CHUNK_SIZE,
            distribution: Distribution::Uniform,
        }
    }
}

/// `rows` uniform points from chunk stream `chunk` under `key`.
pub fn sample_chunk(region: &SamplingRegion, key: u64, chunk: u64, rows: usize) -> Matrix {
    let d = region.dim();
    let mut rng = rng::substream(key, chunk);
    let mut data = Vec::with_capacity(rows * d);
    for _ in 0..rows {
        for j in 0..d {
            let (lo, hi) = (region.lower[j], region.upper[j]);
            let u: f64 = rng.random();
            data.push((lo + (hi - lo) * u).min(hi));
        }
    }
    Matrix::from_vec(rows, d, data).expect("sizes agree")
}

fn chunk_bounds(n: usize, chunk_size: usize) -> impl Iterator<Item = (u64, usize, usize)> {
    let chunk_size = chunk_size.max(1);
    (0..n.div_ceil(chunk_size)).map(move |c| {
        let start = c * chunk_size;
        (c as u64, start, (start + chunk_size).min(n) - start)
    })
}

fn sample_with_key(region: &SamplingRegion, key: u64, n: usize, chunk_size: usize) -> Matrix {
    let chunks: Vec<(u64, usize, usize)> = chunk_bounds(n, chunk_size).collect();
    let parts = par::map_range(chunks.len(), |c| {
        let (id, _, rows) = chunks[c];
        sample_chunk(region, key, id, rows)
    });
    let mut out = Matrix::zeros(0, region.dim());
    for p in &parts {
        out.vstack(p).expect("same width");
    }
    out
}

/// `cfg.n_samples` i.i.d. uniform points inside `region`.
pub fn sample_uniform(region: &SamplingRegion, cfg: &SamplerConfig) -> Result<Matrix> {
    region.validate()?;
    if cfg.n_samples == 0 {
        return Err(Error::InvalidConfig("n_samples must be at least 1".into()));
    }
    let key = rng::derive_key(cfg.seed, Purpose::SyntheticTrain);
    Ok(sample_with_key(region, key, cfg.n_samples, cfg.chunk_size))
}

fn check_oracle<C: Classifier + ?Sized>(oracle: &C, d: usize) -> Result<()> {
    if oracle.input_dim() != d {
        return Err(Error::DimensionMismatch {
            expected: oracle.input_dim(),
            found: d,
        });
    }
    Ok(())
}

fn oracle_labels<C: Classifier + ?Sized>(points: &Matrix, oracle: &C, row_offset: usize) -> Result<Vec<usize>> {
    let k = oracle.class_count();
    points
        .iter_rows()
        .enumerate()
        .map(|(i, row)| {
            let label = oracle.predict_unchecked(row);
            if label >= k {
                return Err(Error::OracleFailure {
                    row: row_offset + i,
                    reason: alloc::format!("label {label} outside 0..{k}"),
                });
            }
            Ok(label)
        })
        .collect()
}

/// Labels every row with the oracle's prediction. Without a schema the
/// features are named `x0, x1, ...`.
pub fn label_with_oracle<C: Classifier + ?Sized>(
    points: Matrix,
    oracle: &C,
    schema: Option<&[FeatureSpec]>,
) -> Result<LabeledDataset> {
    check_oracle(oracle, points.cols())?;
    let labels = oracle_labels(&points, oracle, 0)?;
    let schema = schema.map_or_else(|| anonymous_schema(points.cols()), <[FeatureSpec]>::to_vec);
    LabeledDataset::new(points, labels, schema, oracle.class_count())
}

/// Draws `n` points for `(seed, purpose)` and labels them chunk by chunk.
pub fn synthetic_dataset<C: Classifier + ?Sized>(
    oracle: &C,
    region: &SamplingRegion,
    n: usize,
    seed: u64,
    purpose: Purpose,
    chunk_size: usize,
    schema: Option<&[FeatureSpec]>,
) -> Result<LabeledDataset> {
    region.validate()?;
    check_oracle(oracle, region.dim())?;
    if n == 0 {
        return Err(Error::InvalidConfig("synthetic sample size must be at least 1".into()));
    }
    let key = rng::derive_key(seed, purpose);
    let chunks: Vec<(u64, usize, usize)> = chunk_bounds(n, chunk_size).collect();
    let parts = par::map_range(chunks.len(), |c| {
        let (id, start, rows) = chunks[c];
        let points = sample_chunk(region, key, id, rows);
        oracle_labels(&points, oracle, start).map(|labels| (points, labels))
    });
    let mut features = Matrix::zeros(0, region.dim());
    let mut labels = Vec::with_capacity(n);
    for part in parts {
        let (p, l) = part?;
        features.vstack(&p)?;
        labels.extend(l);
    }
    let schema = schema.map_or_else(|| anonymous_schema(region.dim()), <[FeatureSpec]>::to_vec);
    LabeledDataset::new(features, labels, schema, oracle.class_count())
}

/// Number of `n` fresh points where `a` and `b` agree, streamed chunk by chunk
/// so only one chunk per worker is ever held in memory.
pub fn streamed_agreement<A, B>(
    a: &A,
    b: &B,
    region: &SamplingRegion,
    n: usize,
    seed: u64,
    purpose: Purpose,
    chunk_size: usize,
) -> Result<usize>
where
    A: Classifier + ?Sized,
    B: Classifier + ?Sized,
{
    region.validate()?;
    check_oracle(a, region.dim())?;
    check_oracle(b, region.dim())?;
    let key = rng::derive_key(seed, purpose);
    let chunks: Vec<(u64, usize, usize)> = chunk_bounds(n, chunk_size).collect();
    let counts = par::map_range(chunks.len(), |c| {
        let (id, _, rows) = chunks[c];
        let points = sample_chunk(region, key, id, rows);
        points
            .iter_rows()
            .filter(|r| a.predict_unchecked(r) == b.predict_unchecked(r))
            .count()
    });
    Ok(counts.into_iter().sum())
}
