//! The copy procedure and repeated-run studies.
//!
//! One run: draw `n_train` points from the region, label them with the
//! oracle, grow an unconstrained CART tree on them, then measure agreement
//! with the oracle on `n_test` fresh points from an independent stream and,
//! when given, accuracy and agreement on an original held-out set.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::data::LabeledDataset;
use crate::metrics;
use crate::models::{tree, CartConfig, Classifier, DecisionTreeModel};
use crate::rng::Purpose;
use crate::sampler::{self, SamplingRegion, DEFAULT_CHUNK_SIZE};
use crate::stats::{Histogram, Summary};
use crate::{par, Error, Result};

/// Model family used for copies. Only CART is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CopyFamily {
    #[default]
    Cart,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CopyConfig {
    pub n_train: usize,
    pub n_test: usize,
    /// Region margin used when the region is fit from data.
    pub margin: f64,
    pub copy_family: CopyFamily,
    pub copy_train_cfg: CartConfig,
    pub runs: usize,
    pub base_seed: u64,
    pub chunk_size: usize,
    pub histogram_bins: usize,
}

impl Default for CopyConfig {
    fn default() -> Self {
        Self {
            n_train: 100_000,
            n_test: 100_000,
            margin: 0.05,
            copy_family: CopyFamily::Cart,
            copy_train_cfg: CartConfig::default(),
            runs: 30,
            base_seed: 0,
            chunk_size: DEFAULT_CHUNK_SIZE,
            histogram_bins: 20,
        }
    }
}

impl CopyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_train == 0 || self.n_test == 0 {
            return Err(Error::InvalidConfig("n_train and n_test must be at least 1".into()));
        }
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidConfig("chunk_size must be at least 1".into()));
        }
        if !(self.margin >= 0.0 && self.margin.is_finite()) {
            return Err(Error::InvalidConfig("margin must be a finite nonnegative number".into()));
        }
        Ok(())
    }
}

/// Metrics of one copy run. Every value lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub seed: u64,
    pub synthetic_train_accuracy: f64,
    pub synthetic_test_fidelity: f64,
    pub original_test_accuracy: Option<f64>,
    pub original_test_fidelity: Option<f64>,
    pub leaves: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CopyResult {
    pub copy: DecisionTreeModel,
    pub metrics: RunMetrics,
}

/// Builds one copy of `oracle` with all randomness drawn from `seed`.
pub fn build_copy<C: Classifier + ?Sized>(
    oracle: &C,
    region: &SamplingRegion,
    cfg: &CopyConfig,
    seed: u64,
    original_test: Option<&LabeledDataset>,
) -> Result<CopyResult> {
    cfg.validate()?;
    if let Some(test) = original_test {
        if test.n_features() != oracle.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: oracle.input_dim(),
                found: test.n_features(),
            });
        }
    }
    let unconstrained = cfg.copy_train_cfg.is_unconstrained();
    let train = sampler::synthetic_dataset(
        oracle,
        region,
        cfg.n_train,
        seed,
        Purpose::SyntheticTrain,
        cfg.chunk_size,
        None,
    )?;
    let copy = tree::train(&train, &cfg.copy_train_cfg)?;
    let train_pred = copy.predict_batch(train.features())?;
    let synthetic_train_accuracy = metrics::accuracy(&train_pred, train.labels())?;
    if unconstrained && synthetic_train_accuracy != 1.0 {
        return Err(Error::NonzeroEmpiricalError {
            accuracy: synthetic_train_accuracy,
        });
    }
    drop(train);

    let agree = sampler::streamed_agreement(
        &copy,
        oracle,
        region,
        cfg.n_test,
        seed,
        Purpose::SyntheticTest,
        cfg.chunk_size,
    )?;
    let synthetic_test_fidelity = agree as f64 / cfg.n_test as f64;

    let (original_test_accuracy, original_test_fidelity) = match original_test {
        Some(test) => {
            let pred = copy.predict_batch(test.features())?;
            let oracle_pred = oracle.predict_batch(test.features())?;
            (
                Some(metrics::accuracy(&pred, test.labels())?),
                Some(metrics::accuracy(&pred, &oracle_pred)?),
            )
        }
        None => (None, None),
    };

    let metrics = RunMetrics {
        seed,
        synthetic_train_accuracy,
        synthetic_test_fidelity,
        original_test_accuracy,
        original_test_fidelity,
        leaves: copy.n_leaves(),
        depth: copy.depth(),
    };
    Ok(CopyResult { copy, metrics })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySummaries {
    pub synthetic_train_accuracy: Summary,
    pub synthetic_test_fidelity: Summary,
    pub original_test_accuracy: Option<Summary>,
    pub original_test_fidelity: Option<Summary>,
}

/// Outcome of `runs` independent copies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopyStudy {
    pub config: CopyConfig,
    /// Indexed by run; run `r` used seed `base_seed + r`.
    pub per_run: Vec<RunMetrics>,
    pub summaries: StudySummaries,
    /// Histogram of original-test accuracy, or of synthetic-test fidelity
    /// when no original test set was supplied.
    pub histogram: Histogram,
}

impl CopyStudy {
    /// The values the histogram and headline figure are computed from.
    pub fn headline_values(&self) -> Vec<f64> {
        self.per_run
            .iter()
            .map(|m| m.original_test_accuracy.unwrap_or(m.synthetic_test_fidelity))
            .collect()
    }

    pub fn headline(&self) -> Summary {
        self.summaries
            .original_test_accuracy
            .unwrap_or(self.summaries.synthetic_test_fidelity)
    }

    /// Run whose headline value is the lower median; ties go to the earlier run.
    pub fn median_run(&self) -> usize {
        let values = self.headline_values();
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        order[(order.len() - 1) / 2]
    }
}

fn summarize(per_run: &[RunMetrics]) -> StudySummaries {
    let collect = |f: fn(&RunMetrics) -> f64| -> Vec<f64> { per_run.iter().map(f).collect() };
    let optional = |f: fn(&RunMetrics) -> Option<f64>| -> Option<Summary> {
        per_run.iter().map(f).collect::<Option<Vec<f64>>>().map(|v| Summary::of(&v))
    };
    StudySummaries {
        synthetic_train_accuracy: Summary::of(&collect(|m| m.synthetic_train_accuracy)),
        synthetic_test_fidelity: Summary::of(&collect(|m| m.synthetic_test_fidelity)),
        original_test_accuracy: optional(|m| m.original_test_accuracy),
        original_test_fidelity: optional(|m| m.original_test_fidelity),
    }
}

/// Runs `cfg.runs` copies in parallel; run `r` uses seed `cfg.base_seed + r`.
pub fn run_study<C: Classifier + ?Sized>(
    oracle: &C,
    region: &SamplingRegion,
    cfg: &CopyConfig,
    original_test: Option<&LabeledDataset>,
) -> Result<CopyStudy> {
    cfg.validate()?;
    if !cfg.copy_train_cfg.is_unconstrained() {
        log::warn!(
            "copy tree growth is constrained ({:?}); copies are meant to grow without capacity limits",
            cfg.copy_train_cfg
        );
    }
    let results = par::map_range(cfg.runs, |r| {
        build_copy(oracle, region, cfg, cfg.base_seed.wrapping_add(r as u64), original_test)
            .map(|res| res.metrics)
    });
    let per_run = results.into_iter().collect::<Result<Vec<_>>>()?;
    let summaries = summarize(&per_run);
    let mut study = CopyStudy {
        config: cfg.clone(),
        per_run,
        summaries,
        histogram: Histogram::equal_width(&[], 1),
    };
    study.histogram = Histogram::equal_width(&study.headline_values(), cfg.histogram_bins);
    Ok(study)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub runs: usize,
    pub mean_fidelity: f64,
    pub std_fidelity: f64,
    pub mean_original_accuracy: Option<f64>,
}

/// One study per sample size. Runs at every `n` share the seeds
/// `base_seed + r`, so each training sample extends the previous one.
pub fn fidelity_vs_n_sweep<C: Classifier + ?Sized>(
    oracle: &C,
    region: &SamplingRegion,
    n_values: &[usize],
    runs_per_n: usize,
    base_seed: u64,
    original_test: Option<&LabeledDataset>,
    cfg: &CopyConfig,
) -> Result<Vec<SweepRow>> {
    if n_values.is_empty() {
        return Err(Error::InvalidConfig("sweep needs at least one sample size".into()));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig("sweep sample sizes must be strictly increasing".into()));
    }
    n_values
        .iter()
        .map(|&n| {
            let study_cfg = CopyConfig {
                n_train: n,
                runs: runs_per_n,
                base_seed,
                ..cfg.clone()
            };
            let study = run_study(oracle, region, &study_cfg, original_test)?;
            Ok(SweepRow {
                n,
                runs: runs_per_n,
                mean_fidelity: study.summaries.synthetic_test_fidelity.mean,
                std_fidelity: study.summaries.synthetic_test_fidelity.std,
                mean_original_accuracy: study.summaries.original_test_accuracy.map(|s| s.mean),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ConstantClassifier;

    struct Threshold;

    impl Classifier for Threshold {
        fn input_dim(&self) -> usize {
            2
        }
        fn class_count(&self) -> usize {
            2
        }
        fn predict_unchecked(&self, x: &[f64]) -> usize {
            usize::from(x[0] > 0.0)
        }
    }

    fn small(n: usize) -> CopyConfig {
        CopyConfig { n_train: n, n_test: n, runs: 3, chunk_size: 1024, ..CopyConfig::default() }
    }

    #[test]
    fn constant_oracle_gives_single_leaf() {
        let oracle = ConstantClassifier { input_dim: 3, class_count: 2, class: 1 };
        let r = build_copy(&oracle, &SamplingRegion::unit_cube(3), &small(500), 4, None).unwrap();
        assert_eq!(r.copy.n_leaves(), 1);
        assert_eq!(r.metrics.synthetic_train_accuracy, 1.0);
        assert_eq!(r.metrics.synthetic_test_fidelity, 1.0);
    }

    #[test]
    fn threshold_oracle_is_recovered() {
        let region = SamplingRegion::new(alloc::vec![-1.0, -1.0], alloc::vec![1.0, 1.0]).unwrap();
        let r = build_copy(&Threshold, &region, &small(10_000), 1, None).unwrap();
        assert_eq!(r.copy.depth(), 1);
        assert!(r.metrics.synthetic_test_fidelity >= 0.99);
    }

    #[test]
    fn single_run_study_has_zero_std() {
        let region = SamplingRegion::new(alloc::vec![-1.0, -1.0], alloc::vec![1.0, 1.0]).unwrap();
        let cfg = CopyConfig { runs: 1, ..small(2000) };
        let s = run_study(&Threshold, &region, &cfg, None).unwrap();
        assert_eq!(s.per_run.len(), 1);
        assert_eq!(s.summaries.synthetic_test_fidelity.std, 0.0);
        assert_eq!(s.summaries.synthetic_test_fidelity.mean, s.per_run[0].synthetic_test_fidelity);
        assert_eq!(s.median_run(), 0);
    }

    #[test]
    fn sweep_rejects_unsorted_sizes() {
        let oracle = ConstantClassifier { input_dim: 2, class_count: 2, class: 0 };
        let r = SamplingRegion::unit_cube(2);
        assert!(fidelity_vs_n_sweep(&oracle, &r, &[100, 100], 2, 0, None, &small(10)).is_err());
        let rows = fidelity_vs_n_sweep(&oracle, &r, &[50], 2, 0, None, &small(10)).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].mean_fidelity, 1.0);
    }
}
