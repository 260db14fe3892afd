//! End-to-end runs on bundled synthetic data.
//!
//! Each runner splits the data (stratified), standardizes with statistics from
//! the training part, trains an original model, fits a sampling box around the
//! standardized training rows and runs a copy study evaluated on the held-out
//! rows.
//!
//! * [`run_scenario1`]: engineered features plus logistic regression, wrapped
//!   as one pipeline over the 19 raw attributes.
//! * [`run_scenario2`]: gradient-boosted trees on the raw attributes, a raw
//!   logistic-regression baseline, and an importance comparison.
//! * [`run_toy`]: an MLP on two half-moons, plus a decision-boundary grid.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub mod credit;
pub mod toy;

use crate::copier::{self, CopyConfig, CopyStudy};
use crate::data::{stratified_split, FeatureSpec, LabeledDataset, SplitConfig, Standardizer};
use crate::metrics::{self, ImportanceReport};
use crate::models::importance::{gbt_importance, tree_importance};
use crate::models::{
    gbt, logistic, mlp, Classifier, FeatureMap, GbtConfig, LrConfig, MlpConfig, Model, PipelineClassifier,
    TrainConfig,
};
use crate::sampler::{fit_region, SamplingRegion};
use crate::{Error, Result};

use credit::{CreditEngineering, CreditGenConfig, ENGINEERED_NAMES};
use toy::ToyGenConfig;

pub const DESK_N: usize = 100_000;
pub const DESK_RUNS: usize = 30;
pub const FULL_SCALE_N: usize = 1_000_000;
pub const FULL_SCALE_RUNS: usize = 100;

/// Everything a scenario run depends on. Echoed verbatim into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub paper_scale: bool,
    pub train_fraction: f64,
    pub credit: CreditGenConfig,
    pub toy: ToyGenConfig,
    pub grid_resolution: usize,
    pub train: TrainConfig,
    pub copy: CopyConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::desk(0)
    }
}

impl ScenarioConfig {
    /// N = 10⁵ synthetic points and 30 runs; every sub-seed equals `seed`.
    pub fn desk(seed: u64) -> Self {
        Self {
            seed,
            paper_scale: false,
            train_fraction: 0.8,
            credit: CreditGenConfig { seed, ..CreditGenConfig::default() },
            toy: ToyGenConfig { seed, ..ToyGenConfig::default() },
            grid_resolution: 200,
            train: TrainConfig {
                lr: LrConfig { learning_rate: 0.5, iterations: 2000, l2_penalty: 0.0 },
                cart: Default::default(),
                gbt: GbtConfig::default(),
                mlp: MlpConfig {
                    hidden_sizes: alloc::vec![32, 32],
                    learning_rate: 0.05,
                    epochs: 200,
                    batch_size: 32,
                    seed,
                },
            },
            copy: CopyConfig {
                n_train: DESK_N,
                n_test: DESK_N,
                runs: DESK_RUNS,
                base_seed: seed,
                ..CopyConfig::default()
            },
        }
    }

    /// N = 10⁶ synthetic points and 100 runs.
    pub fn paper_scale(seed: u64) -> Self {
        let mut cfg = Self::desk(seed);
        cfg.paper_scale = true;
        cfg.copy.n_train = FULL_SCALE_N;
        cfg.copy.runs = FULL_SCALE_RUNS;
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSummary {
    pub rows: usize,
    pub features: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub class_names: Vec<String>,
    pub class_counts: Vec<usize>,
    pub test_class_counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginalSummary {
    pub description: String,
    pub test_accuracy: f64,
    /// Dimension of the inputs the oracle accepts.
    pub input_dim: usize,
    /// Dimension seen by the inner model, when it differs from `input_dim`.
    pub internal_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub name: String,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub config: ScenarioConfig,
    pub data: DataSummary,
    pub original: OriginalSummary,
    pub baselines: Vec<Baseline>,
    pub copy_input_dim: usize,
    /// Copy accuracy on the held-out rows as `"mean ± std"`.
    pub copy_summary: String,
    pub copy_study: CopyStudy,
    pub importance: Option<ImportanceReport>,
    pub notes: Vec<String>,
}

impl ScenarioReport {
    pub fn baseline(&self, name: &str) -> Option<f64> {
        self.baselines.iter().find(|b| b.name == name).map(|b| b.test_accuracy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    pub original: usize,
    pub copy: usize,
}

/// Labels of the original and a representative copy on a regular grid over
/// the sampling box, in raw coordinates. Rows run over `x` fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGrid {
    pub resolution: usize,
    pub points: Vec<GridPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToyOutcome {
    pub report: ScenarioReport,
    pub grid: BoundaryGrid,
}

struct Prepared {
    standardizer: Standardizer,
    train_raw: LabeledDataset,
    train: LabeledDataset,
    test: LabeledDataset,
    region: SamplingRegion,
    summary: DataSummary,
}

fn prepare(data: &LabeledDataset, cfg: &ScenarioConfig) -> Result<Prepared> {
    let split = SplitConfig { train_fraction: cfg.train_fraction, seed: cfg.seed };
    let (train_raw, test_raw) = stratified_split(data, &split)?;
    let standardizer = Standardizer::fit(train_raw.features())?;
    let train = train_raw.with_features(standardizer.transform(train_raw.features())?)?;
    let test = test_raw.with_features(standardizer.transform(test_raw.features())?)?;
    let region = fit_region(train.features(), cfg.copy.margin)?;
    let summary = DataSummary {
        rows: data.n_rows(),
        features: data.n_features(),
        train_rows: train.n_rows(),
        test_rows: test.n_rows(),
        class_names: data.class_names().to_vec(),
        class_counts: data.class_counts(),
        test_class_counts: test.class_counts(),
    };
    Ok(Prepared { standardizer, train_raw, train, test, region, summary })
}

fn test_accuracy<C: Classifier + ?Sized>(model: &C, test: &LabeledDataset) -> Result<f64> {
    metrics::accuracy(&model.predict_batch(test.features())?, test.labels())
}

fn check_credit_schema(data: &LabeledDataset) -> Result<()> {
    let expected = credit::credit_schema();
    let names: Vec<&str> = data.schema().iter().map(|s| s.name.as_str()).collect();
    let wanted: Vec<&str> = expected.iter().map(|s| s.name.as_str()).collect();
    if names != wanted || data.class_count() != 2 {
        return Err(Error::InvalidSchema(
            "expected the 19-column credit schema with two classes".to_string(),
        ));
    }
    Ok(())
}

fn study_summary(study: &CopyStudy) -> String {
    alloc::format!("{:.3}", study.headline())
}

const SUBSTITUTE_DATA_NOTE: &str = "data: synthetic credit-like table; every attribute except age and economy_level is an invented stand-in";

/// Engineered features plus logistic regression, copied on raw attributes.
pub fn run_scenario1(data: &LabeledDataset, cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    check_credit_schema(data)?;
    let p = prepare(data, cfg)?;
    let engineering = CreditEngineering::default();
    let engineered = engineering.transform(p.train_raw.features())?;
    let eng_std = Standardizer::fit(&engineered)?;
    let eng_schema: Vec<FeatureSpec> = ENGINEERED_NAMES.iter().map(|n| FeatureSpec::numeric(*n)).collect();
    let eng_train = p.train.with_view(eng_std.transform(&engineered)?, eng_schema)?;
    let lr = logistic::train(&eng_train, &cfg.train.lr)?;

    let feature_map = FeatureMap::Chain(alloc::vec![
        FeatureMap::Unstandardize(p.standardizer.clone()),
        FeatureMap::CreditEngineering(engineering),
        FeatureMap::Standardize(eng_std),
    ]);
    let oracle = PipelineClassifier::new(feature_map, Model::Lr(lr))?;
    let internal_dim = oracle.inner.input_dim();
    if oracle.input_dim() != p.region.dim() || internal_dim == oracle.input_dim() {
        return Err(Error::DimensionMismatch { expected: p.region.dim(), found: oracle.input_dim() });
    }
    let original_accuracy = test_accuracy(&oracle, &p.test)?;
    let raw_lr = logistic::train(&p.train, &cfg.train.lr)?;

    let study = copier::run_study(&oracle, &p.region, &cfg.copy, Some(&p.test))?;
    Ok(ScenarioReport {
        scenario: "scenario1".to_string(),
        config: cfg.clone(),
        data: p.summary,
        original: OriginalSummary {
            description: "logistic regression on 6 engineered variables, wrapped as a pipeline over raw attributes"
                .to_string(),
            test_accuracy: original_accuracy,
            input_dim: oracle.input_dim(),
            internal_dim: Some(internal_dim),
        },
        baselines: alloc::vec![Baseline { name: "raw_lr".to_string(), test_accuracy: test_accuracy(&raw_lr, &p.test)? }],
        copy_input_dim: p.region.dim(),
        copy_summary: study_summary(&study),
        copy_study: study,
        importance: None,
        notes: alloc::vec![
            SUBSTITUTE_DATA_NOTE.to_string(),
            "engineered variables debt_service_ratio, loan_to_value, rate_x_ltv and history_ratio are invented stand-ins"
                .to_string(),
        ],
    })
}

/// Gradient-boosted trees on raw attributes, with a raw LR baseline and an
/// importance comparison against the median-accuracy copy.
pub fn run_scenario2(data: &LabeledDataset, cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    check_credit_schema(data)?;
    let p = prepare(data, cfg)?;
    let model = gbt::train(&p.train, &cfg.train.gbt)?;
    let original_accuracy = test_accuracy(&model, &p.test)?;
    let raw_lr = logistic::train(&p.train, &cfg.train.lr)?;

    let study = copier::run_study(&model, &p.region, &cfg.copy, Some(&p.test))?;
    let median = study.median_run();
    let representative = copier::build_copy(&model, &p.region, &cfg.copy, study.per_run[median].seed, Some(&p.test))?;
    let names = data.feature_names();
    let importance = metrics::compare_importances(
        &gbt_importance(&model).values,
        &tree_importance(&representative.copy).values,
        &names,
    )?;

    Ok(ScenarioReport {
        scenario: "scenario2".to_string(),
        config: cfg.clone(),
        data: p.summary,
        original: OriginalSummary {
            description: "gradient-boosted trees on raw attributes".to_string(),
            test_accuracy: original_accuracy,
            input_dim: model.n_features,
            internal_dim: None,
        },
        baselines: alloc::vec![Baseline { name: "raw_lr".to_string(), test_accuracy: test_accuracy(&raw_lr, &p.test)? }],
        copy_input_dim: p.region.dim(),
        copy_summary: study_summary(&study),
        copy_study: study,
        importance: Some(importance),
        notes: alloc::vec![
            SUBSTITUTE_DATA_NOTE.to_string(),
            alloc::format!("importance copy: run {median} (median held-out accuracy)"),
        ],
    })
}

/// MLP on two half-moons, copied with CART, plus a boundary grid.
pub fn run_toy(cfg: &ScenarioConfig) -> Result<ToyOutcome> {
    let data = toy::generate_moons(&cfg.toy)?;
    let p = prepare(&data, cfg)?;
    let model = mlp::train(&p.train, &cfg.train.mlp)?;
    let original_accuracy = test_accuracy(&model, &p.test)?;
    let study = copier::run_study(&model, &p.region, &cfg.copy, Some(&p.test))?;
    let median = study.median_run();
    let representative = copier::build_copy(&model, &p.region, &cfg.copy, study.per_run[median].seed, None)?;
    let grid = boundary_grid(&model, &representative.copy, &p.region, &p.standardizer, cfg.grid_resolution)?;

    let report = ScenarioReport {
        scenario: "toy".to_string(),
        config: cfg.clone(),
        data: p.summary,
        original: OriginalSummary {
            description: "multilayer perceptron on two interleaved half-moons".to_string(),
            test_accuracy: original_accuracy,
            input_dim: 2,
            internal_dim: None,
        },
        baselines: Vec::new(),
        copy_input_dim: p.region.dim(),
        copy_summary: study_summary(&study),
        copy_study: study,
        importance: None,
        notes: alloc::vec![
            "data: two interleaved half-moons with Gaussian noise, a stand-in for an unspecified toy set".to_string(),
            alloc::format!("boundary grid copy: run {median} (median held-out accuracy)"),
        ],
    };
    Ok(ToyOutcome { report, grid })
}

/// Evaluates both models on a `resolution × resolution` lattice spanning the
/// (standardized) region and reports coordinates in raw units.
pub fn boundary_grid<A, B>(
    original: &A,
    copy: &B,
    region: &SamplingRegion,
    standardizer: &Standardizer,
    resolution: usize,
) -> Result<BoundaryGrid>
where
    A: Classifier + ?Sized,
    B: Classifier + ?Sized,
{
    if region.dim() != 2 || standardizer.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: region.dim() });
    }
    if resolution < 2 {
        return Err(Error::InvalidConfig("grid resolution must be at least 2".into()));
    }
    let step = |j: usize, k: usize| {
        let t = k as f64 / (resolution - 1) as f64;
        region.lower[j] + (region.upper[j] - region.lower[j]) * t
    };
    let mut points = Vec::with_capacity(resolution * resolution);
    let mut raw = [0.0; 2];
    for iy in 0..resolution {
        for ix in 0..resolution {
            let z = [step(0, ix), step(1, iy)];
            standardizer.inverse_point(&z, &mut raw);
            points.push(GridPoint {
                x: raw[0],
                y: raw[1],
                original: original.predict_unchecked(&z),
                copy: copy.predict_unchecked(&z),
            });
        }
    }
    Ok(BoundaryGrid { resolution, points })
}
