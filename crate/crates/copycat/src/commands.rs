use std::path::Path;

use anyhow::{bail, Context, Result};
use copycat_core::copier::{build_copy, run_study, CopyConfig, CopyStudy};
use copycat_core::data::{stratified_split, FeatureSpec, LabeledDataset, SplitConfig, Standardizer};
use copycat_core::metrics::accuracy;
use copycat_core::models::{impurity_feature_importance, Classifier, Family, Model};
use copycat_core::rng::Purpose;
use copycat_core::sampler::{fit_region, synthetic_dataset, SamplingRegion};
use copycat_core::scenarios::credit::{credit_schema, generate_credit_like, CreditGenConfig, CLASS_NAMES};
use copycat_core::scenarios::toy::{generate_moons, ToyGenConfig};
use copycat_core::scenarios::{run_scenario1, run_scenario2, run_toy, ScenarioConfig};
use serde::Serialize;

use crate::cli::{
    Command, CopyArgs, DatasetKind, GenerateArgs, ImportanceArgs, ModelKind, SampleArgs, ScenarioArgs,
    ScenarioName, TrainArgs,
};
use crate::config::RunConfig;
use crate::io::{load_dataset, write_dataset, write_json, write_rows};
use crate::persist::{load_model, load_standardizer, raw_oracle, save_model, standardizer_path, ModelFile};
use crate::report::write_scenario;

/// Label column written by `generate credit`.
pub const CREDIT_LABEL: &str = "status";
/// Label column written by `generate toy`.
pub const TOY_LABEL: &str = "label";
/// Label column written by `sample`.
pub const SYNTHETIC_LABEL: &str = "synthetic_label";

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Train(a) => train(&a),
        Command::Copy(a) => copy(&a),
        Command::Scenario(a) => scenario(&a),
        Command::Importance(a) => importance(&a),
        Command::Generate(a) => generate(&a),
        Command::Sample(a) => sample(&a),
    }
}

fn family(kind: ModelKind) -> Family {
    match kind {
        ModelKind::Lr => Family::Lr,
        ModelKind::Cart => Family::Cart,
        ModelKind::Gbt => Family::Gbt,
        ModelKind::Mlp => Family::Mlp,
    }
}

fn test_accuracy<C: Classifier + ?Sized>(model: &C, data: &LabeledDataset) -> Result<f64> {
    Ok(accuracy(&model.predict_batch(data.features())?, data.labels())?)
}

fn train(a: &TrainArgs) -> Result<()> {
    let cfg = RunConfig::load_or_default(a.config.as_deref())?;
    let data = load_dataset(&a.data, Some(&a.label), None, None)?;
    let mut train_cfg = cfg.train.clone();
    let mut split_cfg = cfg.split;
    if let Some(seed) = a.seed {
        train_cfg.mlp.seed = seed;
        split_cfg.seed = seed;
    }
    let (train_raw, test_raw) = match a.split {
        Some(fraction) => {
            split_cfg.train_fraction = fraction;
            let (tr, te) = stratified_split(&data, &split_cfg)?;
            (tr, Some(te))
        }
        None => (data.clone(), None),
    };
    let standardizer = Standardizer::fit(train_raw.features())?;
    let standardized = |d: &LabeledDataset| d.with_features(standardizer.transform(d.features())?);
    let train_set = standardized(&train_raw)?;
    let model = Model::train(family(a.model), &train_set, &train_cfg)?;

    let file = ModelFile {
        model,
        schema: Some(data.schema().to_vec()),
        class_names: Some(data.class_names().to_vec()),
    };
    save_model(&a.out, &file)?;
    write_json(&standardizer_path(&a.out), &standardizer)?;

    println!("train accuracy: {:.4}", test_accuracy(&file.model, &train_set)?);
    if let Some(test_raw) = test_raw {
        let test_set = standardized(&test_raw)?;
        println!("test accuracy: {:.4}", test_accuracy(&file.model, &test_set)?);
    }
    println!("model written to {}", a.out.display());
    Ok(())
}

/// Saved oracle on raw features, with its schema and class names.
struct Oracle {
    file: ModelFile,
    model: Model,
    standardized: bool,
}

fn load_oracle(path: &Path) -> Result<Oracle> {
    let file = load_model(path).with_context(|| format!("loading model {}", path.display()))?;
    let standardizer = load_standardizer(path)?;
    let standardized = standardizer.is_some();
    let model = raw_oracle(&file, standardizer)?;
    Ok(Oracle { file, model, standardized })
}

fn load_for_oracle(path: &Path, label: Option<&str>, oracle: &Oracle) -> Result<LabeledDataset> {
    let data = load_dataset(
        path,
        label,
        oracle.file.schema.as_deref(),
        oracle.file.class_names.as_deref(),
    )
    .with_context(|| format!("loading data {}", path.display()))?;
    if data.n_features() != oracle.model.input_dim() {
        bail!(
            "{} has {} feature columns but the model expects {}",
            path.display(),
            data.n_features(),
            oracle.model.input_dim()
        );
    }
    Ok(data)
}

#[derive(Serialize)]
struct OracleEcho<'a> {
    path: String,
    family: &'a str,
    standardized: bool,
}

#[derive(Serialize)]
struct DataEcho {
    path: String,
    rows: usize,
    region_rows: usize,
    evaluation_rows: usize,
    split: Option<SplitConfig>,
}

#[derive(Serialize)]
struct CopyOutput<'a> {
    oracle: OracleEcho<'a>,
    data: DataEcho,
    region: &'a SamplingRegion,
    study: &'a CopyStudy,
}

fn copy(a: &CopyArgs) -> Result<()> {
    let cfg = RunConfig::load_or_default(a.config.as_deref())?;
    let oracle = load_oracle(&a.oracle)?;
    let data = load_for_oracle(&a.data, a.label.as_deref(), &oracle)?;

    let copy_cfg = CopyConfig {
        n_train: a.n.unwrap_or(cfg.copy.n_train),
        n_test: a.n_test.unwrap_or(cfg.copy.n_test),
        runs: a.runs.unwrap_or(cfg.copy.runs),
        base_seed: a.seed.unwrap_or(cfg.copy.base_seed),
        ..cfg.copy.clone()
    };
    let split = a.split.map(|train_fraction| SplitConfig { train_fraction, seed: copy_cfg.base_seed });
    let (region_data, evaluation) = match &split {
        Some(s) => stratified_split(&data, s)?,
        None => (data.clone(), data.clone()),
    };
    let region = fit_region(region_data.features(), copy_cfg.margin)?;
    let study = run_study(&oracle.model, &region, &copy_cfg, Some(&evaluation))?;

    let output = CopyOutput {
        oracle: OracleEcho {
            path: a.oracle.display().to_string(),
            family: oracle.file.model.family().as_str(),
            standardized: oracle.standardized,
        },
        data: DataEcho {
            path: a.data.display().to_string(),
            rows: data.n_rows(),
            region_rows: region_data.n_rows(),
            evaluation_rows: evaluation.n_rows(),
            split,
        },
        region: &region,
        study: &study,
    };
    write_json(&a.out, &output)?;

    if let Some(path) = &a.save_copy {
        let seed = study.per_run[study.median_run()].seed;
        let result = build_copy(&oracle.model, &region, &copy_cfg, seed, Some(&evaluation))?;
        let file = ModelFile {
            model: Model::Cart(result.copy),
            schema: Some(data.schema().to_vec()),
            class_names: Some(data.class_names().to_vec()),
        };
        save_model(path, &file)?;
    }

    println!("copy accuracy: {}", study.headline());
    println!("synthetic fidelity: {}", study.summaries.synthetic_test_fidelity);
    Ok(())
}

fn scenario(a: &ScenarioArgs) -> Result<()> {
    let mut cfg = if a.paper_scale {
        ScenarioConfig::paper_scale(a.seed)
    } else {
        ScenarioConfig::desk(a.seed)
    };
    if let Some(n) = a.n {
        cfg.copy.n_train = n;
    }
    if let Some(runs) = a.runs {
        cfg.copy.runs = runs;
    }
    if a.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg)?);
        return Ok(());
    }
    let credit_data = || -> Result<LabeledDataset> {
        match &a.data {
            Some(path) => {
                let names: Vec<String> = CLASS_NAMES.iter().map(|s| s.to_string()).collect();
                let schema = credit_schema();
                Ok(load_dataset(path, None, Some(&schema), Some(&names))?)
            }
            None => Ok(generate_credit_like(&cfg.credit)?),
        }
    };
    let (report, grid) = match a.name {
        ScenarioName::Toy => {
            if a.data.is_some() {
                bail!("--data applies to the credit scenarios only");
            }
            let outcome = run_toy(&cfg)?;
            (outcome.report, Some(outcome.grid))
        }
        ScenarioName::Scenario1 => (run_scenario1(&credit_data()?, &cfg)?, None),
        ScenarioName::Scenario2 => (run_scenario2(&credit_data()?, &cfg)?, None),
    };
    let written = write_scenario(&a.out, &report, grid.as_ref())?;

    println!("{}: {}", report.scenario, report.original.description);
    println!("original test accuracy: {:.3}", report.original.test_accuracy);
    for b in &report.baselines {
        println!("{} test accuracy: {:.3}", b.name, b.test_accuracy);
    }
    println!("copy accuracy: {}", report.copy_summary);
    if let Some(imp) = &report.importance {
        println!(
            "importance: spearman {}, top-3 overlap {}, concentration {:.3} (original) vs {:.3} (copy)",
            imp.spearman.map_or_else(|| "n/a".to_owned(), |s| format!("{s:.3}")),
            imp.top3_overlap,
            imp.original_concentration,
            imp.copy_concentration
        );
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn importance(a: &ImportanceArgs) -> Result<()> {
    let file = load_model(&a.model)?;
    let imp = impurity_feature_importance(&file.model)?;
    if imp.degenerate {
        log::warn!("model has no splits; importances are uniform");
    }
    let names = file.feature_names();
    let rows = names.iter().zip(&imp.values).map(|(n, v)| [n.clone(), v.to_string()]);
    write_rows(&a.out, &["feature", "importance"], rows)?;
    println!("wrote {} importances to {}", imp.values.len(), a.out.display());
    Ok(())
}

fn generate(a: &GenerateArgs) -> Result<()> {
    let cfg = RunConfig::load_or_default(a.config.as_deref())?;
    let (data, label) = match a.kind {
        DatasetKind::Credit => {
            let gen = CreditGenConfig {
                seed: a.seed,
                n_rows: a.rows.unwrap_or(cfg.credit.n_rows),
                ..cfg.credit
            };
            (generate_credit_like(&gen)?, CREDIT_LABEL)
        }
        DatasetKind::Toy => {
            let defaults = ToyGenConfig::default();
            let gen = ToyGenConfig { seed: a.seed, n_rows: a.rows.unwrap_or(defaults.n_rows), ..defaults };
            (generate_moons(&gen)?, TOY_LABEL)
        }
    };
    write_dataset(&a.out, &data, label)?;
    println!("wrote {} rows to {}", data.n_rows(), a.out.display());
    Ok(())
}

fn sample(a: &SampleArgs) -> Result<()> {
    let cfg = RunConfig::load_or_default(a.config.as_deref())?;
    let oracle = load_oracle(&a.oracle)?;
    let data = load_for_oracle(&a.data, a.label.as_deref(), &oracle)?;
    let n = a.n.unwrap_or(cfg.sampler.n_samples);
    let seed = a.seed.unwrap_or(cfg.sampler.seed);
    let region = fit_region(data.features(), cfg.sampler.margin)?;
    let schema: Vec<FeatureSpec> = data.feature_names().into_iter().map(FeatureSpec::numeric).collect();
    let synthetic = synthetic_dataset(
        &oracle.model,
        &region,
        n,
        seed,
        Purpose::SyntheticTrain,
        cfg.sampler.chunk_size,
        Some(&schema),
    )?;
    // Nominal columns hold fractional codes after uniform sampling, so every
    // column is written as a number.
    let relabeled = LabeledDataset::with_class_names(
        synthetic.features().clone(),
        synthetic.labels().to_vec(),
        schema,
        oracle.file.class_names.clone().unwrap_or_else(|| synthetic.class_names().to_vec()),
    )?;
    write_dataset(&a.out, &relabeled, SYNTHETIC_LABEL)?;
    println!("wrote {} labeled points to {}", n, a.out.display());
    Ok(())
}
