use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "copycat", version, about = "Copy trained classifiers into decision trees")]
pub struct Cli {
    /// Worker threads for parallel work (default: all cores).
    #[arg(long, global = true, env = "COPYCAT_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model on a labeled CSV file.
    Train(TrainArgs),
    /// Copy a saved model into decision trees and report the study.
    Copy(CopyArgs),
    /// Run a bundled end-to-end scenario.
    Scenario(ScenarioArgs),
    /// Write impurity feature importances of a tree model.
    Importance(ImportanceArgs),
    /// Write a bundled synthetic dataset.
    Generate(GenerateArgs),
    /// Draw synthetic points around a dataset and label them with a model.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Lr,
    Cart,
    Gbt,
    Mlp,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Label column name.
    #[arg(long)]
    pub label: String,
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Hold out a stratified test part; the value is the train fraction.
    #[arg(long, value_name = "FRACTION")]
    pub split: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CopyArgs {
    /// Saved model to copy.
    #[arg(long)]
    pub oracle: PathBuf,
    /// Dataset that defines the sampling region and the held-out evaluation.
    #[arg(long)]
    pub data: PathBuf,
    /// Label column name (default: last column).
    #[arg(long)]
    pub label: Option<String>,
    /// Synthetic training points per copy.
    #[arg(long)]
    pub n: Option<usize>,
    /// Synthetic points for the fidelity estimate.
    #[arg(long)]
    pub n_test: Option<usize>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fit the region on a stratified train part and evaluate on the rest.
    #[arg(long, value_name = "FRACTION")]
    pub split: Option<f64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Study JSON output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Also save the copy from the median-accuracy run.
    #[arg(long)]
    pub save_copy: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioName {
    Toy,
    Scenario1,
    Scenario2,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[arg(value_enum)]
    pub name: ScenarioName,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// 10^6 synthetic points and 100 runs instead of 10^5 and 30.
    #[arg(long)]
    pub paper_scale: bool,
    /// Synthetic training points per copy (overrides the scale preset).
    #[arg(long)]
    pub n: Option<usize>,
    /// Copy runs (overrides the scale preset).
    #[arg(long)]
    pub runs: Option<usize>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    pub print_config: bool,
    /// Credit scenarios: read this CSV (same 19 columns) instead of generating data.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ImportanceArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DatasetKind {
    Credit,
    Toy,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: DatasetKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub oracle: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}
