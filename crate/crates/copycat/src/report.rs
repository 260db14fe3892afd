//! Plot-ready CSV files and scenario output directories.

use std::path::{Path, PathBuf};

use copycat_core::copier::CopyStudy;
use copycat_core::metrics::ImportanceReport;
use copycat_core::scenarios::{BoundaryGrid, ScenarioReport};
use copycat_core::stats::Histogram;

use crate::error::Result;
use crate::io::{write_json, write_rows};

fn num(v: f64) -> String {
    v.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write_histogram(path: &Path, h: &Histogram) -> Result<()> {
    let rows = h
        .counts
        .iter()
        .enumerate()
        .map(|(i, c)| [num(h.edges[i]), num(h.edges[i + 1]), c.to_string()]);
    write_rows(path, &["bin_lower", "bin_upper", "count"], rows)
}

pub fn write_runs(path: &Path, study: &CopyStudy) -> Result<()> {
    let rows = study.per_run.iter().map(|r| {
        [
            r.seed.to_string(),
            num(r.synthetic_train_accuracy),
            num(r.synthetic_test_fidelity),
            opt(r.original_test_accuracy),
            opt(r.original_test_fidelity),
            r.leaves.to_string(),
            r.depth.to_string(),
        ]
    });
    write_rows(
        path,
        &[
            "seed",
            "synthetic_train_accuracy",
            "synthetic_test_fidelity",
            "original_test_accuracy",
            "original_test_fidelity",
            "leaves",
            "depth",
        ],
        rows,
    )
}

pub fn write_importance(path: &Path, report: &ImportanceReport) -> Result<()> {
    let rows = report
        .rows
        .iter()
        .map(|r| [r.feature.clone(), num(r.original), num(r.copy)]);
    write_rows(path, &["feature", "original", "copy"], rows)
}

pub fn write_grid(path: &Path, grid: &BoundaryGrid) -> Result<()> {
    let rows = grid
        .points
        .iter()
        .map(|p| [num(p.x), num(p.y), p.original.to_string(), p.copy.to_string()]);
    write_rows(path, &["x", "y", "original", "copy"], rows)
}

/// Writes `<name>_report.json`, `<name>_histogram.csv`, `<name>_runs.csv` and,
/// when present, `<name>_importance.csv` and `<name>_grid.csv` into `dir`.
/// Returns the paths written.
pub fn write_scenario(dir: &Path, report: &ScenarioReport, grid: Option<&BoundaryGrid>) -> Result<Vec<PathBuf>> {
    let name = &report.scenario;
    let file = |suffix: &str| dir.join(format!("{name}_{suffix}"));
    let mut written = Vec::new();

    let p = file("report.json");
    write_json(&p, report)?;
    written.push(p);
    let p = file("histogram.csv");
    write_histogram(&p, &report.copy_study.histogram)?;
    written.push(p);
    let p = file("runs.csv");
    write_runs(&p, &report.copy_study)?;
    written.push(p);
    if let Some(imp) = &report.importance {
        let p = file("importance.csv");
        write_importance(&p, imp)?;
        written.push(p);
    }
    if let Some(grid) = grid {
        let p = file("grid.csv");
        write_grid(&p, grid)?;
        written.push(p);
    }
    Ok(written)
}
