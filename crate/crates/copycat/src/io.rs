//! CSV and JSON files.

use std::fs;
use std::io::Write;
use std::path::Path;

use copycat_core::data::{decode_nominals, from_records, FeatureKind, FeatureSpec, LabeledDataset};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

/// Header and raw cells of a CSV file. Rows may have differing lengths; the
/// dataset builder reports ragged rows with their row number.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(Error::csv(path))?;
    let header = reader
        .headers()
        .map_err(Error::csv(path))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(Error::csv(path))?;
        records.push(rec.iter().map(str::to_owned).collect());
    }
    Ok((header, records))
}

/// Loads a labeled CSV. Without `label` the last column is the label.
///
/// `schema` fixes column kinds and category codes; `classes` fixes the label
/// order (both come from a saved model so codes line up with training).
pub fn load_dataset(
    path: &Path,
    label: Option<&str>,
    schema: Option<&[FeatureSpec]>,
    classes: Option<&[String]>,
) -> Result<LabeledDataset> {
    let (header, records) = read_table(path)?;
    let label = match label {
        Some(l) => l.to_owned(),
        None => header
            .last()
            .cloned()
            .ok_or(copycat_core::Error::EmptyDataset)?,
    };
    let data = from_records(&header, &records, &label, schema)?;
    match classes {
        None => Ok(data),
        Some(classes) => Ok(with_class_order(data, &label, classes)?),
    }
}

fn with_class_order(
    data: LabeledDataset,
    label: &str,
    classes: &[String],
) -> copycat_core::Result<LabeledDataset> {
    let mapping = data
        .class_names()
        .iter()
        .map(|name| {
            classes
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| copycat_core::Error::UnseenCategory {
                    feature: label.to_owned(),
                    value: name.clone(),
                })
        })
        .collect::<copycat_core::Result<Vec<usize>>>()?;
    let labels = data.labels().iter().map(|&l| mapping[l]).collect();
    LabeledDataset::with_class_names(
        data.features().clone(),
        labels,
        data.schema().to_vec(),
        classes.to_vec(),
    )
}

fn create_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(Error::io(dir)),
        _ => Ok(()),
    }
}

pub fn write_rows<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    create_parent(path)?;
    let mut w = csv::Writer::from_path(path).map_err(Error::csv(path))?;
    w.write_record(header).map_err(Error::csv(path))?;
    for row in rows {
        w.write_record(row).map_err(Error::csv(path))?;
    }
    w.flush().map_err(Error::io(path))
}

/// Writes features (nominal codes decoded to category names) plus a label
/// column holding class names.
pub fn write_dataset(path: &Path, data: &LabeledDataset, label_column: &str) -> Result<()> {
    let mut columns: Vec<Vec<String>> = Vec::with_capacity(data.n_features());
    for (j, spec) in data.schema().iter().enumerate() {
        let values = data.features().column(j);
        columns.push(match spec.kind {
            FeatureKind::Numeric => values.iter().map(f64::to_string).collect(),
            FeatureKind::Nominal => decode_nominals(&values, spec)?,
        });
    }
    let names = data.feature_names();
    let mut header: Vec<&str> = names.iter().map(String::as_str).collect();
    header.push(label_column);
    let rows = (0..data.n_rows()).map(|i| {
        let mut row: Vec<&str> = columns.iter().map(|c| c[i].as_str()).collect();
        row.push(&data.class_names()[data.labels()[i]]);
        row
    });
    write_rows(path, &header, rows)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    create_parent(path)?;
    let mut text = serde_json::to_string_pretty(value).map_err(Error::json(path))?;
    text.push('\n');
    let mut f = fs::File::create(path).map_err(Error::io(path))?;
    f.write_all(text.as_bytes()).map_err(Error::io(path))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    serde_json::from_str(&text).map_err(Error::json(path))
}
