//! Tabular datasets: nominal encoding, standardization and stratified splits.
//!
//! Nominal attributes are encoded ordinally (category → index as a real), so a
//! dataset keeps one column per named attribute. Class labels and category
//! codes follow first-appearance order in the source rows.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::rng::{self, Purpose};
use crate::{Error, Matrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Numeric,
    Nominal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
    /// Ordered category names; empty for numeric features.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<String>,
}

impl FeatureSpec {
    pub fn numeric(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: FeatureKind::Numeric,
            categories: Vec::new(),
        }
    }

    pub fn nominal<S: AsRef<str>>(name: impl Into<String>, categories: &[S]) -> Self {
        Self {
            name: name.into(),
            kind: FeatureKind::Nominal,
            categories: categories.iter().map(|c| c.as_ref().to_owned()).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            FeatureKind::Numeric if !self.categories.is_empty() => Err(Error::InvalidSchema(
                format!("numeric feature `{}` lists categories", self.name),
            )),
            FeatureKind::Nominal if self.categories.is_empty() => Err(Error::InvalidSchema(
                format!("nominal feature `{}` has no categories", self.name),
            )),
            FeatureKind::Nominal => {
                let mut seen = BTreeMap::new();
                for c in &self.categories {
                    if seen.insert(c.as_str(), ()).is_some() {
                        return Err(Error::InvalidSchema(format!(
                            "feature `{}` repeats category `{c}`",
                            self.name
                        )));
                    }
                }
                Ok(())
            }
            FeatureKind::Numeric => Ok(()),
        }
    }
}

/// Checks per-feature rules and name uniqueness.
pub fn validate_schema(schema: &[FeatureSpec]) -> Result<()> {
    let mut names = BTreeMap::new();
    for spec in schema {
        spec.validate()?;
        if names.insert(spec.name.as_str(), ()).is_some() {
            return Err(Error::InvalidSchema(format!(
                "duplicate feature name `{}`",
                spec.name
            )));
        }
    }
    Ok(())
}

/// Generic `x0, x1, ...` numeric schema.
pub fn anonymous_schema(d: usize) -> Vec<FeatureSpec> {
    (0..d).map(|j| FeatureSpec::numeric(format!("x{j}"))).collect()
}

/// Feature matrix, class indices and per-feature metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    features: Matrix,
    labels: Vec<usize>,
    schema: Vec<FeatureSpec>,
    class_count: usize,
    class_names: Vec<String>,
}

impl LabeledDataset {
    /// Validates and assembles a dataset. Class names default to `"0".."K-1"`.
    pub fn new(
        features: Matrix,
        labels: Vec<usize>,
        schema: Vec<FeatureSpec>,
        class_count: usize,
    ) -> Result<Self> {
        let names = (0..class_count).map(|k| k.to_string()).collect();
        Self::with_class_names(features, labels, schema, names)
    }

    pub fn with_class_names(
        features: Matrix,
        labels: Vec<usize>,
        schema: Vec<FeatureSpec>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let class_count = class_names.len();
        if features.rows() == 0 {
            return Err(Error::EmptyDataset);
        }
        if labels.len() != features.rows() {
            return Err(Error::LengthMismatch {
                left: features.rows(),
                right: labels.len(),
            });
        }
        if schema.len() != features.cols() {
            return Err(Error::DimensionMismatch {
                expected: features.cols(),
                found: schema.len(),
            });
        }
        if class_count < 2 {
            return Err(Error::InvalidDataset(format!(
                "at least 2 classes required, found {class_count}"
            )));
        }
        validate_schema(&schema)?;
        if let Some((i, &l)) = labels.iter().enumerate().find(|(_, &l)| l >= class_count) {
            return Err(Error::InvalidDataset(format!(
                "row {i}: label {l} outside 0..{class_count}"
            )));
        }
        if let Some(pos) = features.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value at row {}, column {}",
                pos / features.cols(),
                pos % features.cols()
            )));
        }
        Ok(Self {
            features,
            labels,
            schema,
            class_count,
            class_names,
        })
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn schema(&self) -> &[FeatureSpec] {
        &self.schema
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn n_rows(&self) -> usize {
        self.features.rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.schema.iter().map(|s| s.name.clone()).collect()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.class_count];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Rows `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            features: self.features.select_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            schema: self.schema.clone(),
            class_count: self.class_count,
            class_names: self.class_names.clone(),
        }
    }

    /// Same labels and metadata with a replacement feature matrix of equal shape.
    pub fn with_features(&self, features: Matrix) -> Result<Self> {
        if features.rows() != self.n_rows() || features.cols() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                found: features.cols(),
            });
        }
        Ok(Self {
            features,
            ..self.clone()
        })
    }

    /// Replaces features and schema together (used for engineered views).
    pub fn with_view(&self, features: Matrix, schema: Vec<FeatureSpec>) -> Result<Self> {
        Self::with_class_names(
            features,
            self.labels.clone(),
            schema,
            self.class_names.clone(),
        )
    }
}

/// Replaces each category by its index in `spec.categories`.
pub fn encode_nominals<S: AsRef<str>>(raw: &[S], spec: &FeatureSpec) -> Result<Vec<f64>> {
    if spec.kind != FeatureKind::Nominal {
        return Err(Error::InvalidSchema(format!(
            "feature `{}` is not nominal",
            spec.name
        )));
    }
    let index: BTreeMap<&str, usize> = spec
        .categories
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    raw.iter()
        .map(|v| {
            index
                .get(v.as_ref())
                .map(|&i| i as f64)
                .ok_or_else(|| Error::UnseenCategory {
                    feature: spec.name.clone(),
                    value: v.as_ref().to_owned(),
                })
        })
        .collect()
}

/// Inverse of [`encode_nominals`].
pub fn decode_nominals(codes: &[f64], spec: &FeatureSpec) -> Result<Vec<String>> {
    codes
        .iter()
        .map(|&c| {
            let i = c as usize;
            if c < 0.0 || i as f64 != c || i >= spec.categories.len() {
                return Err(Error::UnseenCategory {
                    feature: spec.name.clone(),
                    value: format!("{c}"),
                });
            }
            Ok(spec.categories[i].clone())
        })
        .collect()
}

fn first_appearance<'a, I: IntoIterator<Item = &'a str>>(values: I) -> Vec<String> {
    let mut seen = BTreeMap::new();
    let mut order = Vec::new();
    for v in values {
        if seen.insert(v, ()).is_none() {
            order.push(v.to_owned());
        }
    }
    order
}

fn parse_finite(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Builds a dataset from parsed text rows.
///
/// `header` names every column, one of which is `label_column`. Row numbers in
/// errors are 1-based data rows (the header is not counted). Without a schema
/// hint a column is numeric when every cell parses as a number and nominal
/// otherwise; with a hint, the hint's kinds and category lists are enforced.
pub fn from_records<R: AsRef<[String]>>(
    header: &[String],
    records: &[R],
    label_column: &str,
    schema_hint: Option<&[FeatureSpec]>,
) -> Result<LabeledDataset> {
    let label_idx = header
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::MissingLabelColumn(label_column.to_owned()))?;
    for (i, rec) in records.iter().enumerate() {
        let found = rec.as_ref().len();
        if found != header.len() {
            return Err(Error::RaggedRow {
                row: i + 1,
                expected: header.len(),
                found,
            });
        }
    }
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let feature_cols: Vec<usize> = (0..header.len()).filter(|&j| j != label_idx).collect();
    let cell = |i: usize, j: usize| records[i].as_ref()[j].trim();

    let schema: Vec<FeatureSpec> = match schema_hint {
        Some(hint) => {
            if hint.len() != feature_cols.len() {
                return Err(Error::DimensionMismatch {
                    expected: feature_cols.len(),
                    found: hint.len(),
                });
            }
            for (spec, &j) in hint.iter().zip(&feature_cols) {
                if spec.name != header[j] {
                    return Err(Error::InvalidSchema(format!(
                        "hint names `{}` where the header has `{}`",
                        spec.name, header[j]
                    )));
                }
            }
            hint.to_vec()
        }
        None => feature_cols
            .iter()
            .map(|&j| {
                let numeric = (0..records.len()).all(|i| cell(i, j).parse::<f64>().is_ok());
                if numeric {
                    FeatureSpec::numeric(header[j].clone())
                } else {
                    let cats = first_appearance((0..records.len()).map(|i| cell(i, j)));
                    FeatureSpec::nominal(header[j].clone(), &cats)
                }
            })
            .collect(),
    };
    validate_schema(&schema)?;

    let d = feature_cols.len();
    let mut features = Matrix::zeros(records.len(), d);
    for (c, (spec, &j)) in schema.iter().zip(&feature_cols).enumerate() {
        match spec.kind {
            FeatureKind::Numeric => {
                for i in 0..records.len() {
                    let v = parse_finite(cell(i, j)).ok_or_else(|| Error::ParseNumber {
                        row: i + 1,
                        column: header[j].clone(),
                        value: cell(i, j).to_owned(),
                    })?;
                    features.set(i, c, v);
                }
            }
            FeatureKind::Nominal => {
                let raw: Vec<&str> = (0..records.len()).map(|i| cell(i, j)).collect();
                for (i, v) in encode_nominals(&raw, spec)?.into_iter().enumerate() {
                    features.set(i, c, v);
                }
            }
        }
    }

    let class_names = first_appearance((0..records.len()).map(|i| cell(i, label_idx)));
    let class_index: BTreeMap<&str, usize> = class_names
        .iter()
        .enumerate()
        .map(|(k, n)| (n.as_str(), k))
        .collect();
    let labels = (0..records.len())
        .map(|i| class_index[cell(i, label_idx)])
        .collect();
    LabeledDataset::with_class_names(features, labels, schema, class_names)
}

/// Per-column affine rescaling to zero mean and unit variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Standardizer {
    pub fn identity(d: usize) -> Self {
        Self {
            means: alloc::vec![0.0; d],
            stds: alloc::vec![1.0; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    fn check(&self, d: usize) -> Result<()> {
        if self.means.len() != d || self.stds.len() != d {
            return Err(Error::DimensionMismatch {
                expected: self.means.len(),
                found: d,
            });
        }
        Ok(())
    }

    /// Fits per-column mean and population standard deviation.
    ///
    /// Columns whose values are all equal get std 1 (logged as a warning) so
    /// the transform stays defined.
    pub fn fit(features: &Matrix) -> Result<Self> {
        let m = features.rows();
        if m == 0 {
            return Err(Error::EmptyDataset);
        }
        let d = features.cols();
        let mut means = alloc::vec![0.0; d];
        let mut stds = alloc::vec![0.0; d];
        for j in 0..d {
            let col = features.column(j);
            let mean = col.iter().sum::<f64>() / m as f64;
            let constant = col.iter().all(|&v| v == col[0]);
            means[j] = mean;
            stds[j] = if constant {
                log::warn!("column {j} is constant; using std 1");
                1.0
            } else {
                let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / m as f64;
                libm::sqrt(var)
            };
        }
        Ok(Self { means, stds })
    }

    pub fn transform_point(&self, x: &[f64], out: &mut [f64]) {
        for (j, (o, v)) in out.iter_mut().zip(x).enumerate() {
            *o = (v - self.means[j]) / self.stds[j];
        }
    }

    pub fn inverse_point(&self, z: &[f64], out: &mut [f64]) {
        for (j, (o, v)) in out.iter_mut().zip(z).enumerate() {
            *o = v * self.stds[j] + self.means[j];
        }
    }

    pub fn transform(&self, features: &Matrix) -> Result<Matrix> {
        self.check(features.cols())?;
        let mut out = Matrix::zeros(features.rows(), features.cols());
        for i in 0..features.rows() {
            self.transform_point(features.row(i), out.row_mut(i));
        }
        Ok(out)
    }

    pub fn inverse_transform(&self, features: &Matrix) -> Result<Matrix> {
        self.check(features.cols())?;
        let mut out = Matrix::zeros(features.rows(), features.cols());
        for i in 0..features.rows() {
            self.inverse_point(features.row(i), out.row_mut(i));
        }
        Ok(out)
    }
}

pub fn fit_standardizer(data: &LabeledDataset) -> Result<Standardizer> {
    Standardizer::fit(data.features())
}

/// `x → (x − mean) / std` on every cell; labels and schema are kept.
pub fn apply_standardizer(data: &LabeledDataset, s: &Standardizer) -> Result<LabeledDataset> {
    data.with_features(s.transform(data.features())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            train_fraction: 0.8,
            seed: 0,
        }
    }
}

/// Train rows allotted to a class of `count` rows: `round(fraction · count)`
/// with halves rounded up, kept within `1..count` so both sides get a row.
pub fn train_count(fraction: f64, count: usize) -> usize {
    let n = libm::floor(fraction * count as f64 + 0.5) as usize;
    n.clamp(1, count - 1)
}

/// Per-class seeded shuffle, then the first [`train_count`] rows of each class
/// go to train. Both sides keep the original row order.
pub fn stratified_split(
    data: &LabeledDataset,
    cfg: &SplitConfig,
) -> Result<(LabeledDataset, LabeledDataset)> {
    if !(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "train_fraction must lie in (0, 1), got {}",
            cfg.train_fraction
        )));
    }
    let mut by_class: Vec<Vec<usize>> = alloc::vec![Vec::new(); data.class_count()];
    for (i, &l) in data.labels().iter().enumerate() {
        by_class[l].push(i);
    }
    let mut rng = rng::substream(rng::derive_key(cfg.seed, Purpose::Split), 0);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (class, mut rows) in by_class.into_iter().enumerate() {
        match rows.len() {
            0 => continue,
            1 => return Err(Error::ClassTooSmall { class, count: 1 }),
            n => {
                rows.shuffle(&mut rng);
                let k = train_count(cfg.train_fraction, n);
                train.extend_from_slice(&rows[..k]);
                test.extend_from_slice(&rows[k..]);
            }
        }
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((data.subset(&train), data.subset(&test)))
}
