//! Model files.
//!
//! A model file is the core model document (`family`, `version`, `payload`)
//! with two optional extra keys: `schema` (column specs of the training data)
//! and `class_names`. A model trained on standardized features has its
//! standardizer saved next to it as `<stem>.standardizer.json`.

use std::path::{Path, PathBuf};

use copycat_core::data::{FeatureSpec, Standardizer};
use copycat_core::models::pipeline::{FeatureMap, PipelineClassifier};
use copycat_core::models::Model;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::io;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub model: Model,
    pub schema: Option<Vec<FeatureSpec>>,
    pub class_names: Option<Vec<String>>,
}

impl ModelFile {
    pub fn bare(model: Model) -> Self {
        Self { model, schema: None, class_names: None }
    }

    pub fn feature_names(&self) -> Vec<String> {
        match &self.schema {
            Some(s) => s.iter().map(|f| f.name.clone()).collect(),
            None => (0..copycat_core::models::Classifier::input_dim(&self.model))
                .map(|i| format!("x{i}"))
                .collect(),
        }
    }
}

pub fn standardizer_path(model_path: &Path) -> PathBuf {
    let stem = model_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".to_owned());
    model_path.with_file_name(format!("{stem}.standardizer.json"))
}

pub fn save_model(path: &Path, file: &ModelFile) -> Result<()> {
    let mut doc = match serde_json::to_value(&file.model).map_err(Error::json(path))? {
        Value::Object(map) => map,
        _ => Map::new(),
    };
    if let Some(schema) = &file.schema {
        doc.insert("schema".into(), serde_json::to_value(schema).map_err(Error::json(path))?);
    }
    if let Some(names) = &file.class_names {
        doc.insert("class_names".into(), serde_json::to_value(names).map_err(Error::json(path))?);
    }
    io::write_json(path, &Value::Object(doc))
}

pub fn load_model(path: &Path) -> Result<ModelFile> {
    let mut doc: Map<String, Value> = io::read_json(path)?;
    let schema = doc
        .remove("schema")
        .map(serde_json::from_value)
        .transpose()
        .map_err(Error::json(path))?;
    let class_names = doc
        .remove("class_names")
        .map(serde_json::from_value)
        .transpose()
        .map_err(Error::json(path))?;
    let model = serde_json::from_value(Value::Object(doc)).map_err(Error::json(path))?;
    Ok(ModelFile { model, schema, class_names })
}

pub fn load_standardizer(model_path: &Path) -> Result<Option<Standardizer>> {
    let path = standardizer_path(model_path);
    if path.exists() {
        io::read_json(&path).map(Some)
    } else {
        Ok(None)
    }
}

/// The saved model as a classifier on raw (unstandardized) features.
pub fn raw_oracle(file: &ModelFile, standardizer: Option<Standardizer>) -> Result<Model> {
    match standardizer {
        None => Ok(file.model.clone()),
        Some(s) => {
            let p = PipelineClassifier::new(FeatureMap::Standardize(s), file.model.clone())?;
            Ok(Model::Pipeline(p))
        }
    }
}
