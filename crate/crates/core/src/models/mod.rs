//! Trainable classifiers behind one prediction interface.
//!
//! Every trained model is immutable and its predictions are a pure function of
//! the input point, so a single instance can serve as an oracle for many
//! concurrent sampling workers.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Matrix, Result};

pub mod gbt;
pub mod importance;
pub mod logistic;
pub mod mlp;
pub mod pipeline;
pub mod tree;

pub use gbt::{GbtConfig, GradientBoostedTreesModel, RegressionTree};
pub use importance::{impurity_feature_importance, FeatureImportance};
pub use logistic::{LogisticRegressionModel, LrConfig};
pub use mlp::{MlpConfig, MlpModel};
pub use pipeline::{CreditEngineering, FeatureMap, PipelineClassifier};
pub use tree::{CartConfig, DecisionTreeModel, TreeNode};

/// A trained classifier over `input_dim()`-dimensional points.
pub trait Classifier: Send + Sync {
    fn input_dim(&self) -> usize;

    fn class_count(&self) -> usize;

    /// Class of `x`; `x.len()` must equal `input_dim()`.
    fn predict_unchecked(&self, x: &[f64]) -> usize;

    fn predict(&self, x: &[f64]) -> Result<usize> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: x.len(),
            });
        }
        Ok(self.predict_unchecked(x))
    }

    fn predict_batch(&self, points: &Matrix) -> Result<Vec<usize>> {
        if points.cols() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: points.cols(),
            });
        }
        Ok(points.iter_rows().map(|r| self.predict_unchecked(r)).collect())
    }
}

impl<C: Classifier + ?Sized> Classifier for &C {
    fn input_dim(&self) -> usize {
        (**self).input_dim()
    }
    fn class_count(&self) -> usize {
        (**self).class_count()
    }
    fn predict_unchecked(&self, x: &[f64]) -> usize {
        (**self).predict_unchecked(x)
    }
}

impl<C: Classifier + ?Sized> Classifier for Box<C> {
    fn input_dim(&self) -> usize {
        (**self).input_dim()
    }
    fn class_count(&self) -> usize {
        (**self).class_count()
    }
    fn predict_unchecked(&self, x: &[f64]) -> usize {
        (**self).predict_unchecked(x)
    }
}

impl<C: Classifier + ?Sized> Classifier for Arc<C> {
    fn input_dim(&self) -> usize {
        (**self).input_dim()
    }
    fn class_count(&self) -> usize {
        (**self).class_count()
    }
    fn predict_unchecked(&self, x: &[f64]) -> usize {
        (**self).predict_unchecked(x)
    }
}

/// Predicts the same class everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstantClassifier {
    pub input_dim: usize,
    pub class_count: usize,
    pub class: usize,
}

impl Classifier for ConstantClassifier {
    fn input_dim(&self) -> usize {
        self.input_dim
    }
    fn class_count(&self) -> usize {
        self.class_count
    }
    fn predict_unchecked(&self, _x: &[f64]) -> usize {
        self.class
    }
}

/// Hyperparameters for every model family. Missing fields take defaults.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub lr: LrConfig,
    pub cart: CartConfig,
    pub gbt: GbtConfig,
    pub mlp: MlpConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Lr,
    Cart,
    Gbt,
    Mlp,
    Pipeline,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Lr => "lr",
            Family::Cart => "cart",
            Family::Gbt => "gbt",
            Family::Mlp => "mlp",
            Family::Pipeline => "pipeline",
        }
    }
}

/// Any trained model of a supported family.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Lr(LogisticRegressionModel),
    Cart(DecisionTreeModel),
    Gbt(GradientBoostedTreesModel),
    Mlp(MlpModel),
    Pipeline(PipelineClassifier),
}

impl Model {
    pub fn family(&self) -> Family {
        match self {
            Model::Lr(_) => Family::Lr,
            Model::Cart(_) => Family::Cart,
            Model::Gbt(_) => Family::Gbt,
            Model::Mlp(_) => Family::Mlp,
            Model::Pipeline(_) => Family::Pipeline,
        }
    }

    /// Trains a model of `family` on `data`. Pipelines are assembled, not trained.
    pub fn train(family: Family, data: &crate::data::LabeledDataset, cfg: &TrainConfig) -> Result<Self> {
        match family {
            Family::Lr => logistic::train(data, &cfg.lr).map(Model::Lr),
            Family::Cart => tree::train(data, &cfg.cart).map(Model::Cart),
            Family::Gbt => gbt::train(data, &cfg.gbt).map(Model::Gbt),
            Family::Mlp => mlp::train(data, &cfg.mlp).map(Model::Mlp),
            Family::Pipeline => Err(Error::InvalidConfig(
                "pipelines are composed from a feature map and a trained model".into(),
            )),
        }
    }

    fn inner(&self) -> &dyn Classifier {
        match self {
            Model::Lr(m) => m,
            Model::Cart(m) => m,
            Model::Gbt(m) => m,
            Model::Mlp(m) => m,
            Model::Pipeline(m) => m,
        }
    }
}

impl Classifier for Model {
    fn input_dim(&self) -> usize {
        self.inner().input_dim()
    }
    fn class_count(&self) -> usize {
        self.inner().class_count()
    }
    #[inline]
    fn predict_unchecked(&self, x: &[f64]) -> usize {
        match self {
            Model::Lr(m) => m.predict_unchecked(x),
            Model::Cart(m) => m.predict_unchecked(x),
            Model::Gbt(m) => m.predict_unchecked(x),
            Model::Mlp(m) => m.predict_unchecked(x),
            Model::Pipeline(m) => m.predict_unchecked(x),
        }
    }
}

/// Version tag written into every serialized model document.
pub const MODEL_FORMAT_VERSION: u32 = 1;

impl Model {
    /// Structural checks for models that did not come out of training (for
    /// instance, deserialized documents).
    pub fn validate(&self) -> Result<()> {
        match self {
            Model::Lr(m) if !m.is_finite() => Err(Error::InvalidConfig("lr: non-finite parameters".into())),
            Model::Lr(_) => Ok(()),
            Model::Cart(t) => t.validate(),
            Model::Gbt(g) => {
                if !g.initial_score.is_finite() || !(g.learning_rate > 0.0) {
                    return Err(Error::InvalidConfig("gbt: invalid prior or learning rate".into()));
                }
                Ok(())
            }
            Model::Mlp(m) => m.validate(),
            Model::Pipeline(p) => {
                p.inner.validate()?;
                p.feature_map.validate()?;
                if p.feature_map.output_dim() != p.inner.input_dim() {
                    return Err(Error::DimensionMismatch {
                        expected: p.inner.input_dim(),
                        found: p.feature_map.output_dim(),
                    });
                }
                Ok(())
            }
        }
    }
}

/// `{"family": ..., "version": 1, "payload": {...}}`
impl Serialize for Model {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Model", 3)?;
        s.serialize_field("family", &self.family())?;
        s.serialize_field("version", &MODEL_FORMAT_VERSION)?;
        match self {
            Model::Lr(m) => s.serialize_field("payload", m)?,
            Model::Cart(m) => s.serialize_field("payload", m)?,
            Model::Gbt(m) => s.serialize_field("payload", m)?,
            Model::Mlp(m) => s.serialize_field("payload", m)?,
            Model::Pipeline(m) => s.serialize_field("payload", m)?,
        }
        s.end()
    }
}

#[derive(Deserialize)]
#[serde(tag = "family", content = "payload", rename_all = "lowercase")]
enum ModelBody {
    Lr(LogisticRegressionModel),
    Cart(DecisionTreeModel),
    Gbt(GradientBoostedTreesModel),
    Mlp(MlpModel),
    Pipeline(PipelineClassifier),
}

#[derive(Deserialize)]
struct ModelDocument {
    version: u32,
    #[serde(flatten)]
    body: ModelBody,
}

impl<'de> Deserialize<'de> for Model {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ModelDocument::deserialize(deserializer)?;
        if doc.version != MODEL_FORMAT_VERSION {
            return Err(D::Error::custom(alloc::format!(
                "unsupported model version {} (expected {MODEL_FORMAT_VERSION})",
                doc.version
            )));
        }
        let model = match doc.body {
            ModelBody::Lr(m) => Model::Lr(m),
            ModelBody::Cart(m) => Model::Cart(m),
            ModelBody::Gbt(m) => Model::Gbt(m),
            ModelBody::Mlp(m) => Model::Mlp(m),
            ModelBody::Pipeline(m) => Model::Pipeline(m),
        };
        model.validate().map_err(D::Error::custom)?;
        Ok(model)
    }
}

/// Index of the largest value; ties go to the lowest index.
pub(crate) fn argmax<T: PartialOrd + Copy>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}
