//! Feature-map pipelines: a fixed point transformation followed by a trained
//! classifier, exposed as one classifier on the untransformed inputs.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Classifier, Model};
use crate::data::Standardizer;
use crate::{Error, Result};

pub use crate::scenarios::credit::CreditEngineering;

/// Serializable point transformation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMap {
    Identity { dim: usize },
    /// Keeps `indices` of an `input_dim` point, in that order.
    Select { input_dim: usize, indices: Vec<usize> },
    Standardize(Standardizer),
    /// Inverse of a standardizer: back to raw units.
    Unstandardize(Standardizer),
    CreditEngineering(CreditEngineering),
    /// Applies maps left to right.
    Chain(Vec<FeatureMap>),
}

impl FeatureMap {
    pub fn input_dim(&self) -> usize {
        match self {
            FeatureMap::Identity { dim } => *dim,
            FeatureMap::Select { input_dim, .. } => *input_dim,
            FeatureMap::Standardize(s) | FeatureMap::Unstandardize(s) => s.dim(),
            FeatureMap::CreditEngineering(c) => c.input_dim(),
            FeatureMap::Chain(maps) => maps.first().map_or(0, FeatureMap::input_dim),
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            FeatureMap::Identity { dim } => *dim,
            FeatureMap::Select { indices, .. } => indices.len(),
            FeatureMap::Standardize(s) | FeatureMap::Unstandardize(s) => s.dim(),
            FeatureMap::CreditEngineering(c) => c.output_dim(),
            FeatureMap::Chain(maps) => maps.last().map_or(0, FeatureMap::output_dim),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FeatureMap::Select { input_dim, indices } => {
                if let Some(&bad) = indices.iter().find(|&&i| i >= *input_dim) {
                    return Err(Error::InvalidConfig(format!(
                        "select index {bad} out of range for dimension {input_dim}"
                    )));
                }
                Ok(())
            }
            FeatureMap::Standardize(s) | FeatureMap::Unstandardize(s) => {
                if s.stds.len() != s.means.len() || s.stds.iter().any(|v| !(*v > 0.0)) {
                    return Err(Error::InvalidConfig("standardizer stds must be positive".into()));
                }
                Ok(())
            }
            FeatureMap::CreditEngineering(c) => c.validate(),
            FeatureMap::Chain(maps) => {
                if maps.is_empty() {
                    return Err(Error::InvalidConfig("empty feature-map chain".into()));
                }
                for m in maps {
                    m.validate()?;
                }
                for w in maps.windows(2) {
                    if w[0].output_dim() != w[1].input_dim() {
                        return Err(Error::DimensionMismatch {
                            expected: w[1].input_dim(),
                            found: w[0].output_dim(),
                        });
                    }
                }
                Ok(())
            }
            FeatureMap::Identity { .. } => Ok(()),
        }
    }

    /// Transforms `x` (length `input_dim()`) into a new point.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            FeatureMap::Identity { .. } => x.to_vec(),
            FeatureMap::Select { indices, .. } => indices.iter().map(|&i| x[i]).collect(),
            FeatureMap::Standardize(s) => {
                let mut out = alloc::vec![0.0; x.len()];
                s.transform_point(x, &mut out);
                out
            }
            FeatureMap::Unstandardize(s) => {
                let mut out = alloc::vec![0.0; x.len()];
                s.inverse_point(x, &mut out);
                out
            }
            FeatureMap::CreditEngineering(c) => c.apply(x),
            FeatureMap::Chain(maps) => {
                let mut cur = x.to_vec();
                for m in maps {
                    cur = m.apply(&cur);
                }
                cur
            }
        }
    }
}

/// `predict(x) = inner.predict(map(x))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineClassifier {
    pub feature_map: FeatureMap,
    pub inner: Box<Model>,
}

impl PipelineClassifier {
    pub fn new(feature_map: FeatureMap, inner: Model) -> Result<Self> {
        feature_map.validate()?;
        if feature_map.output_dim() != inner.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: inner.input_dim(),
                found: feature_map.output_dim(),
            });
        }
        Ok(Self {
            feature_map,
            inner: Box::new(inner),
        })
    }
}

impl Classifier for PipelineClassifier {
    fn input_dim(&self) -> usize {
        self.feature_map.input_dim()
    }

    fn class_count(&self) -> usize {
        self.inner.class_count()
    }

    fn predict_unchecked(&self, x: &[f64]) -> usize {
        self.inner.predict_unchecked(&self.feature_map.apply(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::LogisticRegressionModel;
    use alloc::vec;

    #[test]
    fn select_then_lr_matches_manual_composition() {
        let lr = LogisticRegressionModel { weights: vec![1.5, -2.0], bias: 0.25 };
        let map = FeatureMap::Select { input_dim: 4, indices: vec![3, 1] };
        let p = PipelineClassifier::new(map, Model::Lr(lr.clone())).unwrap();
        assert_eq!(p.input_dim(), 4);
        for i in 0..50 {
            let t = i as f64 * 0.37 - 9.0;
            let x = [t, (t * 1.3).sin(), -t, (t * 0.7).cos()];
            assert_eq!(p.predict(&x).unwrap(), lr.predict(&[x[3], x[1]]).unwrap());
        }
    }

    #[test]
    fn mismatched_dimensions_fail_at_construction() {
        let lr = LogisticRegressionModel { weights: vec![1.0, 1.0, 1.0], bias: 0.0 };
        let map = FeatureMap::Select { input_dim: 4, indices: vec![0, 1] };
        assert!(matches!(
            PipelineClassifier::new(map, Model::Lr(lr)),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
        let bad = FeatureMap::Select { input_dim: 2, indices: vec![5] };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn chain_of_standardize_and_inverse_is_identity() {
        let s = Standardizer { means: vec![1.0, -2.0], stds: vec![2.0, 0.5] };
        let map = FeatureMap::Chain(vec![FeatureMap::Standardize(s.clone()), FeatureMap::Unstandardize(s)]);
        map.validate().unwrap();
        let out = map.apply(&[3.0, 4.0]);
        assert!((out[0] - 3.0).abs() < 1e-15 && (out[1] - 4.0).abs() < 1e-15);
    }
}
