//! Binary logistic regression trained by full-batch gradient descent.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::Classifier;
use crate::data::LabeledDataset;
use crate::{Error, Matrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LrConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    pub l2_penalty: f64,
}

impl Default for LrConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            iterations: 1000,
            l2_penalty: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticRegressionModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
#[inline]
fn softplus(z: f64) -> f64 {
    z.max(0.0) + libm::log1p(libm::exp(-libm::fabs(z)))
}

impl LogisticRegressionModel {
    pub fn zeros(d: usize) -> Self {
        Self {
            weights: alloc::vec![0.0; d],
            bias: 0.0,
        }
    }

    #[inline]
    fn linear(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                found: x.len(),
            });
        }
        Ok(sigmoid(self.linear(x)))
    }

    pub fn is_finite(&self) -> bool {
        self.bias.is_finite() && self.weights.iter().all(|w| w.is_finite())
    }
}

impl Classifier for LogisticRegressionModel {
    fn input_dim(&self) -> usize {
        self.weights.len()
    }

    fn class_count(&self) -> usize {
        2
    }

    /// Class 1 iff the probability exceeds one half.
    #[inline]
    fn predict_unchecked(&self, x: &[f64]) -> usize {
        usize::from(sigmoid(self.linear(x)) > 0.5)
    }
}

/// Mean logistic loss plus `l2/2·‖w‖²`, with its gradient `(∂w, ∂b)`.
pub fn loss_and_gradient(
    model: &LogisticRegressionModel,
    features: &Matrix,
    labels: &[usize],
    l2_penalty: f64,
) -> (f64, Vec<f64>, f64) {
    let m = features.rows() as f64;
    let mut grad_w = alloc::vec![0.0; model.weights.len()];
    let mut grad_b = 0.0;
    let mut loss = 0.0;
    for (x, &label) in features.iter_rows().zip(labels) {
        let y = if label == 1 { 1.0 } else { 0.0 };
        let z = model.linear(x);
        loss += softplus(z) - y * z;
        let r = sigmoid(z) - y;
        for (g, v) in grad_w.iter_mut().zip(x) {
            *g += r * v;
        }
        grad_b += r;
    }
    loss /= m;
    grad_b /= m;
    let mut penalty = 0.0;
    for (g, w) in grad_w.iter_mut().zip(&model.weights) {
        *g = *g / m + l2_penalty * w;
        penalty += w * w;
    }
    (loss + 0.5 * l2_penalty * penalty, grad_w, grad_b)
}

pub fn train(data: &LabeledDataset, cfg: &LrConfig) -> Result<LogisticRegressionModel> {
    if data.class_count() != 2 {
        return Err(Error::NotBinary(data.class_count()));
    }
    if !(cfg.learning_rate > 0.0) || !(cfg.l2_penalty >= 0.0) {
        return Err(Error::InvalidConfig(
            "lr: learning_rate must be positive and l2_penalty nonnegative".into(),
        ));
    }
    let mut model = LogisticRegressionModel::zeros(data.n_features());
    for iteration in 0..cfg.iterations {
        let (loss, gw, gb) = loss_and_gradient(&model, data.features(), data.labels(), cfg.l2_penalty);
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss { iteration });
        }
        for (w, g) in model.weights.iter_mut().zip(&gw) {
            *w -= cfg.learning_rate * g;
        }
        model.bias -= cfg.learning_rate * gb;
    }
    if !model.is_finite() {
        return Err(Error::NonFiniteLoss {
            iteration: cfg.iterations,
        });
    }
    Ok(model)
}
