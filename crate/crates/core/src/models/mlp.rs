//! Feed-forward network: rectifier hidden layers and a softmax output,
//! trained by mini-batch SGD on cross-entropy.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{argmax, Classifier};
use crate::data::LabeledDataset;
use crate::rng::{self, Purpose};
use crate::{Error, Matrix, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MlpConfig {
    pub hidden_sizes: Vec<usize>,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden_sizes: alloc::vec![32],
            learning_rate: 0.01,
            epochs: 200,
            batch_size: 32,
            seed: 0,
        }
    }
}

/// Fully connected layer; `weights` is `outputs × inputs`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl DenseLayer {
    fn forward(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for o in 0..self.outputs {
            let w = &self.weights[o * self.inputs..(o + 1) * self.inputs];
            out.push(w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.bias[o]);
        }
    }

    fn n_params(&self) -> usize {
        self.weights.len() + self.bias.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub n_classes: usize,
    pub layers: Vec<DenseLayer>,
}

impl MlpModel {
    /// Uniform weights in `±1/√fan_in`, zero biases.
    pub fn init(input_dim: usize, hidden: &[usize], n_classes: usize, seed: u64) -> Self {
        let mut rng = rng::substream(rng::derive_key(seed, Purpose::ModelInit), 0);
        let mut sizes = alloc::vec![input_dim];
        sizes.extend_from_slice(hidden);
        sizes.push(n_classes);
        let layers = sizes
            .windows(2)
            .map(|w| {
                let (inputs, outputs) = (w[0], w[1]);
                let bound = 1.0 / libm::sqrt(inputs.max(1) as f64);
                let weights = (0..inputs * outputs)
                    .map(|_| rng.random_range(-bound..=bound))
                    .collect();
                DenseLayer {
                    inputs,
                    outputs,
                    weights,
                    bias: alloc::vec![0.0; outputs],
                }
            })
            .collect();
        Self { n_classes, layers }
    }

    /// Checks that layer shapes chain from the input to `n_classes` outputs.
    pub fn validate(&self) -> Result<()> {
        let mut prev = None;
        for layer in &self.layers {
            if layer.weights.len() != layer.inputs * layer.outputs || layer.bias.len() != layer.outputs {
                return Err(Error::InvalidConfig("mlp: layer parameter count mismatch".into()));
            }
            if let Some(p) = prev {
                if p != layer.inputs {
                    return Err(Error::DimensionMismatch {
                        expected: p,
                        found: layer.inputs,
                    });
                }
            }
            prev = Some(layer.outputs);
        }
        match prev {
            Some(k) if k == self.n_classes => Ok(()),
            _ => Err(Error::InvalidConfig("mlp: output layer must have one unit per class".into())),
        }
    }

    /// Output-layer pre-activations.
    pub fn logits(&self, x: &[f64]) -> Vec<f64> {
        let mut a = x.to_vec();
        let mut z = Vec::new();
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            layer.forward(&a, &mut z);
            if l < last {
                z.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            core::mem::swap(&mut a, &mut z);
        }
        a
    }

    pub fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        let mut p = self.logits(x);
        softmax_in_place(&mut p);
        p
    }

    pub fn n_params(&self) -> usize {
        self.layers.iter().map(DenseLayer::n_params).sum()
    }

    /// All parameters, layer by layer: weights (row-major) then biases.
    pub fn parameters(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_params());
        for layer in &self.layers {
            out.extend_from_slice(&layer.weights);
            out.extend_from_slice(&layer.bias);
        }
        out
    }

    pub fn set_parameters(&mut self, params: &[f64]) {
        assert_eq!(params.len(), self.n_params());
        let mut pos = 0;
        for layer in &mut self.layers {
            let nw = layer.weights.len();
            layer.weights.copy_from_slice(&params[pos..pos + nw]);
            pos += nw;
            let nb = layer.bias.len();
            layer.bias.copy_from_slice(&params[pos..pos + nb]);
            pos += nb;
        }
    }

    fn step(&mut self, grad: &[f64], learning_rate: f64) {
        let mut g = grad.iter();
        for layer in &mut self.layers {
            for p in layer.weights.iter_mut().chain(layer.bias.iter_mut()) {
                *p -= learning_rate * g.next().copied().unwrap_or(0.0);
            }
        }
    }

    /// Mean cross-entropy over `rows`; the gradient (same layout as
    /// [`parameters`](Self::parameters)) is written to `grad`.
    fn batch_loss_and_gradient(
        &self,
        features: &Matrix,
        labels: &[usize],
        rows: &[usize],
        grad: &mut [f64],
    ) -> f64 {
        grad.fill(0.0);
        let n_layers = self.layers.len();
        let mut offsets = Vec::with_capacity(n_layers);
        let mut pos = 0;
        for layer in &self.layers {
            offsets.push(pos);
            pos += layer.n_params();
        }
        let mut loss = 0.0;
        // activations[l] feeds layer l; pre[l] is layer l's pre-activation
        let mut activations: Vec<Vec<f64>> = alloc::vec![Vec::new(); n_layers + 1];
        let mut pre: Vec<Vec<f64>> = alloc::vec![Vec::new(); n_layers];
        let mut delta = Vec::new();
        let mut prev_delta = Vec::new();
        for &r in rows {
            activations[0].clear();
            activations[0].extend_from_slice(features.row(r));
            for l in 0..n_layers {
                let (head, tail) = activations.split_at_mut(l + 1);
                self.layers[l].forward(&head[l], &mut pre[l]);
                tail[0].clear();
                if l + 1 < n_layers {
                    tail[0].extend(pre[l].iter().map(|v| v.max(0.0)));
                } else {
                    tail[0].extend_from_slice(&pre[l]);
                }
            }
            let logits = &activations[n_layers];
            let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = logits.iter().map(|v| libm::exp(v - max)).sum();
            let log_z = max + libm::log(sum);
            let y = labels[r];
            loss += log_z - logits[y];
            delta.clear();
            delta.extend(logits.iter().map(|v| libm::exp(v - log_z)));
            delta[y] -= 1.0;

            for l in (0..n_layers).rev() {
                let layer = &self.layers[l];
                let input = &activations[l];
                let off = offsets[l];
                for o in 0..layer.outputs {
                    let d = delta[o];
                    let gw = &mut grad[off + o * layer.inputs..off + (o + 1) * layer.inputs];
                    for (g, a) in gw.iter_mut().zip(input) {
                        *g += d * a;
                    }
                    grad[off + layer.weights.len() + o] += d;
                }
                if l > 0 {
                    prev_delta.clear();
                    prev_delta.resize(layer.inputs, 0.0);
                    for o in 0..layer.outputs {
                        let w = &layer.weights[o * layer.inputs..(o + 1) * layer.inputs];
                        for (pd, wv) in prev_delta.iter_mut().zip(w) {
                            *pd += wv * delta[o];
                        }
                    }
                    for (pd, z) in prev_delta.iter_mut().zip(&pre[l - 1]) {
                        if *z <= 0.0 {
                            *pd = 0.0;
                        }
                    }
                    core::mem::swap(&mut delta, &mut prev_delta);
                }
            }
        }
        let m = rows.len() as f64;
        grad.iter_mut().for_each(|g| *g /= m);
        loss / m
    }
}

fn softmax_in_place(v: &mut [f64]) {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for x in v.iter_mut() {
        *x = libm::exp(*x - max);
        sum += *x;
    }
    v.iter_mut().for_each(|x| *x /= sum);
}

impl Classifier for MlpModel {
    fn input_dim(&self) -> usize {
        self.layers[0].inputs
    }

    fn class_count(&self) -> usize {
        self.n_classes
    }

    fn predict_unchecked(&self, x: &[f64]) -> usize {
        argmax(&self.predict_proba(x))
    }
}

/// Mean cross-entropy over every row of `features` and its gradient.
pub fn loss_and_gradient(model: &MlpModel, features: &Matrix, labels: &[usize]) -> (f64, Vec<f64>) {
    let rows: Vec<usize> = (0..features.rows()).collect();
    let mut grad = alloc::vec![0.0; model.n_params()];
    let loss = model.batch_loss_and_gradient(features, labels, &rows, &mut grad);
    (loss, grad)
}

pub fn train(data: &LabeledDataset, cfg: &MlpConfig) -> Result<MlpModel> {
    if cfg.hidden_sizes.is_empty() || cfg.hidden_sizes.contains(&0) {
        return Err(Error::InvalidConfig("mlp: hidden_sizes must be non-empty and positive".into()));
    }
    if !(cfg.learning_rate > 0.0) || cfg.batch_size == 0 {
        return Err(Error::InvalidConfig("mlp: learning_rate and batch_size must be positive".into()));
    }
    let mut model = MlpModel::init(data.n_features(), &cfg.hidden_sizes, data.class_count(), cfg.seed);
    let mut order: Vec<usize> = (0..data.n_rows()).collect();
    let mut shuffle_rng = rng::substream(rng::derive_key(cfg.seed, Purpose::ModelInit), 1);
    let mut grad = alloc::vec![0.0; model.n_params()];
    let mut iteration = 0;
    for _ in 0..cfg.epochs {
        order.shuffle(&mut shuffle_rng);
        for batch in order.chunks(cfg.batch_size) {
            let loss = model.batch_loss_and_gradient(data.features(), data.labels(), batch, &mut grad);
            if !loss.is_finite() {
                return Err(Error::NonFiniteLoss { iteration });
            }
            model.step(&grad, cfg.learning_rate);
            iteration += 1;
        }
    }
    Ok(model)
}
