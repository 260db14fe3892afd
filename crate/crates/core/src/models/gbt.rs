//! Binary gradient-boosted regression trees on the logistic loss.
//!
//! Each round fits a depth-limited least-squares tree to the residuals
//! `y − sigmoid(score)` and sets every leaf to the one-step Newton estimate
//! `Σ r / Σ p(1 − p)` over its samples. The model score is
//! `initial_score + learning_rate · Σ_m tree_m(x)` and class 1 is predicted iff
//! the score is strictly positive.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::logistic::sigmoid;
use super::Classifier;
use crate::data::LabeledDataset;
use crate::presort::{midpoint, Presorted};
use crate::{Error, Result};

/// Prevalence is clipped to `[PRIOR_CLAMP, 1 − PRIOR_CLAMP]` before taking log-odds.
pub const PRIOR_CLAMP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GbtConfig {
    pub rounds: usize,
    pub tree_depth: usize,
    pub learning_rate: f64,
}

impl Default for GbtConfig {
    fn default() -> Self {
        Self {
            rounds: 100,
            tree_depth: 3,
            learning_rate: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RegressionNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        samples: usize,
        /// Reduction of the residual sum of squares achieved by this split.
        sse_decrease: f64,
    },
    Leaf {
        value: f64,
        samples: usize,
    },
}

/// Preorder node list with the root at index 0; `<=` routes left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    pub nodes: Vec<RegressionNode>,
}

impl RegressionTree {
    #[inline]
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                RegressionNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => i = if x[*feature] <= *threshold { *left } else { *right },
                RegressionNode::Leaf { value, .. } => return *value,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientBoostedTreesModel {
    pub n_features: usize,
    pub initial_score: f64,
    pub learning_rate: f64,
    pub trees: Vec<RegressionTree>,
}

impl GradientBoostedTreesModel {
    pub fn score(&self, x: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.predict(x)).sum();
        self.initial_score + self.learning_rate * sum
    }
}

impl Classifier for GradientBoostedTreesModel {
    fn input_dim(&self) -> usize {
        self.n_features
    }

    fn class_count(&self) -> usize {
        2
    }

    #[inline]
    fn predict_unchecked(&self, x: &[f64]) -> usize {
        usize::from(self.score(x) > 0.0)
    }
}

/// Clamped log-odds of class-1 prevalence.
pub fn prior_log_odds(labels: &[usize]) -> f64 {
    let ones = labels.iter().filter(|&&l| l == 1).count();
    let p = (ones as f64 / labels.len() as f64).clamp(PRIOR_CLAMP, 1.0 - PRIOR_CLAMP);
    libm::log(p / (1.0 - p))
}

pub fn train(data: &LabeledDataset, cfg: &GbtConfig) -> Result<GradientBoostedTreesModel> {
    if data.class_count() != 2 {
        return Err(Error::NotBinary(data.class_count()));
    }
    if !(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0) {
        return Err(Error::InvalidConfig(
            "gbt: learning_rate must lie in (0, 1]".into(),
        ));
    }
    let labels = data.labels();
    let initial_score = prior_log_odds(labels);
    let mut model = GradientBoostedTreesModel {
        n_features: data.n_features(),
        initial_score,
        learning_rate: cfg.learning_rate,
        trees: Vec::new(),
    };
    let single_class = labels.iter().all(|&l| l == labels[0]);
    if single_class || data.n_features() == 0 {
        return Ok(model);
    }

    let y: Vec<f64> = labels.iter().map(|&l| if l == 1 { 1.0 } else { 0.0 }).collect();
    let presorted = Presorted::new(data.features());
    let mut scores = alloc::vec![initial_score; y.len()];
    let mut residual = alloc::vec![0.0; y.len()];
    let mut hessian = alloc::vec![0.0; y.len()];
    for _ in 0..cfg.rounds {
        for i in 0..y.len() {
            let p = sigmoid(scores[i]);
            residual[i] = y[i] - p;
            hessian[i] = p * (1.0 - p);
        }
        let tree = fit_regression_tree(presorted.clone(), &residual, &hessian, cfg.tree_depth);
        for (i, s) in scores.iter_mut().enumerate() {
            *s += cfg.learning_rate * tree.predict(data.features().row(i));
        }
        model.trees.push(tree);
    }
    Ok(model)
}

fn newton_leaf(seg: &[u32], residual: &[f64], hessian: &[f64]) -> f64 {
    let num: f64 = seg.iter().map(|&i| residual[i as usize]).sum();
    let den: f64 = seg.iter().map(|&i| hessian[i as usize]).sum();
    if libm::fabs(den) < 1e-150 {
        0.0
    } else {
        num / den
    }
}

/// Least-squares tree on `residual`, with Newton leaf values.
fn fit_regression_tree(
    mut sorted: Presorted,
    residual: &[f64],
    hessian: &[f64],
    max_depth: usize,
) -> RegressionTree {
    let n = sorted.n();
    let mut nodes: Vec<RegressionNode> = Vec::new();
    let mut stack: Vec<(usize, usize, usize, Option<(usize, bool)>)> = alloc::vec![(0, n, 0, None)];
    while let Some((start, end, depth, parent)) = stack.pop() {
        let idx = nodes.len();
        if let Some((p, is_left)) = parent {
            if let RegressionNode::Split { left, right, .. } = &mut nodes[p] {
                if is_left {
                    *left = idx;
                } else {
                    *right = idx;
                }
            }
        }
        let size = end - start;
        let split = if depth < max_depth && size >= 2 {
            best_regression_split(&sorted, residual, start, end)
        } else {
            None
        };
        match split {
            None => {
                let value = newton_leaf(sorted.segment(0, start, end), residual, hessian);
                nodes.push(RegressionNode::Leaf {
                    value,
                    samples: size,
                });
            }
            Some((feature, n_left, threshold, gain)) => {
                nodes.push(RegressionNode::Split {
                    feature,
                    threshold,
                    left: usize::MAX,
                    right: usize::MAX,
                    samples: size,
                    sse_decrease: gain,
                });
                sorted.partition(feature, start, end, n_left);
                let mid = start + n_left;
                stack.push((mid, end, depth + 1, Some((idx, false))));
                stack.push((start, mid, depth + 1, Some((idx, true))));
            }
        }
    }
    RegressionTree { nodes }
}

/// Best `(feature, n_left, threshold, sse_decrease)`, if any split reduces
/// the squared error by more than rounding noise.
fn best_regression_split(
    sorted: &Presorted,
    residual: &[f64],
    start: usize,
    end: usize,
) -> Option<(usize, usize, f64, f64)> {
    let n = end - start;
    let seg0 = sorted.segment(0, start, end);
    let total: f64 = seg0.iter().map(|&i| residual[i as usize]).sum();
    let total_sq: f64 = seg0.iter().map(|&i| residual[i as usize] * residual[i as usize]).sum();
    let parent = total * total / n as f64;
    let tolerance = 1e-12 * total_sq.max(f64::MIN_POSITIVE);
    let mut best: Option<(usize, usize, f64, f64)> = None;
    let mut best_score = f64::NEG_INFINITY;
    for f in 0..sorted.dims() {
        let seg = sorted.segment(f, start, end);
        let col = sorted.column(f);
        let mut left_sum = 0.0;
        for p in 0..n - 1 {
            left_sum += residual[seg[p] as usize];
            let a = col[seg[p] as usize];
            let b = col[seg[p + 1] as usize];
            if a < b {
                let n_left = (p + 1) as f64;
                let right_sum = total - left_sum;
                let score = left_sum * left_sum / n_left + right_sum * right_sum / (n as f64 - n_left);
                if score > best_score {
                    best_score = score;
                    best = Some((f, p + 1, midpoint(a, b), score - parent));
                }
            }
        }
    }
    best.filter(|&(_, _, _, gain)| gain > tolerance)
}
