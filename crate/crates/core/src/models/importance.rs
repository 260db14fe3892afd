//! Impurity-based feature importance for tree models.
//!
//! Each split contributes `n_node · impurity − n_left · impurity_left −
//! n_right · impurity_right` to its feature: Gini impurity for classification
//! trees (recovered from the leaf class histograms) and residual variance for
//! the regression trees inside a boosted model. Totals are summed over all
//! trees and normalized to one.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::gbt::RegressionNode;
use super::tree::TreeNode;
use super::{DecisionTreeModel, GradientBoostedTreesModel, Model};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureImportance {
    /// Nonnegative, sums to one.
    pub values: Vec<f64>,
    /// True when no split decreased impurity and `values` is uniform.
    pub degenerate: bool,
}

fn normalize(raw: Vec<f64>) -> FeatureImportance {
    let d = raw.len();
    let total: f64 = raw.iter().sum();
    if !(total > 0.0) {
        return FeatureImportance {
            values: alloc::vec![1.0 / d as f64; d],
            degenerate: true,
        };
    }
    FeatureImportance {
        values: raw.into_iter().map(|v| v / total).collect(),
        degenerate: false,
    }
}

/// `n · gini(n)` for a class histogram.
fn weighted_gini(hist: &[u64]) -> f64 {
    let n: u64 = hist.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let sq: u64 = hist.iter().map(|c| c * c).sum();
    n as f64 - sq as f64 / n as f64
}

pub fn tree_importance(tree: &DecisionTreeModel) -> FeatureImportance {
    let hist = tree.node_histograms();
    let mut raw = alloc::vec![0.0; tree.n_features];
    for (i, node) in tree.nodes.iter().enumerate() {
        if let TreeNode::Split { feature, left, right, .. } = node {
            let dec = weighted_gini(&hist[i]) - weighted_gini(&hist[*left]) - weighted_gini(&hist[*right]);
            raw[*feature] += dec.max(0.0);
        }
    }
    normalize(raw)
}

pub fn gbt_importance(model: &GradientBoostedTreesModel) -> FeatureImportance {
    let mut raw = alloc::vec![0.0; model.n_features];
    for tree in &model.trees {
        for node in &tree.nodes {
            if let RegressionNode::Split { feature, sse_decrease, .. } = node {
                raw[*feature] += sse_decrease.max(0.0);
            }
        }
    }
    normalize(raw)
}

pub fn impurity_feature_importance(model: &Model) -> Result<FeatureImportance> {
    match model {
        Model::Cart(t) => Ok(tree_importance(t)),
        Model::Gbt(g) => Ok(gbt_importance(g)),
        _ => Err(Error::NotATreeModel),
    }
}
