//! CART classification trees grown with Gini impurity.
//!
//! Candidate thresholds are midpoints between consecutive distinct values of a
//! feature within the node. The split with the largest impurity decrease wins;
//! ties go to the lowest feature index, then the lowest threshold. A node
//! becomes a leaf when it is pure, has fewer than `min_samples_split` samples,
//! sits at `max_depth`, or has no feature with two distinct values. An impure
//! node that can be split always is, even when the best decrease is zero (XOR
//! style layouts), so an unbounded tree separates every pair of distinct
//! points and reaches zero training error on consistently labeled data.
//!
//! Routing: `x[feature] <= threshold` goes left.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{argmax, Classifier};
use crate::data::LabeledDataset;
use crate::presort::{midpoint, Presorted};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CartConfig {
    /// `None` grows the tree until every leaf is pure or unsplittable.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for CartConfig {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_samples_split: 2,
        }
    }
}

impl CartConfig {
    /// True when nothing limits tree growth.
    pub fn is_unconstrained(&self) -> bool {
        self.max_depth.is_none() && self.min_samples_split <= 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Training samples per class that reached this leaf.
        histogram: Vec<u64>,
        label: usize,
    },
}

/// Nodes are stored in preorder with the root at index 0; children always have
/// larger indices than their parent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTreeModel {
    pub n_features: usize,
    pub n_classes: usize,
    pub nodes: Vec<TreeNode>,
}

impl DecisionTreeModel {
    pub fn single_leaf(n_features: usize, histogram: Vec<u64>) -> Self {
        let label = argmax(&histogram);
        Self {
            n_features,
            n_classes: histogram.len(),
            nodes: alloc::vec![TreeNode::Leaf { histogram, label }],
        }
    }

    #[inline]
    pub fn leaf_index(&self, x: &[f64]) -> usize {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if x[*feature] <= *threshold { *left } else { *right },
                TreeNode::Leaf { .. } => return i,
            }
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }

    /// Number of split levels on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        let mut depth = alloc::vec![0usize; self.nodes.len()];
        let mut max = 0;
        for i in 0..self.nodes.len() {
            if let TreeNode::Split { left, right, .. } = self.nodes[i] {
                depth[left] = depth[i] + 1;
                depth[right] = depth[i] + 1;
                max = max.max(depth[i] + 1);
            }
        }
        max
    }

    /// Class histograms of every node, summed up from the leaves.
    pub fn node_histograms(&self) -> Vec<Vec<u64>> {
        let mut hist = alloc::vec![alloc::vec![0u64; self.n_classes]; self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            match &self.nodes[i] {
                TreeNode::Leaf { histogram, .. } => hist[i].clone_from(histogram),
                TreeNode::Split { left, right, .. } => {
                    let (l, r) = (*left, *right);
                    for k in 0..self.n_classes {
                        hist[i][k] = hist[l][k] + hist[r][k];
                    }
                }
            }
        }
        hist
    }

    /// Checks structure: valid child links pointing forward, each non-root node
    /// referenced exactly once, leaf labels equal to their histogram argmax.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidDataset(msg));
        if self.nodes.is_empty() {
            return bad("tree has no nodes".into());
        }
        let mut parents = alloc::vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    if *feature >= self.n_features || !threshold.is_finite() {
                        return bad(format!("node {i}: invalid split"));
                    }
                    for &c in [left, right] {
                        if c <= i || c >= self.nodes.len() {
                            return bad(format!("node {i}: child {c} out of order"));
                        }
                        parents[c] += 1;
                    }
                }
                TreeNode::Leaf { histogram, label } => {
                    if histogram.len() != self.n_classes || *label != argmax(histogram) {
                        return bad(format!("leaf {i}: label does not match histogram"));
                    }
                }
            }
        }
        if parents[0] != 0 || parents[1..].iter().any(|&p| p != 1) {
            return bad("tree is not connected from the root".into());
        }
        Ok(())
    }
}

impl Classifier for DecisionTreeModel {
    fn input_dim(&self) -> usize {
        self.n_features
    }

    fn class_count(&self) -> usize {
        self.n_classes
    }

    #[inline]
    fn predict_unchecked(&self, x: &[f64]) -> usize {
        match &self.nodes[self.leaf_index(x)] {
            TreeNode::Leaf { label, .. } => *label,
            TreeNode::Split { .. } => unreachable!(),
        }
    }
}

struct Best {
    feature: usize,
    n_left: usize,
    threshold: f64,
    score: f64,
}

pub fn train(data: &LabeledDataset, cfg: &CartConfig) -> Result<DecisionTreeModel> {
    if cfg.min_samples_split < 2 {
        return Err(Error::InvalidConfig("cart: min_samples_split must be at least 2".into()));
    }
    let labels = data.labels();
    let k = data.class_count();
    let d = data.n_features();
    let mut sorted = Presorted::new(data.features());
    let n = sorted.n();

    let mut nodes: Vec<TreeNode> = Vec::new();
    // (start, end, depth, parent slot)
    let mut stack: Vec<(usize, usize, usize, Option<(usize, bool)>)> = alloc::vec![(0, n, 0, None)];
    let mut left_counts = alloc::vec![0u64; k];
    let mut right_counts = alloc::vec![0u64; k];

    while let Some((start, end, depth, parent)) = stack.pop() {
        let idx = nodes.len();
        if let Some((p, is_left)) = parent {
            if let TreeNode::Split { left, right, .. } = &mut nodes[p] {
                if is_left {
                    *left = idx;
                } else {
                    *right = idx;
                }
            }
        }
        let size = end - start;
        let mut histogram = alloc::vec![0u64; k];
        let seg0 = if d > 0 { sorted.segment(0, start, end) } else { &[] };
        if d > 0 {
            for &i in seg0 {
                histogram[labels[i as usize]] += 1;
            }
        } else {
            for &l in labels {
                histogram[l] += 1;
            }
        }
        let pure = histogram.iter().filter(|&&c| c > 0).count() <= 1;
        let depth_capped = cfg.max_depth.is_some_and(|m| depth >= m);
        let best = if pure || size < cfg.min_samples_split || depth_capped {
            None
        } else {
            best_split(&sorted, labels, start, end, &histogram, &mut left_counts, &mut right_counts)
        };
        match best {
            None => {
                let label = argmax(&histogram);
                nodes.push(TreeNode::Leaf { histogram, label });
            }
            Some(b) => {
                nodes.push(TreeNode::Split {
                    feature: b.feature,
                    threshold: b.threshold,
                    left: usize::MAX,
                    right: usize::MAX,
                });
                sorted.partition(b.feature, start, end, b.n_left);
                let mid = start + b.n_left;
                stack.push((mid, end, depth + 1, Some((idx, false))));
                stack.push((start, mid, depth + 1, Some((idx, true))));
            }
        }
    }
    Ok(DecisionTreeModel {
        n_features: d,
        n_classes: k,
        nodes,
    })
}

/// Maximizes `Σ_k l_k²/n_l + Σ_k r_k²/n_r`, which is equivalent to maximizing
/// the Gini decrease. Squared-count sums are updated exactly in integers.
fn best_split(
    sorted: &Presorted,
    labels: &[usize],
    start: usize,
    end: usize,
    histogram: &[u64],
    lc: &mut [u64],
    rc: &mut [u64],
) -> Option<Best> {
    let n = end - start;
    let total_sq: u64 = histogram.iter().map(|c| c * c).sum();
    let mut best: Option<Best> = None;
    for f in 0..sorted.dims() {
        let seg = sorted.segment(f, start, end);
        let col = sorted.column(f);
        if col[seg[0] as usize] == col[seg[n - 1] as usize] {
            continue;
        }
        lc.fill(0);
        rc.copy_from_slice(histogram);
        let mut left_sq: u64 = 0;
        let mut right_sq: u64 = total_sq;
        for p in 0..n - 1 {
            let c = labels[seg[p] as usize];
            left_sq += 2 * lc[c] + 1;
            lc[c] += 1;
            right_sq -= 2 * rc[c] - 1;
            rc[c] -= 1;
            let a = col[seg[p] as usize];
            let b = col[seg[p + 1] as usize];
            if a < b {
                let n_left = p + 1;
                let score = left_sq as f64 / n_left as f64 + right_sq as f64 / (n - n_left) as f64;
                if best.as_ref().is_none_or(|bb| score > bb.score) {
                    best = Some(Best {
                        feature: f,
                        n_left,
                        threshold: midpoint(a, b),
                        score,
                    });
                }
            }
        }
    }
    best
}
