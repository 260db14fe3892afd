//! Presorted sample orderings for tree growth.
//!
//! Every feature keeps its own ordering of the sample indices. A tree node owns
//! the same index range `[start, end)` in every ordering, and within that range
//! each ordering is sorted by its feature. Splitting a node stably partitions
//! each range into its left and right halves, so no sorting happens after the
//! initial one and a split costs O(d · n_node).

use alloc::vec::Vec;

use crate::Matrix;

#[derive(Clone)]
pub(crate) struct Presorted {
    n: usize,
    /// Column-major copy of the features.
    cols: Vec<f64>,
    /// `d` orderings of length `n`, back to back.
    order: Vec<u32>,
    scratch: Vec<u32>,
    goes_left: Vec<bool>,
}

impl Presorted {
    pub(crate) fn new(features: &Matrix) -> Self {
        let n = features.rows();
        let d = features.cols();
        assert!(n <= u32::MAX as usize, "too many samples for u32 indices");
        let mut cols = alloc::vec![0.0; n * d];
        for (i, row) in features.iter_rows().enumerate() {
            for (f, &v) in row.iter().enumerate() {
                cols[f * n + i] = v;
            }
        }
        let mut order = Vec::with_capacity(n * d);
        for f in 0..d {
            let col = &cols[f * n..(f + 1) * n];
            let mut idx: Vec<u32> = (0..n as u32).collect();
            idx.sort_unstable_by(|&a, &b| {
                col[a as usize]
                    .total_cmp(&col[b as usize])
                    .then(a.cmp(&b))
            });
            order.extend_from_slice(&idx);
        }
        Self {
            n,
            cols,
            order,
            scratch: alloc::vec![0; n],
            goes_left: alloc::vec![false; n],
        }
    }

    #[inline]
    pub(crate) fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub(crate) fn dims(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.cols.len() / self.n
        }
    }

    #[inline]
    pub(crate) fn column(&self, f: usize) -> &[f64] {
        &self.cols[f * self.n..(f + 1) * self.n]
    }

    #[inline]
    pub(crate) fn segment(&self, f: usize, start: usize, end: usize) -> &[u32] {
        &self.order[f * self.n + start..f * self.n + end]
    }

    /// Splits node `[start, end)` so that the first `n_left` samples of
    /// `feature`'s ordering move to `[start, start + n_left)` in every ordering.
    pub(crate) fn partition(&mut self, feature: usize, start: usize, end: usize, n_left: usize) {
        let n = self.n;
        {
            let seg = &self.order[feature * n + start..feature * n + end];
            for (p, &i) in seg.iter().enumerate() {
                self.goes_left[i as usize] = p < n_left;
            }
        }
        for f in 0..self.dims() {
            if f == feature {
                continue;
            }
            let seg = &mut self.order[f * n + start..f * n + end];
            let mut l = 0;
            let mut r = 0;
            for p in 0..seg.len() {
                let i = seg[p];
                if self.goes_left[i as usize] {
                    seg[l] = i;
                    l += 1;
                } else {
                    self.scratch[r] = i;
                    r += 1;
                }
            }
            seg[l..].copy_from_slice(&self.scratch[..r]);
        }
    }
}

/// Threshold between consecutive distinct sorted values `a < b`: their
/// midpoint, or `a` when the midpoint rounds onto `b`.
#[inline]
pub(crate) fn midpoint(a: f64, b: f64) -> f64 {
    let mut m = 0.5 * (a + b);
    if !m.is_finite() {
        m = 0.5 * a + 0.5 * b;
    }
    if m >= b {
        a
    } else {
        m
    }
}
