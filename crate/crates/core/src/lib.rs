//! Model-agnostic copies of trained classifiers.
//!
//! A copy is built in two steps: draw points uniformly at random from a box
//! over the feature space and label them with the original classifier (the
//! *oracle*), then grow an unconstrained decision tree on that synthetic set.
//! Because the labels are a deterministic function of the points, the tree can
//! always reach zero training error; the only remaining loss is the gap between
//! a finite synthetic sample and the oracle's full decision function.
//!
//! The crate is `no_std` (with `alloc`). The default `std` feature turns on
//! rayon-backed parallelism for study runs and chunked sampling; results are
//! identical with or without it.
//!
//! Module map:
//!
//! * [`data`]: tabular datasets, nominal encoding, standardization, stratified splits.
//! * [`models`]: logistic regression, CART, gradient-boosted trees, a small MLP,
//!   feature-map pipelines, impurity importances.
//! * [`sampler`]: sampling regions, uniform draws, oracle labeling.
//! * [`copier`]: single copies, repeated-run studies, fidelity-vs-N sweeps.
//! * [`metrics`]: accuracy, agreement, importance comparison.
//! * [`scenarios`]: credit-like and toy generators with end-to-end runners.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod copier;
pub mod data;
mod error;
pub mod matrix;
pub mod metrics;
pub mod models;
mod par;
mod presort;
pub mod rng;
pub mod sampler;
pub mod scenarios;
pub mod stats;

pub use error::{Error, Result};
pub use matrix::Matrix;
