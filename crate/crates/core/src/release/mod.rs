//! Differentially private release of hierarchical counts.
//!
//! Leaf counts are aggregated up the tree, every node gets Laplace noise of
//! scale `h / ε`, and the noisy values are projected onto the subspace where
//! each internal node equals the sum of its children.

mod consistent;
mod constraint;
pub mod metrics;
mod noise;
mod reference;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use consistent::{ConsistentReleaser, EquivalentMatrix};
pub use constraint::ConstraintMatrix;
pub use noise::{add_laplace_noise, add_laplace_noise_with, laplace_scale, sample_laplace, seeded_rng};
pub use reference::{dense_projection, DEFAULT_REFERENCE_CAP};

use crate::error::{Error, Result};
use crate::tree::HierarchicalTree;

/// Node values from leaf values: leaves keep `x`, internal nodes get the sum
/// over their leaves. This is `G_T⁻ᵀ Hᵀ x`.
pub fn build_tree_values(x: &[f64], tree: &HierarchicalTree) -> Result<Vec<f64>> {
    let mut v = tree.leaf_map().scatter(x)?;
    let parent = tree.parent_slice();
    for i in (1..v.len()).rev() {
        v[parent[i]] += v[i];
    }
    Ok(v)
}

/// Leaf values of a node vector.
pub fn inverse_build(v: &[f64], tree: &HierarchicalTree) -> Result<Vec<f64>> {
    if v.len() != tree.len() {
        return Err(Error::DimensionMismatch {
            expected: tree.len(),
            actual: v.len(),
        });
    }
    Ok(v[tree.leaves()].to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Projection {
    #[default]
    Standard,
    /// Square-root free solve, see [`ConsistentReleaser::release_no_sqrt`].
    NoSqrt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReleaseReport {
    pub epsilon: f64,
    pub seed: u64,
    pub h: usize,
    pub n: usize,
    pub m: usize,
    pub v_true: Vec<f64>,
    pub v_noisy: Vec<f64>,
    pub v_consistent: Vec<f64>,
    pub rmse_nq: f64,
    pub rmse_rq: Option<f64>,
    pub bias: f64,
    pub bias_noisy: f64,
    pub mse_theory_noisy: f64,
    pub mse_theory_consistent: f64,
}

/// Settings for [`release_counts`] beyond the privacy budget.
#[derive(Clone, Debug, Default)]
pub struct ReleaseOptions {
    pub projection: Projection,
    /// Number of range queries and their sampling seed.
    pub range_queries: Option<(usize, u64)>,
}

/// Full pipeline from leaf counts (in leaf order) to a report.
pub fn release_counts(
    releaser: &ConsistentReleaser,
    counts: &[f64],
    epsilon: f64,
    seed: u64,
    options: &ReleaseOptions,
) -> Result<ReleaseReport> {
    let tree = releaser.tree();
    let v_true = build_tree_values(counts, tree)?;
    let v_noisy = add_laplace_noise(&v_true, epsilon, tree, seed)?;
    let v_consistent = match options.projection {
        Projection::Standard => releaser.release(&v_noisy)?,
        Projection::NoSqrt => releaser.release_no_sqrt(&v_noisy)?,
    };
    let rmse_rq = match options.range_queries {
        Some((q, rq_seed)) => Some(metrics::rmse_rq(
            &inverse_build(&v_consistent, tree)?,
            counts,
            q,
            rq_seed,
        )?),
        None => None,
    };
    let (mse_theory_noisy, mse_theory_consistent) = metrics::theoretical_mse(tree, epsilon)?;
    Ok(ReleaseReport {
        epsilon,
        seed,
        h: tree.height(),
        n: tree.len(),
        m: tree.leaf_count(),
        rmse_nq: metrics::rmse_nq(&v_consistent, &v_true)?,
        rmse_rq,
        bias: metrics::bias(&v_consistent, releaser.constraint())?,
        bias_noisy: metrics::bias(&v_noisy, releaser.constraint())?,
        mse_theory_noisy,
        mse_theory_consistent,
        v_true,
        v_noisy,
        v_consistent,
    })
}

/// Convenience wrapper that builds the releaser for a single use.
pub fn release_tree(
    tree: Arc<HierarchicalTree>,
    counts: &[f64],
    epsilon: f64,
    seed: u64,
    options: &ReleaseOptions,
) -> Result<ReleaseReport> {
    release_counts(&ConsistentReleaser::new(tree)?, counts, epsilon, seed, options)
}
