use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::constraint::ConstraintMatrix;
use super::noise::{check_epsilon, seeded_rng};
use crate::error::{Error, Result};
use crate::tree::HierarchicalTree;

/// Root mean square error over single-node queries.
pub fn rmse_nq(out: &[f64], truth: &[f64]) -> Result<f64> {
    if out.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            actual: out.len(),
        });
    }
    if out.is_empty() {
        return Ok(0.0);
    }
    let sq: f64 = out.iter().zip(truth).map(|(a, b)| (a - b).powi(2)).sum();
    Ok((sq / out.len() as f64).sqrt())
}

/// Root mean square error of leaf range sums over `q` distinct ranges
/// `[a, b]`, `a < b`, drawn uniformly with generator seed `seed`.
///
/// Small `q` is sampled by rejection; once `q` reaches half of all
/// `m(m−1)/2` ranges the ranges are enumerated and partially shuffled.
pub fn rmse_rq(x_out: &[f64], x_true: &[f64], q: usize, seed: u64) -> Result<f64> {
    let m = x_true.len();
    if x_out.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: x_out.len(),
        });
    }
    if m < 2 {
        return Err(Error::InvalidParam("range queries need at least two leaves".into()));
    }
    if q == 0 {
        return Err(Error::InvalidParam("at least one range query is needed".into()));
    }
    let available = m * (m - 1) / 2;
    if q > available {
        return Err(Error::QTooLarge { q, available });
    }

    // prefix[k] = Σ_{i<k} (x_out − x_true)_i
    let mut prefix = Vec::with_capacity(m + 1);
    prefix.push(0.0);
    for (a, b) in x_out.iter().zip(x_true) {
        prefix.push(prefix.last().unwrap() + (a - b));
    }
    let err = |(a, b): (usize, usize)| prefix[b + 1] - prefix[a];

    let mut rng = seeded_rng(seed, 0);
    let ranges: Vec<(usize, usize)> = if 2 * q <= available {
        let mut seen = HashSet::with_capacity(q);
        let mut out = Vec::with_capacity(q);
        while out.len() < q {
            let (i, j) = (rng.random_range(0..m), rng.random_range(0..m));
            if i == j {
                continue;
            }
            let r = (i.min(j), i.max(j));
            if seen.insert(r) {
                out.push(r);
            }
        }
        out
    } else {
        let mut all: Vec<_> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
        let (chosen, _) = all.partial_shuffle(&mut rng, q);
        chosen.to_vec()
    };
    let sq: f64 = ranges.into_iter().map(|r| err(r).powi(2)).sum();
    Ok((sq / q as f64).sqrt())
}

/// `√(Σ Δ_i² / n₁)` with `Δ = Mᵀv`; zero when there are no internal nodes.
pub fn bias(v: &[f64], constraint: &ConstraintMatrix) -> Result<f64> {
    let delta = constraint.mul_transpose(v)?;
    if delta.is_empty() {
        return Ok(0.0);
    }
    Ok((delta.iter().map(|d| d * d).sum::<f64>() / delta.len() as f64).sqrt())
}

/// Expected total squared error before and after projection:
/// `2nh²/ε²` and `2mh²/ε²`.
pub fn theoretical_mse(tree: &HierarchicalTree, epsilon: f64) -> Result<(f64, f64)> {
    check_epsilon(epsilon)?;
    let h = tree.height() as f64;
    let per_node = 2.0 * h * h / (epsilon * epsilon);
    Ok((per_node * tree.len() as f64, per_node * tree.leaf_count() as f64))
}
