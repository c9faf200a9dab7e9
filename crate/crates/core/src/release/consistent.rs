use std::sync::Arc;

use super::constraint::ConstraintMatrix;
use crate::error::{Error, Result};
use crate::generation::GenerationMatrix;
use crate::tree::HierarchicalTree;

/// A generation matrix `G` over the internal nodes with `GᵀG = MᵀM`, where
/// `M` is the constraint matrix of the full tree.
///
/// Built from one descending sweep
/// `θ_i = |children(i)| − Σ_{internal children j} 1 / (1 + θ_j)`;
/// node `i` then gets weight `√(1 + θ_i)` and its edge weight is the inverse.
#[derive(Clone, Debug)]
pub struct EquivalentMatrix {
    theta: Vec<f64>,
    matrix: GenerationMatrix,
    unit_edge: GenerationMatrix,
}

impl EquivalentMatrix {
    /// Needs at least one internal node.
    pub fn new(tree: &HierarchicalTree) -> Result<Self> {
        let inner = Arc::new(tree.k_order_subtree(1)?);
        let n1 = inner.len();
        let parent = tree.parent_slice();
        let mut theta: Vec<f64> = (0..n1).map(|i| tree.child_count(i) as f64).collect();
        for i in (1..n1).rev() {
            theta[parent[i]] -= 1.0 / (1.0 + theta[i]);
        }
        debug_assert!(theta.iter().all(|&t| t >= 0.0));

        let shifted: Vec<f64> = theta.iter().map(|t| 1.0 + t).collect();
        let w: Vec<f64> = shifted.iter().map(|s| s.sqrt()).collect();
        let edge: Vec<f64> = w[1..].iter().map(|x| 1.0 / x).collect();
        let matrix = GenerationMatrix::new(inner.clone(), w, edge)?;
        let unit_edge = GenerationMatrix::new(inner, shifted, vec![1.0; n1 - 1])?;
        Ok(Self {
            theta,
            matrix,
            unit_edge,
        })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// `θ + 1`.
    pub fn theta_shifted(&self) -> impl Iterator<Item = f64> + '_ {
        self.theta.iter().map(|t| 1.0 + t)
    }

    pub fn matrix(&self) -> &GenerationMatrix {
        &self.matrix
    }

    /// The square-root free variant: weights `θ + 1` on nodes and 1 on edges.
    /// Scaling its rows by `1/√(θ + 1)` gives [`Self::matrix`].
    pub fn unit_edge_matrix(&self) -> &GenerationMatrix {
        &self.unit_edge
    }
}

/// Projects noisy node values onto the consistent subspace in `O(n)`.
///
/// Computes `v − M (GᵀG)⁻¹ Mᵀ v` with the equivalent matrix in place of
/// `MᵀM`, which is the least squares consistent estimate. Construction is the
/// expensive part and can be reused across releases on the same tree.
#[derive(Clone, Debug)]
pub struct ConsistentReleaser {
    constraint: ConstraintMatrix,
    equivalent: Option<EquivalentMatrix>,
    /// Parent indices narrowed to 32 bits to halve their share of the
    /// memory traffic; the root maps to 0 and is never read.
    parent: Vec<u32>,
}

impl ConsistentReleaser {
    pub fn new(tree: Arc<HierarchicalTree>) -> Result<Self> {
        if u32::try_from(tree.len()).is_err() {
            return Err(Error::InvalidParam(format!("{} nodes exceed the 2^32 limit", tree.len())));
        }
        let equivalent = match tree.internal_count() {
            0 => None,
            _ => Some(EquivalentMatrix::new(&tree)?),
        };
        let parent = (0..tree.len()).map(|i| tree.parent(i).unwrap_or(0) as u32).collect();
        Ok(Self {
            constraint: ConstraintMatrix::new(tree),
            equivalent,
            parent,
        })
    }

    pub fn tree(&self) -> &Arc<HierarchicalTree> {
        self.constraint.tree()
    }

    pub fn constraint(&self) -> &ConstraintMatrix {
        &self.constraint
    }

    /// `None` for a single-node tree.
    pub fn equivalent(&self) -> Option<&EquivalentMatrix> {
        self.equivalent.as_ref()
    }

    pub fn release(&self, noisy: &[f64]) -> Result<Vec<f64>> {
        self.project(noisy, false)
    }

    /// Same result as [`Self::release`] using the unit-edge matrix `G'`:
    /// `(GᵀG)⁻¹ y = G'⁻¹ ((θ + 1) ∘ G'⁻ᵀ y)`.
    pub fn release_no_sqrt(&self, noisy: &[f64]) -> Result<Vec<f64>> {
        self.project(noisy, true)
    }

    /// Two sweeps. Parents precede children, so a descending pass can form
    /// `Mᵀv` and solve `Gᵀz = Mᵀv` together: by the time node `i` is reached
    /// every child has already pushed into it. The ascending pass solves
    /// `G y = z` (scaled by `θ + 1` for the unit-edge variant) and emits
    /// `v − M y` as each parent value becomes final.
    ///
    /// Only the diagonal is read. The edge entries are `−1/d` in the standard
    /// matrix and `−1` in the unit-edge one, and keeping the working set small
    /// matters more here than the arithmetic.
    fn project(&self, noisy: &[f64], unit_edge: bool) -> Result<Vec<f64>> {
        let n = self.constraint.rows();
        if noisy.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: noisy.len(),
            });
        }
        let Some(eq) = &self.equivalent else {
            return Ok(noisy.to_vec());
        };
        let diag = match unit_edge {
            false => eq.matrix.diag(),
            true => eq.unit_edge.diag(),
        };
        let n1 = diag.len();
        let parent = &self.parent;

        let mut y = noisy[..n1].to_vec();
        for i in (n1..n).rev() {
            y[parent[i] as usize] -= noisy[i];
        }
        for i in (1..n1).rev() {
            let d = diag[i];
            let z = y[i] / d;
            y[i] = z;
            let pushed = if unit_edge { z } else { z / d };
            y[parent[i] as usize] -= noisy[i] - pushed;
        }
        y[0] /= diag[0];

        // unit-edge: (θ+1)·y_i equals d·y_i, so (d·y_i + p) / d = y_i + p/d
        let mut out = Vec::with_capacity(n);
        y[0] = if unit_edge { y[0] } else { y[0] / diag[0] };
        out.push(noisy[0] - y[0]);
        for i in 1..n1 {
            let d = diag[i];
            let p = y[parent[i] as usize];
            let yi = if unit_edge { y[i] + p / d } else { (y[i] + p / d) / d };
            y[i] = yi;
            out.push(noisy[i] - yi + p);
        }
        out.extend((n1..n).map(|i| noisy[i] + y[parent[i] as usize]));
        Ok(out)
    }
}
