//! The generation matrix of a weighted hierarchical tree.
//!
//! Row `i` holds the node weight `w_i` on the diagonal and `-w_{i→f_i}` at
//! column `f_i` (the parent). With nodes in descending order of height the
//! matrix is lower triangular and has exactly `2n − 1` nonzeros. Storage is a
//! fixed-pattern row-major layout: row `i > 0` is `[(i, f_i), (i, i)]`, so the
//! column indices come from the tree's parent array and only the values are
//! kept here.

use std::io::Write;
use std::sync::Arc;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::propagate;
use crate::tree::HierarchicalTree;

#[derive(Clone, Debug)]
pub struct GenerationMatrix {
    tree: Arc<HierarchicalTree>,
    diag: Vec<f64>,
    /// `off[i - 1]` is the stored value `g_{i, f_i} = -w_{i→f_i}`.
    off: Vec<f64>,
}

/// `G = diag(β) · G_T · diag(α)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalDecomposition {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenSide {
    /// `uᵀ G = λ uᵀ`
    Left,
    /// `G v = λ v`
    Right,
}

impl GenerationMatrix {
    /// `w_edge[i - 1]` is the weight of the edge from node `i` to its parent.
    pub fn new(tree: Arc<HierarchicalTree>, w_node: Vec<f64>, w_edge: Vec<f64>) -> Result<Self> {
        let n = tree.len();
        if w_node.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: w_node.len(),
            });
        }
        if w_edge.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                actual: w_edge.len(),
            });
        }
        if let Some(i) = w_node.iter().position(|&w| w == 0.0) {
            return Err(Error::ZeroWeight(i));
        }
        if let Some(i) = w_edge.iter().position(|&w| w == 0.0) {
            return Err(Error::ZeroWeight(i + 1));
        }
        let off = w_edge.into_iter().map(|w| -w).collect();
        Ok(Self {
            tree,
            diag: w_node,
            off,
        })
    }

    /// The structure matrix `G_T`: every weight is 1.
    pub fn structure(tree: Arc<HierarchicalTree>) -> Self {
        let n = tree.len();
        Self {
            tree,
            diag: vec![1.0; n],
            off: vec![-1.0; n - 1],
        }
    }

    pub fn tree(&self) -> &Arc<HierarchicalTree> {
        &self.tree
    }

    /// Matrix order `n`.
    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn node_weights(&self) -> &[f64] {
        &self.diag
    }

    /// Edge weights `w_{i→f_i}` for `i = 1..n`.
    pub fn edge_weights(&self) -> Vec<f64> {
        self.off.iter().map(|v| -v).collect()
    }

    pub(crate) fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub(crate) fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else if i > 0 && self.tree.parent(i) == Some(j) {
            self.off[i - 1]
        } else {
            0.0
        }
    }

    pub fn nnz(&self) -> usize {
        self.diag.iter().chain(&self.off).filter(|v| **v != 0.0).count()
    }

    /// Nonzeros as `(row, col, value)`, sorted by `(row, col)`, 0-based.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(2 * self.order() - 1);
        out.push((0, 0, self.diag[0]));
        for i in 1..self.order() {
            out.push((i, self.tree.parent_slice()[i], self.off[i - 1]));
            out.push((i, i, self.diag[i]));
        }
        out
    }

    /// Writes `row,col,value` lines, 1-based, sorted.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (i, j, v) in self.triplets() {
            writeln!(w, "{},{},{}", i + 1, j + 1, v)?;
        }
        Ok(())
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.order();
        let mut out = DenseMatrix::zeros(n, n);
        for (i, j, v) in self.triplets() {
            out[(i, j)] = v;
        }
        out
    }

    /// `G x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        let parent = self.tree.parent_slice();
        let mut out = Vec::with_capacity(x.len());
        out.push(self.diag[0] * x[0]);
        for i in 1..x.len() {
            out.push(self.diag[i] * x[i] + self.off[i - 1] * x[parent[i]]);
        }
        Ok(out)
    }

    /// `Gᵀ x`.
    pub fn matvec_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        let parent = self.tree.parent_slice();
        let mut out: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for i in 1..x.len() {
            out[parent[i]] += self.off[i - 1] * x[i];
        }
        Ok(out)
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                actual: len,
            });
        }
        Ok(())
    }

    /// Same order and the same nonzero coordinates.
    pub fn is_similar(&self, other: &Self) -> bool {
        self.order() == other.order()
            && self.tree.parent_slice() == other.tree.parent_slice()
            && self.diag.iter().zip(&other.diag).all(|(a, b)| (*a != 0.0) == (*b != 0.0))
            && self.off.iter().zip(&other.off).all(|(a, b)| (*a != 0.0) == (*b != 0.0))
    }

    /// The leading `n_k × n_k` block, which represents the k-order subtree.
    pub fn leading_submatrix(&self, k: usize) -> Result<Self> {
        let sub = self.tree.k_order_subtree(k)?;
        let nk = sub.len();
        Ok(Self {
            tree: Arc::new(sub),
            diag: self.diag[..nk].to_vec(),
            off: self.off[..nk - 1].to_vec(),
        })
    }

    /// Splits `G` into `diag(β) · G_T · diag(α)`.
    ///
    /// Uses `α = exp(G_T⁻¹(ln w_node − ln w_edge))` with the root edge weight
    /// taken as 1, and `β = w_node ⊘ α`. Requires strictly positive weights.
    pub fn diagonal_decomposition(&self) -> Result<DiagonalDecomposition> {
        if let Some(i) = self.diag.iter().position(|&w| w <= 0.0) {
            return Err(Error::NonPositiveWeight(i));
        }
        if let Some(i) = self.off.iter().position(|&g| g >= 0.0) {
            return Err(Error::NonPositiveWeight(i + 1));
        }
        let mut log_ratio: Vec<f64> = self.diag.iter().map(|w| w.ln()).collect();
        for (r, g) in log_ratio[1..].iter_mut().zip(&self.off) {
            *r -= (-g).ln();
        }
        let structure = Self::structure(self.tree.clone());
        propagate::solve_downward_in_place(&structure, &mut log_ratio)?;
        let alpha: Vec<f64> = log_ratio.into_iter().map(f64::exp).collect();
        let beta = self.diag.iter().zip(&alpha).map(|(w, a)| w / a).collect();
        Ok(DiagonalDecomposition { alpha, beta })
    }

    /// Eigenvalues of a triangular matrix: the node weights.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.diag.clone()
    }

    /// Eigenvector for the eigenvalue `w_i`, scaled so that entry `i` is 1.
    ///
    /// A left eigenvector is supported on `i` and its ancestors and needs
    /// every ancestor weight to differ from `w_i`; a right eigenvector is
    /// supported on `i` and its descendants with the same condition on them.
    pub fn eigenvector(&self, i: usize, side: EigenSide) -> Result<Vec<f64>> {
        let n = self.order();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, size: n });
        }
        let lambda = self.diag[i];
        let parent = self.tree.parent_slice();
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        match side {
            EigenSide::Left => {
                let mut cur = i;
                while let Some(p) = self.tree.parent(cur) {
                    if self.diag[p] == lambda {
                        return Err(Error::EigenvectorNotGuaranteed {
                            node: i,
                            conflict: p,
                        });
                    }
                    cur = p;
                }
                // only the child on the path to i contributes to u_p
                let mut cur = i;
                while let Some(p) = self.tree.parent(cur) {
                    v[p] = -self.off[cur - 1] * v[cur] / (self.diag[p] - lambda);
                    cur = p;
                }
            }
            EigenSide::Right => {
                let mut inside = vec![false; n];
                inside[i] = true;
                for j in i + 1..n {
                    inside[j] = inside[parent[j]];
                    if inside[j] && self.diag[j] == lambda {
                        return Err(Error::EigenvectorNotGuaranteed {
                            node: i,
                            conflict: j,
                        });
                    }
                }
                for j in i + 1..n {
                    if inside[j] {
                        v[j] = -self.off[j - 1] * v[parent[j]] / (self.diag[j] - lambda);
                    }
                }
            }
        }
        Ok(v)
    }
}
