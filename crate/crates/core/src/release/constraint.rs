use std::sync::Arc;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::tree::HierarchicalTree;

/// The `n × n₁` consistency constraint matrix of a tree, kept implicit.
///
/// Column `j` (an internal node) has `+1` at row `j` and `−1` at the rows of
/// `j`'s children, so `Mᵀv = 0` says every internal node equals the sum of
/// its children.
#[derive(Clone, Debug)]
pub struct ConstraintMatrix {
    tree: Arc<HierarchicalTree>,
}

impl ConstraintMatrix {
    pub fn new(tree: Arc<HierarchicalTree>) -> Self {
        Self { tree }
    }

    pub fn tree(&self) -> &Arc<HierarchicalTree> {
        &self.tree
    }

    pub fn rows(&self) -> usize {
        self.tree.len()
    }

    pub fn cols(&self) -> usize {
        self.tree.internal_count()
    }

    /// `Mᵀv`: each internal node minus the sum of its children.
    pub fn mul_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        check(self.rows(), v.len())?;
        let mut out = v[..self.cols()].to_vec();
        let parent = self.tree.parent_slice();
        for i in 1..v.len() {
            out[parent[i]] -= v[i];
        }
        Ok(out)
    }

    /// `My`: entry `i` is `y_i` (internal nodes only) minus `y` at the parent.
    pub fn mul(&self, y: &[f64]) -> Result<Vec<f64>> {
        check(self.cols(), y.len())?;
        let n = self.rows();
        let mut out = Vec::with_capacity(n);
        out.extend_from_slice(y);
        out.resize(n, 0.0);
        let parent = self.tree.parent_slice();
        for i in 1..n {
            out[i] -= y[parent[i]];
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows(), self.cols());
        for j in 0..self.cols() {
            m[(j, j)] = 1.0;
        }
        for i in 1..self.rows() {
            m[(i, self.tree.parent_slice()[i])] = -1.0;
        }
        m
    }
}

fn check(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}
