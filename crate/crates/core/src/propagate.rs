//! Triangular solves with generation matrices and the structural quantities
//! they produce.
//!
//! `Gᵀ z = v` is solved leaf-to-root (upward propagation) and `G z = v`
//! root-to-leaf (downward propagation). Both are single index sweeps because
//! every parent precedes its children, so each costs `O(n)`.

use std::sync::Arc;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::generation::GenerationMatrix;
use crate::sparse::CsrMatrix;
use crate::tree::HierarchicalTree;

/// Default size limit for the quadratic-size relation matrices.
pub const DEFAULT_RELATION_CAP: usize = 10_000;

/// Solves `Gᵀ z = v`.
pub fn solve_upward(g: &GenerationMatrix, v: &[f64]) -> Result<Vec<f64>> {
    let mut z = v.to_vec();
    solve_upward_in_place(g, &mut z)?;
    Ok(z)
}

pub fn solve_upward_in_place(g: &GenerationMatrix, v: &mut [f64]) -> Result<()> {
    g.check_len(v.len())?;
    let parent = g.tree().parent_slice();
    let (diag, off) = (g.diag(), g.off());
    for i in (1..v.len()).rev() {
        let z = v[i] / diag[i];
        v[i] = z;
        v[parent[i]] -= off[i - 1] * z;
    }
    v[0] /= diag[0];
    Ok(())
}

/// Solves `G z = v`.
pub fn solve_downward(g: &GenerationMatrix, v: &[f64]) -> Result<Vec<f64>> {
    let mut z = v.to_vec();
    solve_downward_in_place(g, &mut z)?;
    Ok(z)
}

pub fn solve_downward_in_place(g: &GenerationMatrix, v: &mut [f64]) -> Result<()> {
    g.check_len(v.len())?;
    let parent = g.tree().parent_slice();
    let (diag, off) = (g.diag(), g.off());
    v[0] /= diag[0];
    for i in 1..v.len() {
        v[i] = (v[i] - off[i - 1] * v[parent[i]]) / diag[i];
    }
    Ok(())
}

/// Solves `Gᵀ z = e_i` touching only `i` and its ancestors, which is the
/// whole support of `z`. Entries come back in order `i, f_i, f_{f_i}, …`.
pub fn solve_upward_unit(g: &GenerationMatrix, i: usize) -> Vec<(usize, f64)> {
    let (diag, off) = (g.diag(), g.off());
    let tree = g.tree();
    let mut out = vec![(i, 1.0 / diag[i])];
    let mut cur = i;
    while let Some(p) = tree.parent(cur) {
        let z = -off[cur - 1] * out.last().unwrap().1 / diag[p];
        out.push((p, z));
        cur = p;
    }
    out
}

fn structure(tree: &HierarchicalTree) -> GenerationMatrix {
    GenerationMatrix::structure(Arc::new(tree.clone()))
}

fn exact_counts(z: Vec<f64>) -> Vec<usize> {
    z.into_iter().map(|x| x.round() as usize).collect()
}

/// `(I − G_Tᵀ) 1`: the number of children of each node.
pub fn child_counts(tree: &HierarchicalTree) -> Vec<usize> {
    let g = structure(tree);
    let ones = vec![1.0; tree.len()];
    let gt1 = g.matvec_transpose(&ones).expect("length matches");
    exact_counts(gt1.into_iter().map(|x| 1.0 - x).collect())
}

/// `G_T⁻ᵀ 1`: the size of the subtree rooted at each node.
pub fn subtree_sizes(tree: &HierarchicalTree) -> Vec<usize> {
    let g = structure(tree);
    exact_counts(solve_upward(&g, &vec![1.0; tree.len()]).expect("length matches"))
}

/// `G_T⁻¹ 1`: the depth of each node, the root having depth 1.
pub fn depths(tree: &HierarchicalTree) -> Vec<usize> {
    let g = structure(tree);
    exact_counts(solve_downward(&g, &vec![1.0; tree.len()]).expect("length matches"))
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::SizeCapExceeded { n, cap });
    }
    Ok(())
}

/// `G_T⁻¹`: entry `(i, j)` is 1 iff `j = i` or `j` is an ancestor of `i`.
pub fn ancestor_indicator(tree: &HierarchicalTree) -> Result<CsrMatrix> {
    ancestor_indicator_with_cap(tree, DEFAULT_RELATION_CAP)
}

pub fn ancestor_indicator_with_cap(tree: &HierarchicalTree, cap: usize) -> Result<CsrMatrix> {
    let n = tree.len();
    check_cap(n, cap)?;
    let g = structure(tree);
    // row i of G⁻¹ is (G⁻ᵀ e_i)ᵀ
    let triplets = (0..n)
        .flat_map(|i| {
            solve_upward_unit(&g, i)
                .into_iter()
                .map(move |(j, v)| (i, j, v))
        })
        .collect();
    Ok(CsrMatrix::from_triplets(n, n, triplets))
}

/// `G_T G_Tᵀ`. Off the diagonal, entry `(i, j)` is 1 exactly for siblings.
pub fn sibling_indicator(tree: &HierarchicalTree) -> Result<CsrMatrix> {
    sibling_indicator_with_cap(tree, DEFAULT_RELATION_CAP)
}

pub fn sibling_indicator_with_cap(tree: &HierarchicalTree, cap: usize) -> Result<CsrMatrix> {
    let n = tree.len();
    check_cap(n, cap)?;
    let g = structure(tree);
    // G Gᵀ = Σ_k c_k c_kᵀ over the columns c_k of G; column k holds the
    // diagonal entry of row k and the edge entries of k's children.
    let mut triplets = Vec::new();
    for k in 0..n {
        let column: Vec<(usize, f64)> = std::iter::once((k, g.get(k, k)))
            .chain(tree.children(k).iter().map(|&c| (c, g.get(c, k))))
            .collect();
        for &(i, a) in &column {
            for &(j, b) in &column {
                triplets.push((i, j, a * b));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(n, n, triplets))
}

/// `(G_Tᵀ G_T)⁻¹`: entry `(i, j)` counts the common ancestors of `i` and `j`
/// (each node counting as its own ancestor); the diagonal holds depths.
pub fn common_ancestor_counts(tree: &HierarchicalTree) -> Result<DenseMatrix> {
    common_ancestor_counts_with_cap(tree, DEFAULT_RELATION_CAP)
}

pub fn common_ancestor_counts_with_cap(tree: &HierarchicalTree, cap: usize) -> Result<DenseMatrix> {
    check_cap(tree.len(), cap)?;
    Ok(inverse_gram(&structure(tree)))
}

/// `(GᵀG)⁻¹` column by column: `x_j = G⁻¹ (G⁻ᵀ e_j)`.
pub(crate) fn inverse_gram(g: &GenerationMatrix) -> DenseMatrix {
    let n = g.order();
    let mut out = DenseMatrix::zeros(n, n);
    let mut col = vec![0.0; n];
    for j in 0..n {
        col.fill(0.0);
        for (i, v) in solve_upward_unit(g, j) {
            col[i] = v;
        }
        solve_downward_in_place(g, &mut col).expect("length matches");
        out.set_column(j, &col);
    }
    out
}
