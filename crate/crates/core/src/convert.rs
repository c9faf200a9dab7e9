//! Conversions from the structure matrix to the adjacency, Laplacian,
//! distance and ancestral matrices of a tree.
//!
//! Everything here is dense and quadratic in size, so the distance and
//! ancestral conversions refuse trees above a cap (see the `_with_cap`
//! variants). The [`walk`] module computes the same matrices by plain graph
//! traversal and serves as an independent reference.

use std::sync::Arc;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::generation::GenerationMatrix;
use crate::propagate::{self, inverse_gram};
use crate::tree::HierarchicalTree;

pub const DEFAULT_DENSE_CAP: usize = 10_000;

/// Which representation [`convert`] should produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Adjacency,
    Laplacian,
    Distance,
    Ancestral,
}

impl std::str::FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjacency" => Ok(Self::Adjacency),
            "laplacian" => Ok(Self::Laplacian),
            "distance" => Ok(Self::Distance),
            "ancestral" => Ok(Self::Ancestral),
            other => Err(Error::InvalidParam(format!("unknown representation `{other}`"))),
        }
    }
}

pub fn convert(tree: &HierarchicalTree, to: Representation, cap: usize) -> Result<DenseMatrix> {
    check_cap(tree.len(), cap)?;
    Ok(match to {
        Representation::Adjacency => to_adjacency(tree),
        Representation::Laplacian => to_laplacian(tree),
        Representation::Distance => to_distance_with_cap(tree, cap)?,
        Representation::Ancestral => to_ancestral_with_cap(tree, cap)?,
    })
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::SizeCapExceeded { n, cap });
    }
    Ok(())
}

fn structure(tree: &HierarchicalTree) -> GenerationMatrix {
    GenerationMatrix::structure(Arc::new(tree.clone()))
}

/// `I − G_T`: directed child-to-parent adjacency, 1 at `(i, f_i)`.
pub fn to_adjacency(tree: &HierarchicalTree) -> DenseMatrix {
    let g = structure(tree);
    let mut a = DenseMatrix::identity(tree.len());
    for (i, j, v) in g.triplets() {
        a[(i, j)] -= v;
    }
    a
}

/// `G_TᵀG_T − e₁e₁ᵀ`, accumulated row by row from the two nonzeros of `G_T`.
pub fn to_laplacian(tree: &HierarchicalTree) -> DenseMatrix {
    let g = structure(tree);
    let n = tree.len();
    let mut l = DenseMatrix::zeros(n, n);
    let triplets = g.triplets();
    for row in triplets.chunk_by(|a, b| a.0 == b.0) {
        for &(_, j, a) in row {
            for &(_, k, b) in row {
                l[(j, k)] += a * b;
            }
        }
    }
    l[(0, 0)] -= 1.0;
    l
}

/// Path lengths: `d1ᵀ + 1dᵀ − 2(G_TᵀG_T)⁻¹` with `d` the depths.
pub fn to_distance(tree: &HierarchicalTree) -> Result<DenseMatrix> {
    to_distance_with_cap(tree, DEFAULT_DENSE_CAP)
}

pub fn to_distance_with_cap(tree: &HierarchicalTree, cap: usize) -> Result<DenseMatrix> {
    check_cap(tree.len(), cap)?;
    let n = tree.len();
    let d = propagate::depths(tree);
    let mut x = inverse_gram(&structure(tree));
    for i in 0..n {
        for j in 0..n {
            x[(i, j)] = (d[i] + d[j]) as f64 - 2.0 * x[(i, j)];
        }
    }
    Ok(x)
}

/// Leaf-by-leaf distance from the lowest common ancestor to the root:
/// `H (G_TᵀG_T)⁻¹ Hᵀ − 1` with `H` the leaf mapping.
pub fn to_ancestral(tree: &HierarchicalTree) -> Result<DenseMatrix> {
    to_ancestral_with_cap(tree, DEFAULT_DENSE_CAP)
}

pub fn to_ancestral_with_cap(tree: &HierarchicalTree, cap: usize) -> Result<DenseMatrix> {
    check_cap(tree.len(), cap)?;
    let x = inverse_gram(&structure(tree));
    let leaves = tree.leaves();
    let m = leaves.len();
    let mut c = x.block(leaves.start, leaves.start, m, m);
    for i in 0..m {
        for j in 0..m {
            c[(i, j)] -= 1.0;
        }
    }
    Ok(c)
}

/// Reference constructions by direct traversal of parent links.
pub mod walk {
    use std::collections::VecDeque;

    use crate::dense::DenseMatrix;
    use crate::tree::HierarchicalTree;

    pub fn edges(tree: &HierarchicalTree) -> Vec<(usize, usize)> {
        (0..tree.len())
            .filter_map(|i| tree.parent(i).map(|p| (i, p)))
            .collect()
    }

    pub fn adjacency(tree: &HierarchicalTree) -> DenseMatrix {
        let mut a = DenseMatrix::zeros(tree.len(), tree.len());
        for (i, p) in edges(tree) {
            a[(i, p)] = 1.0;
        }
        a
    }

    /// Undirected degree matrix minus undirected adjacency.
    pub fn laplacian(tree: &HierarchicalTree) -> DenseMatrix {
        let mut l = DenseMatrix::zeros(tree.len(), tree.len());
        for (i, p) in edges(tree) {
            l[(i, i)] += 1.0;
            l[(p, p)] += 1.0;
            l[(i, p)] -= 1.0;
            l[(p, i)] -= 1.0;
        }
        l
    }

    fn neighbours(tree: &HierarchicalTree) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); tree.len()];
        for (i, p) in edges(tree) {
            adj[i].push(p);
            adj[p].push(i);
        }
        adj
    }

    /// All-pairs hop counts by one BFS per source.
    pub fn distance(tree: &HierarchicalTree) -> DenseMatrix {
        let n = tree.len();
        let adj = neighbours(tree);
        let mut out = DenseMatrix::zeros(n, n);
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &u in &adj[v] {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        queue.push_back(u);
                    }
                }
            }
            for (t, d) in dist.into_iter().enumerate() {
                out[(s, t)] = d as f64;
            }
        }
        out
    }

    /// Path from `i` up to the root, `i` first.
    pub fn ancestors(tree: &HierarchicalTree, i: usize) -> Vec<usize> {
        std::iter::successors(Some(i), |&v| tree.parent(v)).collect()
    }

    pub fn lowest_common_ancestor(tree: &HierarchicalTree, a: usize, b: usize) -> usize {
        let up_a = ancestors(tree, a);
        let mut v = b;
        loop {
            if up_a.contains(&v) {
                return v;
            }
            v = tree.parent(v).expect("root is a common ancestor");
        }
    }

    /// Edges from `i` to the root.
    pub fn depth_below_root(tree: &HierarchicalTree, i: usize) -> usize {
        ancestors(tree, i).len() - 1
    }

    pub fn ancestral(tree: &HierarchicalTree) -> DenseMatrix {
        let leaves: Vec<usize> = tree.leaves().collect();
        let m = leaves.len();
        let mut out = DenseMatrix::zeros(m, m);
        for (a, &i) in leaves.iter().enumerate() {
            for (b, &j) in leaves.iter().enumerate() {
                out[(a, b)] = depth_below_root(tree, lowest_common_ancestor(tree, i, j)) as f64;
            }
        }
        out
    }
}
