//! The sparse lower-triangular matrix of a weighted tree, its factorisation
//! into diagonal scalings of the structure matrix, and its eigenvectors.
//!
//!     cargo run --example generation_matrix

use std::sync::Arc;

use genmat::{EigenSide, GenerationMatrix, HierarchicalTree};

fn main() -> genmat::Result<()> {
    let tree = Arc::new(HierarchicalTree::from_parents(&[None, Some(0), Some(0), Some(1), Some(1)])?);
    let g = GenerationMatrix::new(tree.clone(), vec![4.0, 3.0, 2.5, 2.0, 1.0], vec![0.5, 2.0, 1.5, 1.0])?;

    println!("nonzeros: {} (2n - 1 = {})", g.nnz(), 2 * tree.len() - 1);
    println!("{:?}", g.to_dense());

    println!("triplets (1-based row,col,value):");
    g.write_triplets(std::io::stdout().lock())?;

    let d = g.diagonal_decomposition()?;
    println!("alpha = {:?}", d.alpha);
    println!("beta  = {:?}", d.beta);

    let structure = GenerationMatrix::structure(tree);
    println!("structure matrix similar: {}", g.is_similar(&structure));

    for i in 0..g.order() {
        let v = g.eigenvector(i, EigenSide::Right)?;
        let gv = g.matvec(&v)?;
        let residual = gv.iter().zip(&v).map(|(a, b)| (a - g.eigenvalues()[i] * b).abs()).fold(0.0, f64::max);
        println!("lambda = {:<4} residual {residual:.1e}", g.eigenvalues()[i]);
    }
    Ok(())
}
