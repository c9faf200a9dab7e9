//! Adjacency, Laplacian, distance and ancestral matrices from the structure
//! matrix, checked against plain graph walks.
//!
//!     cargo run --example conversions

use genmat::convert::{self, walk};
use genmat::HierarchicalTree;

fn main() -> genmat::Result<()> {
    let tree = HierarchicalTree::from_parents(&[None, Some(0), Some(0), Some(1), Some(1)])?;

    let a = convert::to_adjacency(&tree);
    let l = convert::to_laplacian(&tree);
    let d = convert::to_distance(&tree)?;
    let c = convert::to_ancestral(&tree)?;

    println!("adjacency:\n{a:?}");
    println!("laplacian:\n{l:?}");
    println!("distance:\n{d:?}");
    println!("ancestral (leaves only):\n{c:?}");

    assert_eq!(a, walk::adjacency(&tree));
    assert_eq!(l, walk::laplacian(&tree));
    assert_eq!(d, walk::distance(&tree));
    assert_eq!(c, walk::ancestral(&tree));
    println!("all four agree with the graph-walk versions");
    Ok(())
}
