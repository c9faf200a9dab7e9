//! Upward and downward solves and the tree quantities they compute.
//!
//!     cargo run --example propagation

use std::sync::Arc;

use genmat::propagate::{self, solve_downward, solve_upward};
use genmat::{GenerationMatrix, HierarchicalTree};

fn main() -> genmat::Result<()> {
    let tree = HierarchicalTree::from_parents(&[None, Some(0), Some(0), Some(1), Some(1), Some(2)])?;
    let g = GenerationMatrix::structure(Arc::new(tree.clone()));
    let ones = vec![1.0; tree.len()];

    println!("upward solve of 1 (subtree sizes): {:?}", solve_upward(&g, &ones)?);
    println!("downward solve of 1 (depths):      {:?}", solve_downward(&g, &ones)?);
    println!("child counts:  {:?}", propagate::child_counts(&tree));
    println!("subtree sizes: {:?}", propagate::subtree_sizes(&tree));
    println!("depths:        {:?}", propagate::depths(&tree));

    println!("ancestor indicator:\n{:?}", propagate::ancestor_indicator(&tree)?.to_dense());
    println!("sibling indicator:\n{:?}", propagate::sibling_indicator(&tree)?.to_dense());
    println!("common ancestor counts:\n{:?}", propagate::common_ancestor_counts(&tree)?);

    // A unit vector at a node only reaches its ancestors on the way up.
    let path = propagate::solve_upward_unit(&g, 4);
    println!("support of the upward solve of e_4: {:?}", path.iter().map(|p| p.0).collect::<Vec<_>>());
    Ok(())
}
