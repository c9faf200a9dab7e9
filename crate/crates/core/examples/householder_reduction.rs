//! Dense Householder reduction of a tree's constraint matrix. The top block
//! of the result matches the sparse equivalent matrix used for release.
//!
//!     cargo run --example householder_reduction

use std::sync::Arc;

use genmat::lqr;
use genmat::release::{ConstraintMatrix, EquivalentMatrix};
use genmat::HierarchicalTree;

fn main() -> genmat::Result<()> {
    let parents = [None, Some(0), Some(0), Some(1), Some(1), Some(1), Some(2), Some(2), Some(3), Some(3)];
    let tree = HierarchicalTree::from_parents(&parents)?;
    let m = ConstraintMatrix::new(Arc::new(tree.clone())).to_dense();
    let n1 = tree.internal_count();

    let r = lqr::lo_qr_observed(&m, |step, r| {
        let lower = r.block(n1, 0, r.rows() - n1, n1).max_abs();
        println!("after step {step}: largest lower-block entry {lower:.3}");
    })?;
    println!("reduced top block:\n{:?}", r.block(0, 0, n1, n1));
    println!("rest is zero: {}", r.block(n1, 0, tree.len() - n1, n1).max_abs() <= 1e-12);

    let sparse = EquivalentMatrix::new(&tree)?.matrix().to_dense();
    println!("distance to the sparse equivalent matrix: {:.1e}", sparse.max_abs_diff(&r.block(0, 0, n1, n1)));

    let report = lqr::check_reduction_invariants(&tree)?;
    println!("structural invariants after {} steps: {}", report.steps_checked, if report.passed() { "ok" } else { "violated" });
    Ok(())
}
