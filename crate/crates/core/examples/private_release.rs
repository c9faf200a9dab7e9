//! End-to-end private release on a synthetic census-like tree.
//!
//!     cargo run --release --example private_release -- [height] [epsilon]

use std::sync::Arc;

use genmat::datagen;
use genmat::release::{self, ReleaseOptions};
use genmat::ConsistentReleaser;

fn main() -> genmat::Result<()> {
    let mut args = std::env::args().skip(1);
    let height: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(12);
    let epsilon: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1.0);

    let data = datagen::complete_tree(height, 2, 100.0, 7)?;
    let tree = Arc::new(data.tree);
    let releaser = ConsistentReleaser::new(tree.clone())?;
    let options = ReleaseOptions {
        range_queries: Some((10_000.min(tree.leaf_count() * (tree.leaf_count() - 1) / 2), 1)),
        ..Default::default()
    };
    let report = release::release_counts(&releaser, &data.counts.iter().map(|&c| c as f64).collect::<Vec<_>>(), epsilon, 42, &options)?;

    let noisy_rmse = release::metrics::rmse_nq(&report.v_noisy, &report.v_true)?;
    println!("n = {}, m = {}, h = {}, epsilon = {epsilon}", report.n, report.m, report.h);
    println!("node-query rmse: noisy {noisy_rmse:.3}, consistent {:.3}", report.rmse_nq);
    println!("range-query rmse (consistent): {:.3}", report.rmse_rq.unwrap_or(f64::NAN));
    println!("consistency bias: noisy {:.3}, consistent {:.1e}", report.bias_noisy, report.bias);
    println!(
        "expected total squared error: noisy {}, consistent {}",
        report.mse_theory_noisy, report.mse_theory_consistent
    );
    Ok(())
}
