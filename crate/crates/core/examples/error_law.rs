//! Monte Carlo estimate of total squared error before and after projection.
//! Projection removes noise in proportion to the internal node count.
//!
//!     cargo run --release --example error_law -- [trials]

use std::sync::Arc;

use genmat::release::{self, add_laplace_noise_with, metrics, seeded_rng};
use genmat::{datagen, ConsistentReleaser};

fn main() -> genmat::Result<()> {
    let trials: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let data = datagen::complete_tree(10, 2, 100.0, 0)?;
    let tree = Arc::new(data.tree);
    let releaser = ConsistentReleaser::new(tree.clone())?;
    let truth = release::build_tree_values(&data.counts.iter().map(|&c| c as f64).collect::<Vec<_>>(), &tree)?;

    let sq = |a: &[f64]| a.iter().zip(&truth).map(|(x, y)| (x - y).powi(2)).sum::<f64>();
    let (mut noisy_total, mut consistent_total) = (0.0, 0.0);
    for t in 0..trials {
        let noisy = add_laplace_noise_with(&truth, 1.0, &tree, &mut seeded_rng(99, t))?;
        noisy_total += sq(&noisy);
        consistent_total += sq(&releaser.release(&noisy)?);
    }
    let (expect_noisy, expect_consistent) = metrics::theoretical_mse(&tree, 1.0)?;
    println!("{:<12} {:>14} {:>14}", "", "empirical", "expected");
    println!("{:<12} {:>14.0} {:>14.0}", "noisy", noisy_total / trials as f64, expect_noisy);
    println!("{:<12} {:>14.0} {:>14.0}", "consistent", consistent_total / trials as f64, expect_consistent);
    Ok(())
}
