//! Wall-clock time of matrix construction and projection as the tree doubles.
//!
//!     cargo run --release --example scaling -- [max-height]

use std::sync::Arc;
use std::time::Instant;

use genmat::release::{add_laplace_noise, build_tree_values};
use genmat::{datagen, ConsistentReleaser};

fn main() -> genmat::Result<()> {
    let max_height: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(21);
    println!("{:>6} {:>10} {:>12} {:>12}", "height", "n", "construct s", "release s");
    for h in 14..=max_height {
        let data = datagen::complete_tree(h, 2, 100.0, 0)?;
        let tree = Arc::new(data.tree);
        let v = build_tree_values(&data.counts.iter().map(|&c| c as f64).collect::<Vec<_>>(), &tree)?;
        let noisy = add_laplace_noise(&v, 1.0, &tree, 0)?;

        let t0 = Instant::now();
        let releaser = ConsistentReleaser::new(tree.clone())?;
        let t1 = Instant::now();
        let out = releaser.release(&noisy)?;
        let t2 = Instant::now();
        std::hint::black_box(out);
        println!(
            "{h:>6} {:>10} {:>12.4} {:>12.4}",
            tree.len(),
            (t1 - t0).as_secs_f64(),
            (t2 - t1).as_secs_f64()
        );
    }
    Ok(())
}
