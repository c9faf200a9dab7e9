//! Generate trees, write them to CSV and read them back.
//!
//!     cargo run --example synthetic_data -- [output-dir]

use std::path::PathBuf;

use genmat::datagen::{self, FanoutDistribution};
use genmat::io::{self, WeightedTree};

fn main() -> genmat::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);

    let complete = datagen::complete_tree(5, 3, 20.0, 1)?;
    println!("complete 3-ary tree: n = {}, m = {}", complete.tree.len(), complete.tree.leaf_count());

    let random = datagen::random_fanout_tree(10_000, &FanoutDistribution::default(), 100.0, 1)?;
    let t = &random.tree;
    println!(
        "random fan-out tree: n = {}, m = {}, h = {}, n/m = {:.3}",
        t.len(),
        t.leaf_count(),
        t.height(),
        t.len() as f64 / t.leaf_count() as f64
    );

    let tree_path = dir.join("random_tree.csv");
    let counts_path = dir.join("random_counts.csv");
    let weighted = WeightedTree::unit(random.tree.clone());
    io::save_tree(&weighted, &tree_path)?;
    io::save_counts(&random.tree, &random.counts, &counts_path)?;

    let back = io::load_tree(&tree_path)?;
    let counts = io::load_counts(&counts_path, &back.tree)?;
    println!("round trip identical: {}", back == weighted && counts == random.counts_f64());
    println!("wrote {} and {}", tree_path.display(), counts_path.display());
    Ok(())
}
