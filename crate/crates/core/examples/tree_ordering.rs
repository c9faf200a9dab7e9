//! Build a tree from labelled parent links and inspect its height ordering.
//!
//!     cargo run --example tree_ordering

use genmat::HierarchicalTree;

fn main() -> genmat::Result<()> {
    let tree = HierarchicalTree::from_parent_links([
        ("usa", None),
        ("west", Some("usa")),
        ("east", Some("usa")),
        ("ca", Some("west")),
        ("wa", Some("west")),
        ("sf", Some("ca")),
        ("la", Some("ca")),
        ("ny", Some("east")),
    ])?;

    println!("{:<6} {:>6} {:>6}", "node", "height", "parent");
    for i in 0..tree.len() {
        let parent = tree.parent(i).map(|p| tree.label(p).into_owned()).unwrap_or_default();
        println!("{:<6} {:>6} {:>6}", tree.label(i), tree.node_height(i), parent);
    }
    println!("internal nodes: {}, leaves: {}", tree.internal_count(), tree.leaf_count());
    println!("nodes per k-order subtree: {:?}", tree.order_sizes());

    let upper = tree.k_order_subtree(1)?;
    let names: Vec<_> = upper.labels().collect();
    println!("nodes above the leaves: {names:?}");
    Ok(())
}
