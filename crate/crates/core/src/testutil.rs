//! Shared fixtures for unit tests.

use proptest::prelude::*;

use crate::tree::HierarchicalTree;

/// Root with `leaves` children.
pub fn star(leaves: usize) -> HierarchicalTree {
    let parents: Vec<_> = std::iter::once(None).chain((0..leaves).map(|_| Some(0))).collect();
    HierarchicalTree::from_parents(&parents).unwrap()
}

/// Path of `n` nodes.
pub fn chain(n: usize) -> HierarchicalTree {
    let parents: Vec<_> = (0..n).map(|i| i.checked_sub(1)).collect();
    HierarchicalTree::from_parents(&parents).unwrap()
}

/// A(B(D, E), C).
pub fn five_node() -> HierarchicalTree {
    HierarchicalTree::from_parent_links([
        ("A", None),
        ("B", Some("A")),
        ("C", Some("A")),
        ("D", Some("B")),
        ("E", Some("B")),
    ])
    .unwrap()
}

pub fn complete_binary(height: u32) -> HierarchicalTree {
    let n = (1usize << height) - 1;
    let parents: Vec<_> = (0..n).map(|i| i.checked_sub(1).map(|p| p / 2)).collect();
    HierarchicalTree::from_height_ordered_parents(&parents).unwrap()
}

/// Random recursive trees under a random relabelling of the nodes.
pub fn random_tree(size: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Option<usize>>> {
    size.prop_flat_map(|n| {
        let picks: Vec<_> = (1..n).map(|i| 0..i).collect();
        (picks, Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
    .prop_map(|(picks, perm)| {
        let mut parents = vec![None; perm.len()];
        for (i, p) in picks.into_iter().enumerate() {
            parents[perm[i + 1]] = Some(perm[p]);
        }
        parents
    })
}
