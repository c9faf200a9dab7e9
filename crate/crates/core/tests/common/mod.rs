#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use genmat::datagen::{random_fanout_tree, FanoutDistribution};
use genmat::HierarchicalTree;

/// Parent links where node `i` picks its parent among the previous nodes
/// with the given rule, then shuffled so the input is not height ordered.
fn shuffled(parents: Vec<Option<usize>>, rng: &mut ChaCha8Rng) -> HierarchicalTree {
    let n = parents.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut relabelled = vec![None; n];
    for (i, p) in parents.into_iter().enumerate() {
        relabelled[perm[i]] = p.map(|p| perm[p]);
    }
    HierarchicalTree::from_parents(&relabelled).unwrap()
}

/// Uniform random recursive tree.
pub fn recursive_tree(n: usize, rng: &mut ChaCha8Rng) -> HierarchicalTree {
    let parents = (0..n).map(|i| (i > 0).then(|| rng.random_range(0..i))).collect();
    shuffled(parents, rng)
}

/// Deep tree: parents come from a short window of recent nodes.
pub fn deep_tree(n: usize, rng: &mut ChaCha8Rng) -> HierarchicalTree {
    let parents = (0..n)
        .map(|i| (i > 0).then(|| rng.random_range(i.saturating_sub(3)..i)))
        .collect();
    shuffled(parents, rng)
}

/// Bushy tree: a few hubs take most children.
pub fn bushy_tree(n: usize, rng: &mut ChaCha8Rng) -> HierarchicalTree {
    let parents = (0..n)
        .map(|i| (i > 0).then(|| rng.random_range(0..i.min(1 + i / 8).max(1))))
        .collect();
    shuffled(parents, rng)
}

/// Bottom-up tree with fan-outs 2 to 5 and at most `max_nodes` nodes.
pub fn fanout_tree(max_nodes: usize, rng: &mut ChaCha8Rng) -> HierarchicalTree {
    loop {
        let leaves = rng.random_range(1..=(max_nodes * 2 / 3).max(1));
        let g = random_fanout_tree(leaves, &FanoutDistribution::default(), 1.0, rng.random()).unwrap();
        if g.tree.len() <= max_nodes {
            return g.tree;
        }
    }
}

/// A mix of the shapes above with sizes in `1..=max_nodes`.
pub fn mixed_tree(max_nodes: usize, rng: &mut ChaCha8Rng) -> HierarchicalTree {
    let n = rng.random_range(1..=max_nodes);
    match rng.random_range(0..4) {
        0 => recursive_tree(n, rng),
        1 => deep_tree(n, rng),
        2 => bushy_tree(n, rng),
        _ => fanout_tree(max_nodes, rng),
    }
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
