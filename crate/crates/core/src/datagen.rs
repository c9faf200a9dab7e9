//! Synthetic trees with Poisson leaf counts.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Poisson;

use crate::error::{Error, Result};
use crate::release::seeded_rng;
use crate::tree::HierarchicalTree;

const STRUCTURE_STREAM: u64 = 1;
const COUNT_STREAM: u64 = 2;

pub const DEFAULT_LAMBDA: f64 = 100.0;

/// A generated tree and one count per leaf, in leaf order.
#[derive(Clone, Debug)]
pub struct GeneratedTree {
    pub tree: HierarchicalTree,
    pub counts: Vec<u64>,
}

impl GeneratedTree {
    pub fn counts_f64(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64).collect()
    }
}

/// Complete `fanout`-ary tree of height `height` with Poisson(`lambda`) leaf
/// counts. Nodes are numbered level by level, so leaf `j` is the `j`-th leaf
/// from the left.
pub fn complete_tree(height: u32, fanout: usize, lambda: f64, seed: u64) -> Result<GeneratedTree> {
    if height == 0 {
        return Err(Error::InvalidParam("height must be at least 1".into()));
    }
    if fanout < 2 {
        return Err(Error::InvalidParam("fan-out must be at least 2".into()));
    }
    let n = complete_tree_size(height, fanout)
        .ok_or_else(|| Error::InvalidParam(format!("complete {fanout}-ary tree of height {height} is too large")))?;
    let parents: Vec<Option<usize>> = (0..n)
        .map(|i| i.checked_sub(1).map(|j| j / fanout))
        .collect();
    let tree = HierarchicalTree::from_height_ordered_parents(&parents)?;
    let counts = poisson_counts(tree.leaf_count(), lambda, seed)?;
    Ok(GeneratedTree { tree, counts })
}

/// `(k^h − 1) / (k − 1)`, or `None` on overflow.
pub fn complete_tree_size(height: u32, fanout: usize) -> Option<usize> {
    let mut n: usize = 0;
    let mut level: usize = 1;
    for _ in 0..height {
        n = n.checked_add(level)?;
        level = level.checked_mul(fanout)?;
    }
    Some(n)
}

/// Fan-outs and their probabilities for [`random_fanout_tree`].
#[derive(Clone, Debug, PartialEq)]
pub struct FanoutDistribution {
    pub fanouts: Vec<usize>,
    pub weights: Vec<f64>,
}

impl Default for FanoutDistribution {
    /// 2, 3, 4, 5 with probabilities 0.4, 0.3, 0.2, 0.1.
    fn default() -> Self {
        Self {
            fanouts: vec![2, 3, 4, 5],
            weights: vec![0.4, 0.3, 0.2, 0.1],
        }
    }
}

impl FanoutDistribution {
    pub fn new(fanouts: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        let d = Self { fanouts, weights };
        d.validate()?;
        Ok(d)
    }

    pub fn mean(&self) -> f64 {
        self.fanouts.iter().zip(&self.weights).map(|(&f, w)| f as f64 * w).sum()
    }

    fn validate(&self) -> Result<()> {
        if self.fanouts.is_empty() || self.fanouts.len() != self.weights.len() {
            return Err(Error::InvalidParam("need one weight per fan-out".into()));
        }
        if self.fanouts.iter().any(|&f| f < 2) {
            return Err(Error::InvalidParam("fan-outs must be at least 2".into()));
        }
        if self.weights.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::InvalidParam("proportions must be non-negative".into()));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParam(format!("proportions sum to {total}, not 1")));
        }
        Ok(())
    }
}

/// Tree over `leaves` leaves built bottom-up: each level is cut into
/// consecutive groups whose sizes are drawn from `fanouts`, and each group
/// gets a new parent, until one node remains. If the last group of a level
/// would hold a single node, that node joins the previous group instead.
pub fn random_fanout_tree(
    leaves: usize,
    fanouts: &FanoutDistribution,
    lambda: f64,
    seed: u64,
) -> Result<GeneratedTree> {
    if leaves == 0 {
        return Err(Error::InvalidParam("need at least one leaf".into()));
    }
    fanouts.validate()?;
    let pick = WeightedIndex::new(&fanouts.weights).map_err(|e| Error::InvalidParam(e.to_string()))?;
    let mut rng = seeded_rng(seed, STRUCTURE_STREAM);

    // levels[0] holds the group sizes above the leaves, and so on upward
    let mut levels: Vec<Vec<usize>> = Vec::new();
    let mut width = leaves;
    while width > 1 {
        let groups = cut_level(width, |r| fanouts.fanouts[pick.sample(r)], &mut rng);
        width = groups.len();
        levels.push(groups);
    }

    // Number root first, level by level downward. Every node of a level has
    // the same height, so this is already in descending order of height.
    let n = leaves + levels.iter().map(Vec::len).sum::<usize>();
    let mut parents = Vec::with_capacity(n);
    parents.push(None);
    let mut level_start = 0;
    for groups in levels.iter().rev() {
        for (g, &size) in groups.iter().enumerate() {
            parents.extend(std::iter::repeat_n(Some(level_start + g), size));
        }
        level_start += groups.len();
    }
    debug_assert_eq!(parents.len(), n);
    let tree = HierarchicalTree::from_height_ordered_parents(&parents)?;
    let counts = poisson_counts(leaves, lambda, seed)?;
    Ok(GeneratedTree { tree, counts })
}

fn cut_level<R: Rng, F: FnMut(&mut R) -> usize>(width: usize, mut draw: F, rng: &mut R) -> Vec<usize> {
    let mut groups = Vec::new();
    let mut left = width;
    while left > 0 {
        let size = draw(rng).min(left);
        if size == 1 {
            if let Some(last) = groups.last_mut() {
                *last += 1;
                break;
            }
        }
        groups.push(size);
        left -= size;
    }
    groups
}

fn poisson_counts(m: usize, lambda: f64, seed: u64) -> Result<Vec<u64>> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParam(format!("lambda must be positive, got {lambda}")));
    }
    let dist = Poisson::new(lambda).map_err(|e| Error::InvalidParam(e.to_string()))?;
    let mut rng = seeded_rng(seed, COUNT_STREAM);
    Ok((0..m).map(|_| dist.sample(&mut rng) as u64).collect())
}
