//! Hierarchical trees numbered in descending order of height.
//!
//! Every tree produced here satisfies, for 0-based indices `i < j`:
//!
//! * `height(i) >= height(j)`,
//! * the parent of a non-root node has a smaller index than the node,
//! * the root is node `0`, the non-leaf nodes are `0..n₁` and the leaves are `n₁..n`.
//!
//! Nodes of equal height are ordered by ascending label (byte-wise), which
//! makes the numbering a deterministic function of the parent links.

use std::borrow::Cow;
use std::cmp::Reverse;
use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mapping::MappingMatrix;

pub(crate) const NO_PARENT: usize = usize::MAX;

#[derive(Clone, Debug)]
enum Labels {
    /// Label of node `i` is `names[i]`. Subtrees share the prefix.
    Named(Arc<[String]>),
    /// Label of node `i` is `i + 1`, zero padded to `width` digits so that
    /// byte-wise and numeric order agree.
    Sequential { width: usize },
}

#[derive(Clone, Debug)]
pub struct HierarchicalTree {
    parent: Vec<usize>,
    height: Vec<u32>,
    /// `order_sizes[k]` is `n_k`, the node count of the k-order subtree.
    order_sizes: Vec<usize>,
    child_start: Vec<usize>,
    child_list: Vec<usize>,
    labels: Labels,
    /// Position of each node in the caller's original numbering.
    input_position: Vec<usize>,
}

/// Equal when parent links and labels agree, however the labels are stored
/// and in whatever order the nodes were originally supplied.
impl PartialEq for HierarchicalTree {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.labels().eq(other.labels())
    }
}

impl HierarchicalTree {
    /// Builds a tree from label-indexed parent links (`None` marks the root).
    ///
    /// The links may come in any order. The input order is kept as the
    /// original numbering, see [`HierarchicalTree::input_order`].
    pub fn from_parent_links<I, S>(links: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Option<S>)>,
        S: Into<String>,
    {
        let pairs: Vec<(String, Option<String>)> = links
            .into_iter()
            .map(|(node, parent)| (node.into(), parent.map(Into::into)))
            .collect();
        let mut position = HashMap::with_capacity(pairs.len());
        for (i, (label, _)) in pairs.iter().enumerate() {
            if position.insert(label.as_str(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        let parents = pairs
            .iter()
            .map(|(label, parent)| match parent {
                None => Ok(None),
                Some(p) => position.get(p.as_str()).copied().map(Some).ok_or_else(|| {
                    Error::OrphanNode {
                        node: label.clone(),
                        parent: p.clone(),
                    }
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        drop(position);
        let labels = pairs.into_iter().map(|(label, _)| label).collect();
        Self::from_positions(parents, labels)
    }

    /// Builds a tree from parent positions in an arbitrary numbering.
    /// Node `i` gets the label `i + 1`.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self> {
        let n = parents.len();
        if let Some((i, p)) = parents
            .iter()
            .enumerate()
            .find_map(|(i, p)| p.filter(|&p| p >= n).map(|p| (i, p)))
        {
            return Err(Error::OrphanNode {
                node: (i + 1).to_string(),
                parent: (p + 1).to_string(),
            });
        }
        let labels = (1..=n).map(|i| i.to_string()).collect();
        Self::from_positions(parents.to_vec(), labels)
    }

    /// Builds a tree whose numbering already satisfies descending order of
    /// height, e.g. a level-by-level layout produced by a generator. Node `i`
    /// gets the label `i + 1` (zero padded). This skips sorting entirely.
    pub fn from_height_ordered_parents(parents: &[Option<usize>]) -> Result<Self> {
        let n = parents.len();
        if n == 0 {
            return Err(Error::EmptyTree);
        }
        let mut parent = Vec::with_capacity(n);
        for (i, p) in parents.iter().enumerate() {
            match (i, *p) {
                (0, None) => parent.push(NO_PARENT),
                (0, Some(_)) => return Err(Error::NotHeightOrdered(0)),
                (_, None) => {
                    return Err(Error::MultipleRoots {
                        first: "1".into(),
                        second: (i + 1).to_string(),
                    })
                }
                (_, Some(p)) if p >= i => return Err(Error::NotHeightOrdered(i)),
                (_, Some(p)) => parent.push(p),
            }
        }
        let mut height = vec![1u32; n];
        for i in (1..n).rev() {
            let p = parent[i];
            height[p] = height[p].max(height[i] + 1);
        }
        if let Some(i) = (1..n).find(|&i| height[i - 1] < height[i]) {
            return Err(Error::NotHeightOrdered(i));
        }
        let width = digits(n);
        Ok(Self::assemble(
            parent,
            height,
            Labels::Sequential { width },
            (0..n).collect(),
        ))
    }

    fn from_positions(parents: Vec<Option<usize>>, labels: Vec<String>) -> Result<Self> {
        let n = parents.len();
        if n == 0 {
            return Err(Error::EmptyTree);
        }
        let mut root: Option<usize> = None;
        for (i, p) in parents.iter().enumerate() {
            if p.is_none() {
                if let Some(first) = root {
                    return Err(Error::MultipleRoots {
                        first: labels[first].clone(),
                        second: labels[i].clone(),
                    });
                }
                root = Some(i);
            }
        }
        // Without a root every node sits on a cycle of parent links.
        let root = root.ok_or_else(|| Error::CycleDetected(labels[0].clone()))?;

        let (start, list) = children_csr(n, parents.iter().map(|p| p.unwrap_or(NO_PARENT)));
        let mut bfs = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        let mut reached = vec![false; n];
        reached[root] = true;
        while let Some(v) = queue.pop_front() {
            bfs.push(v);
            for &c in &list[start[v]..start[v + 1]] {
                if !reached[c] {
                    reached[c] = true;
                    queue.push_back(c);
                }
            }
        }
        if bfs.len() < n {
            let stuck = reached.iter().position(|r| !r).unwrap_or(0);
            return Err(Error::CycleDetected(labels[stuck].clone()));
        }

        let mut height = vec![1u32; n];
        for &v in bfs.iter().rev() {
            if let Some(p) = parents[v] {
                height[p] = height[p].max(height[v] + 1);
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by(|&a, &b| {
            (Reverse(height[a]), labels[a].as_str()).cmp(&(Reverse(height[b]), labels[b].as_str()))
        });
        let mut rank = vec![0usize; n];
        for (i, &pos) in order.iter().enumerate() {
            rank[pos] = i;
        }

        let parent = order
            .iter()
            .map(|&pos| parents[pos].map_or(NO_PARENT, |p| rank[p]))
            .collect();
        let sorted_height = order.iter().map(|&pos| height[pos]).collect();
        let mut labels: Vec<Option<String>> = labels.into_iter().map(Some).collect();
        let sorted_labels: Vec<String> = order
            .iter()
            .map(|&pos| labels[pos].take().unwrap_or_default())
            .collect();
        Ok(Self::assemble(
            parent,
            sorted_height,
            Labels::Named(sorted_labels.into()),
            order,
        ))
    }

    fn assemble(
        parent: Vec<usize>,
        height: Vec<u32>,
        labels: Labels,
        input_position: Vec<usize>,
    ) -> Self {
        let n = parent.len();
        let h = height[0] as usize;
        let mut per_height = vec![0usize; h + 1];
        for &hi in &height {
            per_height[hi as usize] += 1;
        }
        // n_k = #{i : h_i > k}
        let mut order_sizes = vec![0usize; h];
        let mut acc = 0;
        for k in (0..h).rev() {
            acc += per_height[k + 1];
            order_sizes[k] = acc;
        }
        debug_assert_eq!(order_sizes[0], n);
        let (child_start, child_list) = children_csr(n, parent.iter().copied());
        Self {
            parent,
            height,
            order_sizes,
            child_start,
            child_list,
            labels,
            input_position,
        }
    }

    /// Number of nodes `n`.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    /// Always false: trees have at least the root.
    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Height of the tree, i.e. the height of the root.
    pub fn height(&self) -> usize {
        self.height[0] as usize
    }

    pub fn node_height(&self, i: usize) -> usize {
        self.height[i] as usize
    }

    pub fn heights(&self) -> &[u32] {
        &self.height
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        match self.parent[i] {
            NO_PARENT => None,
            p => Some(p),
        }
    }

    /// Raw parent array; the root entry holds `NO_PARENT`.
    pub(crate) fn parent_slice(&self) -> &[usize] {
        &self.parent
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.child_list[self.child_start[i]..self.child_start[i + 1]]
    }

    pub fn child_count(&self, i: usize) -> usize {
        self.child_start[i + 1] - self.child_start[i]
    }

    /// `n_k`, the number of nodes with height greater than `k`.
    pub fn order_size(&self, k: usize) -> usize {
        self.order_sizes.get(k).copied().unwrap_or(0)
    }

    /// `[n_0, n_1, …, n_{h-1}]`.
    pub fn order_sizes(&self) -> &[usize] {
        &self.order_sizes
    }

    /// `n₁`, the number of non-leaf nodes.
    pub fn internal_count(&self) -> usize {
        self.order_size(1)
    }

    /// `m`, the number of leaves.
    pub fn leaf_count(&self) -> usize {
        self.len() - self.internal_count()
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.height[i] == 1
    }

    /// Leaf indices in ascending order (`n₁..n`).
    pub fn leaves(&self) -> std::ops::Range<usize> {
        self.internal_count()..self.len()
    }

    /// `H_ℋ`: maps unit-count index `i` to its leaf node.
    pub fn leaf_map(&self) -> MappingMatrix {
        MappingMatrix::new_unchecked(self.leaves().collect(), self.len())
    }

    /// Maps each original position to its node index, so `gather` turns a
    /// node-ordered vector back into the caller's original order.
    pub fn input_order(&self) -> MappingMatrix {
        let mut map = vec![0; self.len()];
        for (i, &pos) in self.input_position.iter().enumerate() {
            map[pos] = i;
        }
        MappingMatrix::new_unchecked(map, self.len())
    }

    /// Position of node `i` in the original numbering.
    pub fn input_position(&self, i: usize) -> usize {
        self.input_position[i]
    }

    pub fn label(&self, i: usize) -> Cow<'_, str> {
        match &self.labels {
            Labels::Named(names) => Cow::Borrowed(names[i].as_str()),
            Labels::Sequential { width } => Cow::Owned(format!("{:0width$}", i + 1)),
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = Cow<'_, str>> + '_ {
        (0..self.len()).map(|i| self.label(i))
    }

    /// Label → node index lookup table.
    pub fn label_index(&self) -> HashMap<String, usize> {
        self.labels()
            .enumerate()
            .map(|(i, l)| (l.into_owned(), i))
            .collect()
    }

    /// Whether `a` is a proper ancestor of `d`.
    pub fn is_ancestor(&self, a: usize, d: usize) -> bool {
        let mut cur = d;
        while let Some(p) = self.parent(cur) {
            if p == a {
                return true;
            }
            if p < a {
                return false;
            }
            cur = p;
        }
        false
    }

    /// The induced subtree on `{i : h_i > k}`, which is the prefix `0..n_k`.
    pub fn k_order_subtree(&self, k: usize) -> Result<Self> {
        let h = self.height();
        if k >= h {
            return Err(Error::KTooLarge { k, height: h });
        }
        if k == 0 {
            return Ok(self.clone());
        }
        let nk = self.order_sizes[k];
        let parent = self.parent[..nk].to_vec();
        let height = self.height[..nk].iter().map(|&x| x - k as u32).collect();
        // Renumber the kept original positions densely, preserving their order.
        let mut kept = vec![false; self.len()];
        for &pos in &self.input_position[..nk] {
            kept[pos] = true;
        }
        let mut rank = vec![0usize; self.len()];
        let mut next = 0;
        for (pos, &keep) in kept.iter().enumerate() {
            rank[pos] = next;
            next += keep as usize;
        }
        let input_position = self.input_position[..nk].iter().map(|&p| rank[p]).collect();
        Ok(Self::assemble(
            parent,
            height,
            self.labels.clone(),
            input_position,
        ))
    }
}

fn children_csr(n: usize, parents: impl Iterator<Item = usize> + Clone) -> (Vec<usize>, Vec<usize>) {
    let mut start = vec![0usize; n + 1];
    for p in parents.clone() {
        if p != NO_PARENT {
            start[p + 1] += 1;
        }
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut list = vec![0usize; start[n]];
    for (i, p) in parents.enumerate() {
        if p != NO_PARENT {
            list[fill[p]] = i;
            fill[p] += 1;
        }
    }
    (start, list)
}

fn digits(mut n: usize) -> usize {
    let mut d = 1;
    while n >= 10 {
        n /= 10;
        d += 1;
    }
    d
}
