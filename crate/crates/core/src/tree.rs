//! Rooted directed trees, binary labellings and the influence functional.
//!
//! Node ids are dense integers `0..n`. The root is whichever node has no
//! parent; it need not be node 0. Children keep the order in which edges
//! were supplied.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, TreeError};

/// A rooted tree with every edge oriented from parent to child.
#[derive(Clone, PartialEq, Eq)]
pub struct DirectedTree {
    root: usize,
    parent: Vec<Option<usize>>,
    // CSR layout: children of `v` are `child_list[child_start[v]..child_start[v + 1]]`.
    child_start: Vec<usize>,
    child_list: Vec<usize>,
    // Breadth-first order from the root; every parent precedes its children.
    order: Vec<usize>,
}

impl DirectedTree {
    /// Builds a tree from `(parent, child)` pairs.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        if node_count == 0 {
            return Err(TreeError::Empty);
        }
        let mut parent: Vec<Option<usize>> = vec![None; node_count];
        for &(p, c) in edges {
            for node in [p, c] {
                if node >= node_count {
                    return Err(TreeError::NodeOutOfRange { node, node_count });
                }
            }
            if p == c {
                return Err(TreeError::SelfLoop(p));
            }
            if let Some(first) = parent[c] {
                return Err(TreeError::MultipleParents {
                    node: c,
                    first,
                    second: p,
                });
            }
            parent[c] = Some(p);
        }
        Self::assemble(parent, edges.iter().copied())
    }

    /// Builds a tree from a parent array; children are ordered by id.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self, TreeError> {
        if parents.is_empty() {
            return Err(TreeError::Empty);
        }
        let node_count = parents.len();
        for (c, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= node_count {
                    return Err(TreeError::NodeOutOfRange { node: p, node_count });
                }
                if p == c {
                    return Err(TreeError::SelfLoop(c));
                }
            }
        }
        let edges = parents
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (p, c)));
        Self::assemble(parents.to_vec(), edges)
    }

    fn assemble(
        parent: Vec<Option<usize>>,
        edges: impl Iterator<Item = (usize, usize)> + Clone,
    ) -> Result<Self, TreeError> {
        let n = parent.len();
        let mut roots = parent
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .map(|(v, _)| v);
        let root = roots.next().ok_or(TreeError::MissingRoot)?;
        if let Some(second) = roots.next() {
            return Err(TreeError::MultipleRoots {
                first: root,
                second,
            });
        }

        let mut child_start = vec![0usize; n + 1];
        for (p, _) in edges.clone() {
            child_start[p + 1] += 1;
        }
        for v in 0..n {
            child_start[v + 1] += child_start[v];
        }
        let mut fill = child_start.clone();
        let mut child_list = vec![0usize; n - 1];
        for (p, c) in edges {
            child_list[fill[p]] = c;
            fill[p] += 1;
        }

        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        let mut seen = vec![false; n];
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &child_list[child_start[v]..child_start[v + 1]] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if order.len() != n {
            let stray = seen.iter().position(|s| !s).unwrap_or(0);
            return Err(TreeError::Cycle(stray));
        }

        Ok(Self {
            root,
            parent,
            child_start,
            child_list,
            order,
        })
    }

    /// Star on `n` nodes: node 0 is the root, all others are its leaves.
    pub fn star(n: usize) -> Result<Self, TreeError> {
        let parents: Vec<_> = (0..n).map(|v| (v > 0).then_some(0)).collect();
        Self::from_parents(&parents)
    }

    /// Directed path `0 -> 1 -> ... -> n-1`.
    pub fn path(n: usize) -> Result<Self, TreeError> {
        let parents: Vec<_> = (0..n).map(|v| v.checked_sub(1)).collect();
        Self::from_parents(&parents)
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn edge_count(&self) -> usize {
        self.child_list.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.child_list[self.child_start[v]..self.child_start[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.child_start[v + 1] - self.child_start[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.out_degree(v) == 0
    }

    /// Nodes in breadth-first order from the root. Reversing it gives an
    /// order in which every child comes before its parent.
    pub fn top_down(&self) -> &[usize] {
        &self.order
    }

    /// All `(parent, child)` edges, grouped by parent id.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |p| self.children(p).iter().map(move |&c| (p, c)))
    }

    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.node_count()];
        for &v in &self.order {
            if let Some(p) = self.parent[v] {
                depth[v] = depth[p] + 1;
            }
        }
        depth
    }

    /// Length of the longest root-to-leaf path, in edges.
    pub fn height(&self) -> usize {
        self.depths().into_iter().max().unwrap_or(0)
    }

    pub fn check_node(&self, v: usize) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                node: v,
                node_count: self.node_count(),
            })
        }
    }

    pub fn check_labels(&self, labels: &Labelling) -> Result<()> {
        if labels.len() == self.node_count() {
            Ok(())
        } else {
            Err(Error::LabelLength {
                expected: self.node_count(),
                found: labels.len(),
            })
        }
    }
}

impl fmt::Debug for DirectedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectedTree")
            .field("root", &self.root)
            .field("parent", &self.parent)
            .finish()
    }
}

/// Binary mark per node; `true` marks a 1-node.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Labelling(Vec<bool>);

impl Labelling {
    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![true; n])
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Labelling of size `n` whose 1-nodes are exactly `ones`.
    pub fn from_ones(n: usize, ones: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = vec![false; n];
        for v in ones {
            *bits.get_mut(v).ok_or(Error::LabelOutOfRange {
                node: v,
                node_count: n,
            })? = true;
        }
        Ok(Self(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> bool {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, one: bool) {
        self.0[v] = one;
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Number of 1-nodes.
    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Ids of the 1-nodes in increasing order.
    pub fn one_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v)
    }

    pub fn zero_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| !b).map(|(v, _)| v)
    }
}

impl fmt::Debug for Labelling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Labelling(")?;
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

/// Summary of a labelling: its influence and its 1-nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfluenceReport {
    pub influence: usize,
    pub k: usize,
    pub one_nodes: Vec<usize>,
}

impl InfluenceReport {
    pub fn new(tree: &DirectedTree, labels: &Labelling) -> Result<Self> {
        Ok(Self {
            influence: influence(tree, labels)?,
            k: labels.count_ones(),
            one_nodes: labels.one_nodes().collect(),
        })
    }
}

/// Out-neighbourhood composition of a node under a labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeStats {
    pub zero_children: usize,
    pub one_children: usize,
    pub parent_is_one: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeMix {
    /// Edges from a 1-node to a 0-node.
    pub m10: usize,
    /// Edges from a 1-node to a 1-node.
    pub m11: usize,
}

/// Structural bounds on the optimum influence and its minimal cardinality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub influence_low: usize,
    pub influence_high: usize,
    pub ones_low: usize,
    pub ones_high: usize,
}

impl Bounds {
    pub fn for_size(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BoundsDomain(n));
        }
        Ok(Self {
            influence_low: n / 2,
            influence_high: n - 1,
            ones_low: 1,
            ones_high: n / 2,
        })
    }

    pub fn contains(&self, influence: usize, ones: usize) -> bool {
        (self.influence_low..=self.influence_high).contains(&influence)
            && (self.ones_low..=self.ones_high).contains(&ones)
    }
}

#[inline]
pub(crate) fn zero_children(tree: &DirectedTree, labels: &Labelling, v: usize) -> usize {
    tree.children(v).iter().filter(|&&w| !labels.get(w)).count()
}

#[inline]
pub(crate) fn parent_is_one(tree: &DirectedTree, labels: &Labelling, v: usize) -> bool {
    tree.parent(v).is_some_and(|p| labels.get(p))
}

/// Number of directed edges from a 1-node to a 0-node.
pub fn influence(tree: &DirectedTree, labels: &Labelling) -> Result<usize> {
    tree.check_labels(labels)?;
    Ok(labels
        .one_nodes()
        .map(|v| zero_children(tree, labels, v))
        .sum())
}

pub fn degree_stats(tree: &DirectedTree, labels: &Labelling, v: usize) -> Result<DegreeStats> {
    tree.check_labels(labels)?;
    tree.check_node(v)?;
    let zero = zero_children(tree, labels, v);
    Ok(DegreeStats {
        zero_children: zero,
        one_children: tree.out_degree(v) - zero,
        parent_is_one: parent_is_one(tree, labels, v),
    })
}

pub fn edge_mix_counts(tree: &DirectedTree, labels: &Labelling) -> Result<EdgeMix> {
    tree.check_labels(labels)?;
    let mut mix = EdgeMix { m10: 0, m11: 0 };
    for (p, c) in tree.edges() {
        if labels.get(p) {
            if labels.get(c) {
                mix.m11 += 1;
            } else {
                mix.m10 += 1;
            }
        }
    }
    Ok(mix)
}

pub fn bounds(tree: &DirectedTree) -> Result<Bounds> {
    Bounds::for_size(tree.node_count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_labels(bits: &[u8]) -> Labelling {
        Labelling::from_bits(bits.iter().map(|&b| b == 1).collect())
    }

    #[test]
    fn star_with_root_labelled() {
        let star = DirectedTree::star(5).unwrap();
        let labels = Labelling::from_ones(5, [0]).unwrap();
        assert_eq!(influence(&star, &labels).unwrap(), 4);
        assert_eq!(
            edge_mix_counts(&star, &labels).unwrap(),
            EdgeMix { m10: 4, m11: 0 }
        );
        let root = degree_stats(&star, &labels, 0).unwrap();
        assert_eq!((root.zero_children, root.one_children, root.parent_is_one), (4, 0, false));
        for leaf in 1..5 {
            let s = degree_stats(&star, &labels, leaf).unwrap();
            assert_eq!((s.zero_children, s.one_children, s.parent_is_one), (0, 0, true));
        }
    }

    #[test]
    fn alternating_path() {
        let path = DirectedTree::path(4).unwrap();
        let labels = path_labels(&[1, 0, 1, 0]);
        assert_eq!(influence(&path, &labels).unwrap(), 2);
        assert_eq!(
            edge_mix_counts(&path, &labels).unwrap(),
            EdgeMix { m10: 2, m11: 0 }
        );
        let s = degree_stats(&path, &labels, 1).unwrap();
        assert_eq!((s.zero_children, s.one_children, s.parent_is_one), (0, 1, true));
    }

    #[test]
    fn all_zero_and_all_one() {
        let path = DirectedTree::path(6).unwrap();
        assert_eq!(influence(&path, &Labelling::zeros(6)).unwrap(), 0);
        assert_eq!(
            edge_mix_counts(&path, &Labelling::ones(6)).unwrap(),
            EdgeMix { m10: 0, m11: 5 }
        );
    }

    #[test]
    fn single_node_tree() {
        let t = DirectedTree::from_parents(&[None]).unwrap();
        assert_eq!(influence(&t, &Labelling::ones(1)).unwrap(), 0);
        assert!(matches!(bounds(&t), Err(Error::BoundsDomain(1))));
    }

    #[test]
    fn bounds_formula() {
        let b = Bounds::for_size(2).unwrap();
        assert_eq!((b.influence_low, b.influence_high, b.ones_low, b.ones_high), (1, 1, 1, 1));
        let b = Bounds::for_size(25).unwrap();
        assert_eq!((b.influence_low, b.influence_high, b.ones_low, b.ones_high), (12, 24, 1, 12));
        let b = Bounds::for_size(9).unwrap();
        assert_eq!((b.influence_low, b.influence_high, b.ones_low, b.ones_high), (4, 8, 1, 4));
        assert!(Bounds::for_size(0).is_err());
    }

    #[test]
    fn size_mismatch_and_bad_node() {
        let t = DirectedTree::path(3).unwrap();
        assert!(matches!(
            influence(&t, &Labelling::zeros(4)),
            Err(Error::LabelLength { expected: 3, found: 4 })
        ));
        assert!(matches!(
            degree_stats(&t, &Labelling::zeros(3), 3),
            Err(Error::InvalidNode { node: 3, .. })
        ));
    }

    #[test]
    fn root_need_not_be_zero() {
        let t = DirectedTree::from_edges(3, &[(2, 0), (2, 1)]).unwrap();
        assert_eq!(t.root(), 2);
        assert_eq!(t.children(2), &[0, 1]);
        assert_eq!(t.height(), 1);
    }

    #[test]
    fn children_keep_edge_order() {
        let t = DirectedTree::from_edges(4, &[(0, 3), (0, 1), (0, 2)]).unwrap();
        assert_eq!(t.children(0), &[3, 1, 2]);
    }

    #[test]
    fn structural_errors() {
        assert_eq!(DirectedTree::from_edges(0, &[]), Err(TreeError::Empty));
        assert_eq!(
            DirectedTree::from_edges(3, &[(0, 1)]),
            Err(TreeError::MultipleRoots { first: 0, second: 2 })
        );
        assert_eq!(
            DirectedTree::from_edges(3, &[(0, 2), (1, 2)]),
            Err(TreeError::MultipleParents { node: 2, first: 0, second: 1 })
        );
        assert_eq!(
            DirectedTree::from_edges(2, &[(0, 1), (1, 0)]),
            Err(TreeError::MissingRoot)
        );
        assert_eq!(
            DirectedTree::from_edges(4, &[(0, 1), (2, 3), (3, 2)]),
            Err(TreeError::Cycle(2))
        );
        assert_eq!(
            DirectedTree::from_parents(&[None, Some(2), Some(1)]),
            Err(TreeError::Cycle(1))
        );
        assert_eq!(DirectedTree::from_edges(2, &[(1, 1)]), Err(TreeError::SelfLoop(1)));
        assert_eq!(
            DirectedTree::from_edges(2, &[(0, 5)]),
            Err(TreeError::NodeOutOfRange { node: 5, node_count: 2 })
        );
    }
}
