//! Exact optimum with no budget constraint.
//!
//! [`tree_max_influence`] is the linear-time bottom-up recurrence over
//! `(MIyes, MIno)`. [`clear_one_nodes`] turns any optimal labelling into one
//! that reaches the same influence with as few 1-nodes as possible.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::tree::{self, DirectedTree, InfluenceReport, Labelling};

/// Per-node memo of the recurrence: best subtree influence with the node
/// labelled 1 (`mi_yes`) or 0 (`mi_no`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpAnnotation {
    pub mi_yes: Vec<usize>,
    pub mi_no: Vec<usize>,
}

impl DpAnnotation {
    pub fn best(&self, v: usize) -> usize {
        self.mi_yes[v].max(self.mi_no[v])
    }
}

#[derive(Debug, Clone)]
pub struct MaxInfluence {
    pub influence: usize,
    /// Labelling read off the recurrence; optimal but not necessarily of
    /// minimal cardinality.
    pub labels: Labelling,
    pub annotation: DpAnnotation,
}

/// Computes the maximum influence over all labellings in `O(n)`.
///
/// A node is labelled 1 iff `mi_yes > mi_no`, i.e. iff at least one child
/// attains its own maximum as a 0-node. A child whose two values tie counts
/// as a 0-child.
pub fn tree_max_influence(tree: &DirectedTree) -> MaxInfluence {
    let n = tree.node_count();
    let mut mi_yes = vec![0usize; n];
    let mut mi_no = vec![0usize; n];
    let mut labels = Labelling::zeros(n);

    for &v in tree.top_down().iter().rev() {
        let mut no = 0;
        let mut zero_children = 0;
        for &w in tree.children(v) {
            let best = mi_yes[w].max(mi_no[w]);
            no += best;
            if best == mi_no[w] {
                zero_children += 1;
            }
        }
        mi_no[v] = no;
        mi_yes[v] = no + zero_children;
        labels.set(v, mi_yes[v] > mi_no[v]);
    }

    let root = tree.root();
    MaxInfluence {
        influence: mi_yes[root].max(mi_no[root]),
        labels,
        annotation: DpAnnotation { mi_yes, mi_no },
    }
}

/// Returns an optimal labelling with the fewest 1-nodes.
///
/// `labels` must already reach the optimum; this is checked with one run of
/// the recurrence and rejected with [`Error::NotOptimal`] otherwise.
///
/// The two local rules of [`reduce_one_nodes`] do not always reach the
/// minimum, so the result is taken from a second pass of the recurrence that
/// ranks subtree solutions by influence first and by 1-node count second.
pub fn clear_one_nodes(tree: &DirectedTree, labels: &Labelling) -> Result<Labelling> {
    let optimum = tree_max_influence(tree).influence;
    let current = tree::influence(tree, labels)?;
    if current != optimum {
        return Err(Error::NotOptimal {
            influence: current,
            optimum,
        });
    }
    Ok(minimum_cardinality_optimum(tree))
}

/// Applies the root rule and the single-scan removal rule to an optimal
/// labelling. Influence is preserved and the number of 1-nodes never grows,
/// but the result can still use more 1-nodes than necessary.
pub fn reduce_one_nodes(tree: &DirectedTree, labels: &Labelling) -> Result<Labelling> {
    tree.check_labels(labels)?;
    let mut labels = labels.clone();
    let root = tree.root();

    let root_children = tree.children(root);
    if !labels.get(root)
        && !root_children.is_empty()
        && root_children.iter().all(|&w| {
            labels.get(w) && tree.out_degree(w) == 1 && tree::zero_children(tree, &labels, w) == 1
        })
    {
        labels.set(root, true);
        for &w in root_children {
            labels.set(w, false);
        }
    }

    for v in 0..tree.node_count() {
        if labels.get(v)
            && tree::zero_children(tree, &labels, v)
                == usize::from(tree::parent_is_one(tree, &labels, v))
        {
            labels.set(v, false);
        }
    }
    Ok(labels)
}

/// Optimum influence and one of its minimal-cardinality labellings.
pub fn optimal_summary(tree: &DirectedTree) -> InfluenceReport {
    let labels = minimum_cardinality_optimum(tree);
    InfluenceReport::new(tree, &labels).expect("labelling sized to tree")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Score {
    influence: usize,
    ones: usize,
}

impl Score {
    fn add(self, other: Score) -> Score {
        Score {
            influence: self.influence + other.influence,
            ones: self.ones + other.ones,
        }
    }

    /// More influence is better; fewer 1-nodes breaks ties.
    fn rank(&self, other: &Score) -> Ordering {
        self.influence
            .cmp(&other.influence)
            .then(other.ones.cmp(&self.ones))
    }
}

fn best_child_label(zero: Score, one: Score, parent_one: bool) -> bool {
    let zero = if parent_one {
        zero.add(Score {
            influence: 1,
            ones: 0,
        })
    } else {
        zero
    };
    one.rank(&zero) == Ordering::Greater
}

fn minimum_cardinality_optimum(tree: &DirectedTree) -> Labelling {
    let n = tree.node_count();
    let mut as_zero = vec![Score::default(); n];
    let mut as_one = vec![Score::default(); n];

    for &v in tree.top_down().iter().rev() {
        let mut zero = Score::default();
        let mut one = Score {
            influence: 0,
            ones: 1,
        };
        for &w in tree.children(v) {
            let (wz, wo) = (as_zero[w], as_one[w]);
            zero = zero.add(if wo.rank(&wz) == Ordering::Greater { wo } else { wz });
            one = one.add(if best_child_label(wz, wo, true) {
                wo
            } else {
                wz.add(Score {
                    influence: 1,
                    ones: 0,
                })
            });
        }
        as_zero[v] = zero;
        as_one[v] = one;
    }

    let mut labels = Labelling::zeros(n);
    let root = tree.root();
    labels.set(root, as_one[root].rank(&as_zero[root]) == Ordering::Greater);
    for &v in tree.top_down() {
        let parent_one = labels.get(v);
        for &w in tree.children(v) {
            labels.set(w, best_child_label(as_zero[w], as_one[w], parent_one));
        }
    }
    labels
}
