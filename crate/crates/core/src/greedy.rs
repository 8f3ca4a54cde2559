//! Fixed-budget placement: greedy seeding followed by label switches.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::tree::{self, DirectedTree, Labelling};

/// Exchange of labels between a 1-node and a 0-node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchMove {
    pub from_node: usize,
    pub to_node: usize,
    pub delta: i64,
}

impl SwitchMove {
    pub fn apply(&self, labels: &mut Labelling) {
        labels.set(self.from_node, false);
        labels.set(self.to_node, true);
    }
}

#[derive(Debug, Clone)]
pub struct GreedyOutcome {
    pub labels: Labelling,
    pub influence: usize,
}

/// Gain term of `switch(v, w)` for a 1-node `v` and a 0-node `w`.
///
/// Zero-children of `w` and the parent flags of `v` and `w` are read under
/// the labelling after the switch. The result satisfies
/// `influence(after) - influence(before) == delta - d0(v)` for every pair,
/// adjacent ones included: when `w` is the parent of `v` the edge `w -> v`
/// is counted once, not twice.
pub fn switch_delta(tree: &DirectedTree, labels: &Labelling, v: usize, w: usize) -> Result<i64> {
    tree.check_labels(labels)?;
    tree.check_node(v)?;
    tree.check_node(w)?;
    if !labels.get(v) {
        return Err(Error::InvalidMove {
            from: v,
            to: w,
            reason: "source is not a 1-node",
        });
    }
    if labels.get(w) {
        return Err(Error::InvalidMove {
            from: v,
            to: w,
            reason: "target is not a 0-node",
        });
    }
    Ok(delta_unchecked(tree, labels, v, w))
}

fn delta_unchecked(tree: &DirectedTree, labels: &Labelling, v: usize, w: usize) -> i64 {
    let w_is_parent_of_v = tree.parent(v) == Some(w);
    let mut zero_after = tree::zero_children(tree, labels, w) as i64;
    if w_is_parent_of_v {
        zero_after += 1;
    }
    let parent_w_after = tree.parent(w).is_some_and(|p| p != v && labels.get(p));
    let parent_v_after = tree.parent(v).is_some_and(|p| p == w || labels.get(p));
    zero_after - i64::from(parent_w_after) + i64::from(parent_v_after)
        - i64::from(w_is_parent_of_v)
}

/// Best switches out of `v`: the maximal delta and every target achieving it.
fn best_targets(tree: &DirectedTree, labels: &Labelling, v: usize) -> Option<(i64, Vec<usize>)> {
    let mut best: Option<(i64, Vec<usize>)> = None;
    for u in labels.zero_nodes() {
        let d = delta_unchecked(tree, labels, v, u);
        match &mut best {
            Some((b, set)) if d == *b => set.push(u),
            Some((b, _)) if d < *b => {}
            _ => best = Some((d, vec![u])),
        }
    }
    best
}

/// First improving switch in increasing id order of the source node.
fn find_improving(tree: &DirectedTree, labels: &Labelling) -> Option<(usize, i64, Vec<usize>)> {
    labels.one_nodes().find_map(|v| {
        let d0 = tree::zero_children(tree, labels, v) as i64;
        best_targets(tree, labels, v)
            .filter(|(best, _)| *best > d0)
            .map(|(best, set)| (v, best, set))
    })
}

/// True when no single switch increases the influence.
pub fn is_switch_optimal(tree: &DirectedTree, labels: &Labelling) -> Result<bool> {
    tree.check_labels(labels)?;
    Ok(find_improving(tree, labels).is_none())
}

/// Applies improving switches until none remains. Ties among the best
/// targets of a source are broken uniformly at random.
pub fn try_switch<R: Rng + ?Sized>(
    tree: &DirectedTree,
    labels: &Labelling,
    rng: &mut R,
) -> Result<Labelling> {
    Ok(try_switch_traced(tree, labels, rng)?.0)
}

/// Like [`try_switch`], also returning the accepted moves in order.
pub fn try_switch_traced<R: Rng + ?Sized>(
    tree: &DirectedTree,
    labels: &Labelling,
    rng: &mut R,
) -> Result<(Labelling, Vec<SwitchMove>)> {
    tree.check_labels(labels)?;
    let mut labels = labels.clone();
    let mut moves = Vec::new();
    while let Some((v, delta, targets)) = find_improving(tree, &labels) {
        let to = *targets.choose(rng).expect("argmax set is nonempty");
        let mv = SwitchMove {
            from_node: v,
            to_node: to,
            delta,
        };
        mv.apply(&mut labels);
        moves.push(mv);
    }
    Ok((labels, moves))
}

/// Places exactly `k` 1-nodes: each pick maximises the marginal gain
/// `d0(w) - p(w)` over unlabelled nodes (ties at random), then the result is
/// polished with [`try_switch`].
pub fn greedy_placement<R: Rng + ?Sized>(
    tree: &DirectedTree,
    k: usize,
    rng: &mut R,
) -> Result<GreedyOutcome> {
    let n = tree.node_count();
    if k > n {
        return Err(Error::InvalidBudget {
            budget: k,
            node_count: n,
        });
    }
    let mut labels = Labelling::zeros(n);
    let mut candidates = Vec::new();
    for _ in 0..k {
        candidates.clear();
        let mut best = i64::MIN;
        for w in labels.zero_nodes() {
            let gain = tree::zero_children(tree, &labels, w) as i64
                - i64::from(tree::parent_is_one(tree, &labels, w));
            if gain > best {
                best = gain;
                candidates.clear();
            }
            if gain == best {
                candidates.push(w);
            }
        }
        let pick = *candidates.choose(rng).expect("k <= n leaves a 0-node");
        labels.set(pick, true);
    }
    let labels = try_switch(tree, &labels, rng)?;
    let influence = tree::influence(tree, &labels)?;
    Ok(GreedyOutcome { labels, influence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::influence;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(b: &[u8]) -> Labelling {
        Labelling::from_bits(b.iter().map(|&x| x == 1).collect())
    }

    #[test]
    fn star_root_to_leaf() {
        let t = DirectedTree::star(5).unwrap();
        let l = Labelling::from_ones(5, [0]).unwrap();
        let d = switch_delta(&t, &l, 0, 1).unwrap();
        assert_eq!(d, 0);
        let mut after = l.clone();
        SwitchMove { from_node: 0, to_node: 1, delta: d }.apply(&mut after);
        let gain = influence(&t, &after).unwrap() as i64 - influence(&t, &l).unwrap() as i64;
        assert_eq!(gain, d - 4);
        assert_eq!(gain, -4);
    }

    #[test]
    fn path_non_adjacent_switch() {
        let t = DirectedTree::path(4).unwrap();
        let l = bits(&[1, 0, 0, 0]);
        assert_eq!(switch_delta(&t, &l, 0, 2).unwrap(), 1);
    }

    #[test]
    fn parent_child_switches() {
        let t = DirectedTree::path(3).unwrap();
        // w is the parent of v.
        let l = bits(&[0, 1, 0]);
        let d = switch_delta(&t, &l, 1, 0).unwrap();
        let after = bits(&[1, 0, 0]);
        assert_eq!(
            influence(&t, &after).unwrap() as i64 - influence(&t, &l).unwrap() as i64,
            d - 1
        );
        // v is the parent of w.
        let l = bits(&[1, 0, 0]);
        let d = switch_delta(&t, &l, 0, 1).unwrap();
        let after = bits(&[0, 1, 0]);
        assert_eq!(
            influence(&t, &after).unwrap() as i64 - influence(&t, &l).unwrap() as i64,
            d - 1
        );
    }

    #[test]
    fn invalid_moves() {
        let t = DirectedTree::path(3).unwrap();
        let l = bits(&[1, 0, 0]);
        assert!(matches!(switch_delta(&t, &l, 1, 2), Err(Error::InvalidMove { .. })));
        assert!(matches!(switch_delta(&t, &l, 0, 0), Err(Error::InvalidMove { .. })));
        assert!(matches!(switch_delta(&t, &l, 0, 7), Err(Error::InvalidNode { .. })));
    }

    #[test]
    fn switch_moves_leaf_label_to_star_root() {
        let t = DirectedTree::star(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = try_switch(&t, &Labelling::from_ones(5, [3]).unwrap(), &mut rng).unwrap();
        assert_eq!(out, Labelling::from_ones(5, [0]).unwrap());
        assert_eq!(influence(&t, &out).unwrap(), 4);
        let again = try_switch(&t, &out, &mut rng).unwrap();
        assert_eq!(again, out);
    }

    #[test]
    fn path_single_label_stays_at_one() {
        let t = DirectedTree::path(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let out = try_switch(&t, &bits(&[0, 1, 0, 0]), &mut rng).unwrap();
        assert_eq!(out.count_ones(), 1);
        assert_eq!(influence(&t, &out).unwrap(), 1);
    }

    #[test]
    fn placement_budget_cases() {
        let t = DirectedTree::star(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let zero = greedy_placement(&t, 0, &mut rng).unwrap();
        assert_eq!((zero.influence, zero.labels.count_ones()), (0, 0));
        let one = greedy_placement(&t, 1, &mut rng).unwrap();
        assert_eq!(one.labels, Labelling::from_ones(5, [0]).unwrap());
        assert_eq!(one.influence, 4);
        let all = greedy_placement(&t, 5, &mut rng).unwrap();
        assert_eq!((all.influence, all.labels.count_ones()), (0, 5));
        assert!(matches!(
            greedy_placement(&t, 6, &mut rng),
            Err(Error::InvalidBudget { budget: 6, node_count: 5 })
        ));
    }
}
