//! Independent brute-force references shared by the integration tests.
//! Nothing here calls into the library's algorithms.

#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use cascade_influence::DirectedTree;

/// Random recursive tree with shuffled ids, so the root is not always 0.
pub fn random_parents(n: usize, rng: &mut impl Rng) -> Vec<Option<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut parents = vec![None; n];
    for i in 1..n {
        parents[perm[i]] = Some(perm[rng.random_range(0..i)]);
    }
    parents
}

pub fn test_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn tree_of(parents: &[Option<usize>]) -> DirectedTree {
    DirectedTree::from_parents(parents).expect("valid tree")
}

/// Edges `u -> v` with `u` in `mask` and `v` not.
pub fn brute_influence(parents: &[Option<usize>], mask: u64) -> usize {
    parents
        .iter()
        .enumerate()
        .filter(|&(v, p)| matches!(p, Some(u) if mask >> u & 1 == 1 && mask >> v & 1 == 0))
        .count()
}

pub fn mask_of(bits: &[bool]) -> u64 {
    bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| 1u64 << i).sum()
}

/// `(max influence, fewest 1-nodes attaining it)` over all labellings.
pub fn brute_best(parents: &[Option<usize>]) -> (usize, usize) {
    let n = parents.len();
    let mut best = (0usize, 0usize);
    for mask in 0..1u64 << n {
        let i = brute_influence(parents, mask);
        let k = mask.count_ones() as usize;
        if i > best.0 || (i == best.0 && k < best.1) {
            best = (i, k);
        }
    }
    best
}

/// Max influence over labellings with exactly `k` 1-nodes.
pub fn brute_best_k(parents: &[Option<usize>], k: usize) -> usize {
    (0..1u64 << parents.len())
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| brute_influence(parents, m))
        .max()
        .unwrap_or(0)
}

/// Proptest strategy: random rooted tree on `sizes` nodes with shuffled ids.
pub fn arb_parents(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Option<usize>>> {
    sizes
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<u32>(), n), Just((0..n).collect::<Vec<_>>()).prop_shuffle()))
        .prop_map(|(n, picks, perm)| {
            let mut parents = vec![None; n];
            for i in 1..n {
                parents[perm[i]] = Some(perm[picks[i] as usize % i]);
            }
            parents
        })
}

pub fn arb_tree_and_labels(
    sizes: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (Vec<Option<usize>>, Vec<bool>)> {
    arb_parents(sizes).prop_flat_map(|p| {
        let n = p.len();
        (Just(p), proptest::collection::vec(any::<bool>(), n))
    })
}

/// Cascades whose observed labels are uniform random placements of
/// roughly a tenth of the nodes.
pub fn synthetic_cascades(count: usize, seed: u64) -> Vec<cascade_influence::cascade::CascadeRecord> {
    let mut rng = test_rng(seed);
    (0..count)
        .map(|i| {
            let n = rng.random_range(15..=80);
            let parents = random_parents(n, &mut rng);
            let k = (n / 10).max(1);
            let ones = rand::seq::index::sample(&mut rng, n, k).into_vec();
            cascade_influence::cascade::CascadeRecord {
                id: format!("c{i:04}"),
                tree: tree_of(&parents),
                observed: cascade_influence::Labelling::from_ones(n, ones).unwrap(),
            }
        })
        .collect()
}
