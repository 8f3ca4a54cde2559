//! Brute-force ground truth for small trees and the `(m10, m11)` phase
//! diagram over all labellings of a fixed cardinality.
//!
//! Nothing here calls into the dynamic programme; influence is recounted
//! from the parent array for every labelling visited.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{DirectedTree, EdgeMix, Labelling};

/// Guards against exponential blowup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationLimits {
    /// Largest tree accepted by [`enumerate_all`].
    pub max_nodes: usize,
    /// Largest number of labellings visited by [`enumerate_fixed_k`].
    pub max_labellings: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self {
            max_nodes: 20,
            max_labellings: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveOptimum {
    pub influence: usize,
    /// Fewest 1-nodes among labellings reaching `influence`.
    pub min_ones: usize,
    /// First labelling (in mask order) reaching `influence` with `min_ones`.
    pub labels: Labelling,
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn mix_of(parents: &[Option<usize>], is_one: impl Fn(usize) -> bool) -> EdgeMix {
    let mut mix = EdgeMix { m10: 0, m11: 0 };
    for (c, p) in parents.iter().enumerate() {
        if let Some(p) = *p {
            if is_one(p) {
                if is_one(c) {
                    mix.m11 += 1;
                } else {
                    mix.m10 += 1;
                }
            }
        }
    }
    mix
}

/// Maximum influence over all `2^n` labellings and the minimum number of
/// 1-nodes that reaches it.
pub fn enumerate_all(tree: &DirectedTree, limits: &EnumerationLimits) -> Result<ExhaustiveOptimum> {
    let n = tree.node_count();
    if n > limits.max_nodes || n >= 64 {
        return Err(Error::GuardExceeded {
            what: format!("exhaustive enumeration over {n} nodes"),
            limit: limits.max_nodes as u64,
        });
    }
    let parents = tree.parents();
    let mut best: Option<(usize, u32, u64)> = None;
    for mask in 0u64..(1u64 << n) {
        let m10 = mix_of(parents, |v| mask >> v & 1 == 1).m10;
        let ones = mask.count_ones();
        let better = match best {
            None => true,
            Some((bi, bk, _)) => m10 > bi || (m10 == bi && ones < bk),
        };
        if better {
            best = Some((m10, ones, mask));
        }
    }
    let (influence, min_ones, mask) = best.expect("at least one labelling");
    Ok(ExhaustiveOptimum {
        influence,
        min_ones: min_ones as usize,
        labels: Labelling::from_bits((0..n).map(|v| mask >> v & 1 == 1).collect()),
    })
}

/// Cardinality of the labellings a histogram was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cardinality {
    Fixed(usize),
    All,
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Fixed(k) => write!(f, "{k}"),
            Cardinality::All => f.write_str("all"),
        }
    }
}

/// Counts of labellings per `(m10, m11)` cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseHistogram {
    pub node_count: usize,
    pub cardinality: Cardinality,
    pub cells: BTreeMap<EdgeMix, u64>,
}

impl PhaseHistogram {
    pub fn total(&self) -> u64 {
        self.cells.values().sum()
    }

    pub fn max_m10(&self) -> Option<usize> {
        self.cells.keys().map(|c| c.m10).max()
    }

    pub fn count(&self, cell: EdgeMix) -> u64 {
        self.cells.get(&cell).copied().unwrap_or(0)
    }

    /// True when no populated cell has the same `m11` and a larger `m10`.
    pub fn on_upper_m10_boundary(&self, cell: EdgeMix) -> bool {
        self.count(cell) > 0
            && !self
                .cells
                .keys()
                .any(|c| c.m11 == cell.m11 && c.m10 > cell.m10)
    }

    /// Rows `m10,m11,count` under a header line, sorted by `(m10, m11)`.
    pub fn to_csv(&self) -> Result<String> {
        if self.cells.is_empty() {
            return Err(Error::InvalidParameter("histogram has no cells".into()));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["m10", "m11", "count"])?;
        for (cell, count) in &self.cells {
            w.serialize((cell.m10, cell.m11, count))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is ascii"))
    }

    /// Parses the output of [`PhaseHistogram::to_csv`]; `#` lines are skipped.
    pub fn from_csv<R: Read>(reader: R, node_count: usize, cardinality: Cardinality) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut cells = BTreeMap::new();
        for row in r.deserialize() {
            let (m10, m11, count): (usize, usize, u64) = row?;
            *cells.entry(EdgeMix { m10, m11 }).or_insert(0) += count;
        }
        Ok(Self {
            node_count,
            cardinality,
            cells,
        })
    }
}

#[derive(Debug, Clone)]
pub struct FixedKEnumeration {
    pub max_influence: usize,
    pub histogram: PhaseHistogram,
}

/// Visits every labelling with exactly `k` 1-nodes in lexicographic order of
/// their sorted 1-node ids.
pub fn enumerate_fixed_k(
    tree: &DirectedTree,
    k: usize,
    limits: &EnumerationLimits,
) -> Result<FixedKEnumeration> {
    let n = tree.node_count();
    if k > n {
        return Err(Error::InvalidBudget {
            budget: k,
            node_count: n,
        });
    }
    let total = binomial(n, k);
    if total > limits.max_labellings {
        return Err(Error::GuardExceeded {
            what: format!("C({n}, {k}) = {total} labellings"),
            limit: limits.max_labellings,
        });
    }

    let parents = tree.parents();
    let mut bits = vec![false; n];
    let mut combo: Vec<usize> = (0..k).collect();
    for &v in &combo {
        bits[v] = true;
    }
    let mut cells = BTreeMap::new();
    loop {
        let mix = mix_of(parents, |v| bits[v]);
        *cells.entry(mix).or_insert(0u64) += 1;

        // Advance to the next combination.
        let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
            break;
        };
        for &v in &combo[i..] {
            bits[v] = false;
        }
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
        for &v in &combo[i..] {
            bits[v] = true;
        }
    }

    let histogram = PhaseHistogram {
        node_count: n,
        cardinality: Cardinality::Fixed(k),
        cells,
    };
    Ok(FixedKEnumeration {
        max_influence: histogram.max_m10().unwrap_or(0),
        histogram,
    })
}

/// Phase histogram over all `2^n` labellings.
pub fn enumerate_phase_all(tree: &DirectedTree, limits: &EnumerationLimits) -> Result<PhaseHistogram> {
    let n = tree.node_count();
    if n > limits.max_nodes || n >= 64 {
        return Err(Error::GuardExceeded {
            what: format!("exhaustive enumeration over {n} nodes"),
            limit: limits.max_nodes as u64,
        });
    }
    let parents = tree.parents();
    let mut cells = BTreeMap::new();
    for mask in 0u64..(1u64 << n) {
        *cells
            .entry(mix_of(parents, |v| mask >> v & 1 == 1))
            .or_insert(0u64) += 1;
    }
    Ok(PhaseHistogram {
        node_count: n,
        cardinality: Cardinality::All,
        cells,
    })
}
