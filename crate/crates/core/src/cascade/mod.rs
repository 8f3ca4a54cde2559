//! Auditing of observed labelled cascades against the optimal placement,
//! the greedy placement at the observed budget, and random placements.

pub mod divergence;
pub mod io;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::greedy_placement;
use crate::optimal::optimal_summary;
use crate::seed::{derive_seed, stream};
use crate::tree::{influence, DirectedTree, Labelling};

pub use divergence::{kl_divergence, BinSpec, Bins, DEFAULT_SMOOTHING};
pub use io::{load_cascades, read_csv_pair, read_jsonl, write_csv_pair, write_jsonl, CascadeFormat};

/// One observed cascade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeRecord {
    pub id: String,
    pub tree: DirectedTree,
    pub observed: Labelling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterThresholds {
    pub min_nodes: usize,
    pub min_coordinated: usize,
}

impl Default for FilterThresholds {
    fn default() -> Self {
        Self {
            min_nodes: 15,
            min_coordinated: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FilterOutcome {
    pub kept: Vec<CascadeRecord>,
    pub removed: usize,
}

pub fn filter_cascades(records: Vec<CascadeRecord>, thresholds: &FilterThresholds) -> FilterOutcome {
    let before = records.len();
    let kept: Vec<_> = records
        .into_iter()
        .filter(|r| {
            r.tree.node_count() >= thresholds.min_nodes
                && r.observed.count_ones() >= thresholds.min_coordinated
        })
        .collect();
    FilterOutcome {
        removed: before - kept.len(),
        kept,
    }
}

/// Row of the metrics table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeMetrics {
    pub id: String,
    pub n: usize,
    pub k_obs: usize,
    #[serde(rename = "I_obs")]
    pub influence_obs: usize,
    #[serde(rename = "I_star")]
    pub influence_star: usize,
    pub k_star: usize,
    #[serde(rename = "I_k")]
    pub influence_greedy: usize,
    pub rho: f64,
    /// Observed over greedy influence; empty when the greedy placement has
    /// no influence (e.g. every node labelled). May exceed 1.
    pub rho_k: Option<f64>,
}

/// Compares the observed labelling with the optimum and with the greedy
/// placement using the observed number of 1-nodes.
pub fn per_cascade_metrics<R: Rng + ?Sized>(record: &CascadeRecord, rng: &mut R) -> Result<CascadeMetrics> {
    let tree = &record.tree;
    let observed = influence(tree, &record.observed)?;
    let k_obs = record.observed.count_ones();
    let optimum = optimal_summary(tree);
    if optimum.influence == 0 {
        return Err(Error::InvalidParameter(format!(
            "cascade '{}' has zero optimal influence (single node)",
            record.id
        )));
    }
    let greedy = greedy_placement(tree, k_obs, rng)?;
    Ok(CascadeMetrics {
        id: record.id.clone(),
        n: tree.node_count(),
        k_obs,
        influence_obs: observed,
        influence_star: optimum.influence,
        k_star: optimum.k,
        influence_greedy: greedy.influence,
        rho: observed as f64 / optimum.influence as f64,
        rho_k: (greedy.influence > 0).then(|| observed as f64 / greedy.influence as f64),
    })
}

/// Mean influence of `replicates` uniformly random labellings with the
/// observed number of 1-nodes.
pub fn random_baseline<R: Rng + ?Sized>(
    record: &CascadeRecord,
    replicates: usize,
    rng: &mut R,
) -> Result<f64> {
    let k = record.observed.count_ones();
    if k == 0 {
        return Err(Error::InvalidParameter(format!(
            "cascade '{}' has no coordinated nodes",
            record.id
        )));
    }
    if replicates == 0 {
        return Err(Error::InvalidParameter("replicates must be at least 1".into()));
    }
    let n = record.tree.node_count();
    let mut total = 0usize;
    for _ in 0..replicates {
        let labels = Labelling::from_ones(n, index::sample(rng, n, k))?;
        total += influence(&record.tree, &labels)?;
    }
    Ok(total as f64 / replicates as f64)
}

/// Which per-cascade quantity the distributions are built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionKind {
    /// Raw influence values.
    #[default]
    Influence,
    /// Influence divided by the cascade's optimum.
    Rho,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionComparison {
    pub kl_real_vs_greedy: f64,
    pub kl_real_vs_random: f64,
    pub bin_spec: BinSpec,
    pub bins: Bins,
    pub smoothing: f64,
    pub log_base: String,
}

pub fn compare_distributions(
    real: &[f64],
    greedy: &[f64],
    random: &[f64],
    bins: BinSpec,
    smoothing: f64,
) -> Result<DistributionComparison> {
    if real.is_empty() || greedy.is_empty() || random.is_empty() {
        return Err(Error::InvalidParameter("distribution inputs must be nonempty".into()));
    }
    if !smoothing.is_finite() || smoothing <= 0.0 {
        return Err(Error::InvalidParameter(format!("smoothing must be positive, got {smoothing}")));
    }
    let layout = Bins::resolve(bins, &[real, greedy, random])?;
    let p = layout.histogram(real);
    Ok(DistributionComparison {
        kl_real_vs_greedy: kl_divergence(&p, &layout.histogram(greedy), smoothing)?,
        kl_real_vs_random: kl_divergence(&p, &layout.histogram(random), smoothing)?,
        bin_spec: bins,
        bins: layout,
        smoothing,
        log_base: "e".into(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub seed: u64,
    pub filter: FilterThresholds,
    pub random_replicates: usize,
    pub distribution: DistributionKind,
    pub bins: BinSpec,
    pub smoothing: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            filter: FilterThresholds::default(),
            random_replicates: 10,
            distribution: DistributionKind::Influence,
            bins: BinSpec::UnitWidth,
            smoothing: DEFAULT_SMOOTHING,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    /// Sorted by cascade id.
    pub metrics: Vec<CascadeMetrics>,
    /// Random-baseline mean influence, aligned with `metrics`.
    pub random_means: Vec<f64>,
    pub total: usize,
    pub removed: usize,
    pub comparison: DistributionComparison,
}

/// Key derived from the structure and labels only, so per-cascade random
/// streams do not depend on ids or file order.
fn content_key(record: &CascadeRecord) -> u64 {
    let words: Vec<u64> = record
        .tree
        .parents()
        .iter()
        .map(|p| p.map_or(0, |p| p as u64 + 1))
        .chain(record.observed.bits().iter().map(|&b| u64::from(b)))
        .collect();
    derive_seed(record.tree.node_count() as u64, &words)
}

/// Filters the dataset, computes metrics and baselines for every remaining
/// cascade, and compares the observed distribution with the greedy and
/// random ones.
pub fn analyze(records: Vec<CascadeRecord>, config: &AnalysisConfig) -> Result<AnalysisReport> {
    let total = records.len();
    let FilterOutcome { mut kept, removed } = filter_cascades(records, &config.filter);
    if kept.is_empty() {
        return Err(Error::InvalidParameter("no cascade passes the filter".into()));
    }
    kept.sort_by(|a, b| a.id.cmp(&b.id));

    let mut metrics = Vec::with_capacity(kept.len());
    let mut random_means = Vec::with_capacity(kept.len());
    for record in &kept {
        let key = content_key(record);
        let m = per_cascade_metrics(record, &mut stream(config.seed, &[key, 0]))?;
        let r = random_baseline(record, config.random_replicates, &mut stream(config.seed, &[key, 1]))?;
        metrics.push(m);
        random_means.push(r);
    }

    let scale = |m: &CascadeMetrics| match config.distribution {
        DistributionKind::Influence => 1.0,
        DistributionKind::Rho => 1.0 / m.influence_star as f64,
    };
    let real: Vec<f64> = metrics.iter().map(|m| m.influence_obs as f64 * scale(m)).collect();
    let greedy: Vec<f64> = metrics.iter().map(|m| m.influence_greedy as f64 * scale(m)).collect();
    let random: Vec<f64> = metrics.iter().zip(&random_means).map(|(m, r)| r * scale(m)).collect();
    let comparison = compare_distributions(&real, &greedy, &random, config.bins, config.smoothing)?;

    Ok(AnalysisReport {
        metrics,
        random_means,
        total,
        removed,
        comparison,
    })
}

pub fn metrics_to_csv<W: std::io::Write>(metrics: &[CascadeMetrics], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for m in metrics {
        w.serialize(m)?;
    }
    w.flush()?;
    Ok(())
}

pub fn metrics_from_csv<R: std::io::Read>(reader: R) -> Result<Vec<CascadeMetrics>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}
