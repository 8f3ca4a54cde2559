//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 enumeration guard
//! exceeded. Every numeric flag can also be set through an environment
//! variable prefixed with `CASCADE_INFLUENCE_`.

use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cascade::{self, AnalysisConfig, BinSpec, CascadeFormat, DistributionKind, FilterThresholds};
use crate::error::{Error, Result};
use crate::greedy::greedy_placement;
use crate::optimal::optimal_summary;
use crate::oracle::{enumerate_fixed_k, EnumerationLimits};
use crate::seed::{derive_seed, rng_from_seed};
use crate::synth::{self, PathModel, RecursiveTree, StarModel, TreeModel};
use crate::tree::{DirectedTree, Labelling};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cascade-influence", version, about = "Optimal, greedy and observed influence in labelled directed trees")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Master seed; echoed into every output artifact.
    #[arg(long, global = true, default_value_t = 0, env = "CASCADE_INFLUENCE_SEED")]
    pub seed: u64,
    /// Output format (defaults: json for optimal/greedy, csv for phase).
    #[arg(long, global = true, value_enum, env = "CASCADE_INFLUENCE_FORMAT")]
    pub format: Option<Format>,
    /// Largest number of labellings an enumeration may visit.
    #[arg(long, global = true, default_value_t = 10_000_000, env = "CASCADE_INFLUENCE_MAX_ENUM")]
    pub max_enum: u64,
    /// Primary output file (stdout when absent).
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    /// Secondary JSON output of `simulate` and `analyze` (stderr when absent).
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal influence I* and a minimal optimal labelling.
    Optimal(TreeArgs),
    /// Greedy placement of exactly k 1-nodes.
    Greedy {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(short)]
        k: usize,
    },
    /// Growth-rate experiments on random trees.
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// (m10, m11) histogram over all labellings with k 1-nodes.
    Phase {
        #[command(flatten)]
        tree: TreeArgs,
        /// Cardinality; defaults to the tree's minimal optimal k*.
        #[arg(short)]
        k: Option<usize>,
    },
    /// Audit a dataset of observed labelled cascades.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    /// Generator spec (`star:N`, `path:N`, `random:N[:SEED]`,
    /// `height:N:H[:SEED]`) or a tree file (edge list text, or `.jsonl`
    /// cascades).
    #[arg(long, short)]
    pub tree: String,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCmd {
    /// Mean I* and k* against the number of nodes, with linear fits.
    VsN {
        #[arg(long, default_value_t = 5)]
        n_min: usize,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        #[arg(long, default_value_t = 100)]
        replicates: usize,
        #[arg(long, value_enum, default_value_t = Model::Recursive)]
        model: Model,
    },
    /// Mean I* and k* against the tree height at fixed size.
    VsHeight {
        #[arg(short, long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        h_min: usize,
        /// Defaults to n - 1.
        #[arg(long)]
        h_max: Option<usize>,
        #[arg(long, default_value_t = 100)]
        replicates: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Recursive,
    Star,
    Path,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Cascades file (JSON lines, or the edges CSV when --labels is given).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Labels CSV (`cascade_id,node`) for the CSV-pair format.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long, default_value_t = 15, env = "CASCADE_INFLUENCE_MIN_NODES")]
    pub min_nodes: usize,
    #[arg(long, default_value_t = 1, env = "CASCADE_INFLUENCE_MIN_COORDINATED")]
    pub min_coordinated: usize,
    /// `unit` for unit-width integer bins, or a bin count.
    #[arg(long, default_value = "unit", env = "CASCADE_INFLUENCE_BINS")]
    pub bins: String,
    #[arg(long, default_value_t = cascade::DEFAULT_SMOOTHING, env = "CASCADE_INFLUENCE_SMOOTHING")]
    pub smoothing: f64,
    #[arg(long, value_enum, default_value_t = Distribution::Influence)]
    pub distribution: Distribution,
    /// Random labellings per cascade for the baseline.
    #[arg(long, default_value_t = 10)]
    pub replicates: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Distribution {
    Influence,
    Rho,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::GuardExceeded { .. } => EXIT_GUARD,
        Error::Record { source, .. } => exit_code(source),
        _ => EXIT_INPUT,
    }
}

struct NamedTree {
    id: String,
    tree: DirectedTree,
}

fn parse_generator(spec: &str, seed: u64) -> Option<Result<DirectedTree>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let kind = *parts.first()?;
    if !matches!(kind, "star" | "path" | "random" | "height") || parts.len() < 2 {
        return None;
    }
    let num = |i: usize| -> Result<Option<u64>> {
        parts
            .get(i)
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad number '{s}' in tree spec '{spec}'")))
            })
            .transpose()
    };
    Some((|| {
        let n = num(1)?.expect("checked length") as usize;
        Ok(match kind {
            "star" => DirectedTree::star(n)?,
            "path" => DirectedTree::path(n)?,
            "random" => {
                let mut rng = rng_from_seed(num(2)?.unwrap_or(seed));
                synth::random_tree(n, &mut rng)?
            }
            _ => {
                let h = num(2)?.ok_or_else(|| {
                    Error::InvalidParameter(format!("tree spec '{spec}' needs a height"))
                })? as usize;
                let mut rng = rng_from_seed(num(3)?.unwrap_or(seed));
                synth::random_tree_fixed_height(n, h, &mut rng)?
            }
        })
    })())
}

/// Plain edge list: first data line is the node count, then one
/// `parent child` pair per line. `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<DirectedTree> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, first) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty tree file".into(),
    })?;
    let n: usize = first.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected node count, found '{first}'"),
    })?;
    let mut edges = Vec::new();
    for (line, l) in lines {
        let nums: Vec<usize> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| Error::Parse {
                line,
                message: format!("expected 'parent child', found '{l}'"),
            })?;
        match nums.as_slice() {
            [p, c] => edges.push((*p, *c)),
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 'parent child', found '{l}'"),
                })
            }
        }
    }
    Ok(DirectedTree::from_edges(n, &edges)?)
}

fn load_trees(spec: &str, seed: u64) -> Result<Vec<NamedTree>> {
    if let Some(tree) = parse_generator(spec, seed) {
        return Ok(vec![NamedTree {
            id: spec.to_owned(),
            tree: tree?,
        }]);
    }
    let path = Path::new(spec);
    let is_jsonl = matches!(path.extension().and_then(|e| e.to_str()), Some("jsonl" | "json"));
    if is_jsonl {
        let records = cascade::read_jsonl(BufReader::new(File::open(path)?))?;
        Ok(records
            .into_iter()
            .map(|r| NamedTree { id: r.id, tree: r.tree })
            .collect())
    } else {
        let text = fs::read_to_string(path)?;
        Ok(vec![NamedTree {
            id: spec.to_owned(),
            tree: parse_edge_list(&text)?,
        }])
    }
}

fn bit_string(labels: &Labelling) -> String {
    labels.bits().iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Writes `body` to `path` if given, otherwise to `fallback`.
fn emit(path: Option<&PathBuf>, fallback: &mut dyn Write, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body)?,
        None => fallback.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn csv_string<S: serde::Serialize>(seed: u64, header: Option<&[&str]>, rows: &[S]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(header.is_none())
        .from_writer(Vec::new());
    if let Some(h) = header {
        w.write_record(h)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(format!("# seed={seed}\n{}", String::from_utf8(body).expect("utf8")))
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let g = &cli.global;
    let seed = g.seed;
    match &cli.command {
        Command::Optimal(args) => {
            let trees = load_trees(&args.tree, seed)?;
            let format = g.format.unwrap_or(Format::Json);
            let mut rows = Vec::new();
            for t in &trees {
                let report = optimal_summary(&t.tree);
                let labels =
                    Labelling::from_ones(t.tree.node_count(), report.one_nodes.iter().copied())?;
                rows.push((t, report, labels));
            }
            let body = match format {
                Format::Json => rows
                    .iter()
                    .map(|(t, r, l)| {
                        json!({
                            "id": t.id, "seed": seed, "n": t.tree.node_count(),
                            "influence": r.influence, "k": r.k,
                            "one_nodes": r.one_nodes, "labels": bit_string(l),
                        })
                        .to_string()
                            + "\n"
                    })
                    .collect(),
                Format::Csv => {
                    let recs: Vec<_> = rows
                        .iter()
                        .map(|(t, r, _)| (&t.id, t.tree.node_count(), r.influence, r.k, join_ids(&r.one_nodes)))
                        .collect();
                    csv_string(seed, Some(&["id", "n", "influence", "k", "one_nodes"]), &recs)?
                }
            };
            emit(g.out.as_ref(), stdout, &body)
        }
        Command::Greedy { tree, k } => {
            let trees = load_trees(&tree.tree, seed)?;
            let format = g.format.unwrap_or(Format::Json);
            let mut rows = Vec::new();
            for (i, t) in trees.iter().enumerate() {
                let mut rng = rng_from_seed(derive_seed(seed, &[i as u64]));
                let out = greedy_placement(&t.tree, *k, &mut rng)?;
                rows.push((t, out));
            }
            let body = match format {
                Format::Json => rows
                    .iter()
                    .map(|(t, o)| {
                        let ones: Vec<usize> = o.labels.one_nodes().collect();
                        json!({
                            "id": t.id, "seed": seed, "n": t.tree.node_count(), "k": k,
                            "influence": o.influence, "one_nodes": ones,
                            "labels": bit_string(&o.labels),
                        })
                        .to_string()
                            + "\n"
                    })
                    .collect(),
                Format::Csv => {
                    let recs: Vec<_> = rows
                        .iter()
                        .map(|(t, o)| {
                            let ones: Vec<usize> = o.labels.one_nodes().collect();
                            (&t.id, t.tree.node_count(), k, o.influence, join_ids(&ones))
                        })
                        .collect();
                    csv_string(seed, Some(&["id", "n", "k", "influence", "one_nodes"]), &recs)?
                }
            };
            emit(g.out.as_ref(), stdout, &body)
        }
        Command::Phase { tree, k } => {
            let trees = load_trees(&tree.tree, seed)?;
            let t = match trees.as_slice() {
                [t] => t,
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "phase needs exactly one tree, '{}' holds {}",
                        tree.tree,
                        trees.len()
                    )))
                }
            };
            let optimum = optimal_summary(&t.tree);
            let k = k.unwrap_or(optimum.k);
            let limits = EnumerationLimits {
                max_labellings: g.max_enum,
                ..Default::default()
            };
            let e = enumerate_fixed_k(&t.tree, k, &limits)?;
            let body = match g.format.unwrap_or(Format::Csv) {
                Format::Csv => format!(
                    "# seed={seed} n={} k={k} optimum={}\n{}",
                    t.tree.node_count(),
                    optimum.influence,
                    e.histogram.to_csv()?
                ),
                Format::Json => {
                    let cells: Vec<_> = e
                        .histogram
                        .cells
                        .iter()
                        .map(|(c, n)| json!({"m10": c.m10, "m11": c.m11, "count": n}))
                        .collect();
                    json!({
                        "id": t.id, "seed": seed, "n": t.tree.node_count(), "k": k,
                        "optimum": optimum.influence, "max_m10": e.max_influence, "cells": cells,
                    })
                    .to_string()
                        + "\n"
                }
            };
            emit(g.out.as_ref(), stdout, &body)
        }
        Command::Simulate(cmd) => simulate(cmd, g, stdout, stderr),
        Command::Analyze(args) => analyze(args, g, stdout, stderr),
    }
}

fn simulate(cmd: &SimulateCmd, g: &GlobalArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let seed = g.seed;
    match cmd {
        SimulateCmd::VsN {
            n_min,
            n_max,
            replicates,
            model,
        } => {
            if n_min > n_max {
                return Err(Error::InvalidParameter(format!("empty size range {n_min}..={n_max}")));
            }
            let sizes: Vec<usize> = (*n_min..=*n_max).collect();
            let model: &dyn TreeModel = match model {
                Model::Recursive => &RecursiveTree,
                Model::Star => &StarModel,
                Model::Path => &PathModel,
            };
            let curve = synth::growth_vs_n(&sizes, *replicates, seed, model)?;
            let degenerate = curve.influence_fit.is_none() || curve.ones_fit.is_none();
            if degenerate {
                writeln!(stderr, "warning: linear fit is degenerate for this sweep")?;
            }
            let fit = json!({
                "seed": seed, "mode": "vs-n", "model": model.name(),
                "n_min": n_min, "n_max": n_max, "replicates": replicates,
                "influence_fit": curve.influence_fit, "k_fit": curve.ones_fit,
                "degenerate": degenerate,
            });
            emit(g.out.as_ref(), stdout, &csv_string(seed, None, &curve.points)?)?;
            emit(g.json_out.as_ref(), stderr, &format!("{fit:#}\n"))
        }
        SimulateCmd::VsHeight {
            n,
            h_min,
            h_max,
            replicates,
        } => {
            let h_max = h_max.unwrap_or(n.saturating_sub(1));
            if h_min > &h_max {
                return Err(Error::InvalidParameter(format!("empty height range {h_min}..={h_max}")));
            }
            let heights: Vec<usize> = (*h_min..=h_max).collect();
            let points = synth::growth_vs_height(*n, &heights, *replicates, seed)?;
            let xs: Vec<f64> = points.iter().map(|p| p.x as f64).collect();
            let ys: Vec<f64> = points.iter().map(|p| p.mean_influence).collect();
            let rho = (xs.len() >= 2).then(|| crate::stats::spearman(&xs, &ys)).filter(|r| r.is_finite());
            let summary = json!({
                "seed": seed, "mode": "vs-height", "n": n, "h_min": h_min, "h_max": h_max,
                "replicates": replicates, "spearman_h_mean_I": rho,
            });
            emit(g.out.as_ref(), stdout, &csv_string(seed, None, &points)?)?;
            emit(g.json_out.as_ref(), stderr, &format!("{summary:#}\n"))
        }
    }
}

fn parse_bins(s: &str) -> Result<BinSpec> {
    if s == "unit" {
        return Ok(BinSpec::UnitWidth);
    }
    match s.parse::<usize>() {
        Ok(count) if count > 0 => Ok(BinSpec::Uniform { count }),
        _ => Err(Error::InvalidParameter(format!(
            "--bins must be 'unit' or a positive bin count, got '{s}'"
        ))),
    }
}

fn analyze(args: &AnalyzeArgs, g: &GlobalArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let format = match &args.labels {
        Some(l) => CascadeFormat::CsvPair { labels: l.clone() },
        None => CascadeFormat::JsonLines,
    };
    let records = cascade::load_cascades(&args.input, &format)?;
    let config = AnalysisConfig {
        seed: g.seed,
        filter: FilterThresholds {
            min_nodes: args.min_nodes,
            min_coordinated: args.min_coordinated,
        },
        random_replicates: args.replicates,
        distribution: match args.distribution {
            Distribution::Influence => DistributionKind::Influence,
            Distribution::Rho => DistributionKind::Rho,
        },
        bins: parse_bins(&args.bins)?,
        smoothing: args.smoothing,
    };
    let report = cascade::analyze(records, &config)?;

    let mut csv_body = Vec::new();
    cascade::metrics_to_csv(&report.metrics, &mut csv_body)?;
    let csv_body = format!("# seed={}\n{}", g.seed, String::from_utf8(csv_body).expect("utf8"));

    let out_of_range = report
        .metrics
        .iter()
        .filter(|m| !(0.0..=1.0).contains(&m.rho))
        .count();
    let c = &report.comparison;
    let summary = json!({
        "seed": g.seed,
        "config": config,
        "cascades_total": report.total,
        "cascades_removed": report.removed,
        "cascades_analyzed": report.metrics.len(),
        "rho_out_of_range": out_of_range,
        "kl_real_vs_greedy": c.kl_real_vs_greedy,
        "kl_real_vs_random": c.kl_real_vs_random,
        "bin_spec": c.bin_spec,
        "bins": c.bins,
        "smoothing": c.smoothing,
        "log_base": c.log_base,
    });
    emit(g.out.as_ref(), stdout, &csv_body)?;
    emit(g.json_out.as_ref(), stderr, &format!("{summary:#}\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("cascade-influence").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn edge_list_parsing() {
        let t = parse_edge_list("# star\n4\n0 1\n0 2 # leaf\n0 3\n").unwrap();
        assert_eq!(t.children(0), &[1, 2, 3]);
        assert!(matches!(parse_edge_list("0\n"), Err(Error::Tree(_))));
        assert!(matches!(parse_edge_list("3\n0 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn generator_specs() {
        assert_eq!(load_trees("star:25", 0).unwrap()[0].tree.node_count(), 25);
        assert_eq!(load_trees("path:4", 0).unwrap()[0].tree.height(), 3);
        let a = load_trees("random:30:7", 0).unwrap();
        let b = load_trees("random:30", 7).unwrap();
        assert_eq!(a[0].tree, b[0].tree);
        assert_eq!(load_trees("height:20:5:1", 0).unwrap()[0].tree.height(), 5);
        assert!(load_trees("height:20", 0).is_err());
        assert!(load_trees("star:x", 0).is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["greedy", "--tree", "star:5"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn bins_flag() {
        assert_eq!(parse_bins("unit").unwrap(), BinSpec::UnitWidth);
        assert_eq!(parse_bins("12").unwrap(), BinSpec::Uniform { count: 12 });
        assert!(parse_bins("0").is_err());
        assert!(parse_bins("wide").is_err());
    }
}
