//! Random tree generators and the growth-rate experiments.
//!
//! Each replicate draws from its own stream derived from
//! `(master seed, x, replicate index)`, so a curve does not depend on the
//! order in which replicates are evaluated.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, TreeError};
use crate::optimal::optimal_summary;
use crate::seed::stream;
use crate::stats::{fit_line, mean, sample_sd, FitResult};
use crate::tree::DirectedTree;

/// A distribution over rooted trees of a given size.
pub trait TreeModel {
    fn name(&self) -> &'static str;
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Result<DirectedTree>;
}

/// Uniform random recursive tree: node `i` attaches to a uniformly chosen
/// node among `0..i`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RecursiveTree;

impl TreeModel for RecursiveTree {
    fn name(&self) -> &'static str {
        "recursive"
    }

    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Result<DirectedTree> {
        random_tree(n, rng)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StarModel;

impl TreeModel for StarModel {
    fn name(&self) -> &'static str {
        "star"
    }

    fn sample(&self, n: usize, _rng: &mut dyn RngCore) -> Result<DirectedTree> {
        Ok(DirectedTree::star(n)?)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PathModel;

impl TreeModel for PathModel {
    fn name(&self) -> &'static str {
        "path"
    }

    fn sample(&self, n: usize, _rng: &mut dyn RngCore) -> Result<DirectedTree> {
        Ok(DirectedTree::path(n)?)
    }
}

pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DirectedTree> {
    if n == 0 {
        return Err(TreeError::Empty.into());
    }
    let parents: Vec<Option<usize>> = (0..n)
        .map(|i| (i > 0).then(|| rng.random_range(0..i)))
        .collect();
    Ok(DirectedTree::from_parents(&parents)?)
}

/// Tree on `n` nodes of height exactly `h`: a spine `0 -> 1 -> ... -> h`,
/// then every further node hangs off a uniformly chosen existing node of
/// depth below `h`.
pub fn random_tree_fixed_height<R: Rng + ?Sized>(
    n: usize,
    h: usize,
    rng: &mut R,
) -> Result<DirectedTree> {
    if h < 1 || h >= n {
        return Err(Error::InvalidParameter(format!(
            "height {h} is infeasible for {n} nodes (need 1 <= h <= n-1)"
        )));
    }
    let mut parents: Vec<Option<usize>> = (0..=h).map(|v| v.checked_sub(1)).collect();
    let mut depth: Vec<usize> = (0..=h).collect();
    let mut open: Vec<usize> = (0..h).collect();
    for v in h + 1..n {
        let p = open[rng.random_range(0..open.len())];
        parents.push(Some(p));
        depth.push(depth[p] + 1);
        if depth[v] < h {
            open.push(v);
        }
    }
    Ok(DirectedTree::from_parents(&parents)?)
}

/// Mean and spread of `I*` and `k*` at one value of the swept parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCurvePoint {
    pub x: usize,
    #[serde(rename = "mean_I")]
    pub mean_influence: f64,
    #[serde(rename = "sd_I")]
    pub sd_influence: f64,
    #[serde(rename = "mean_k")]
    pub mean_ones: f64,
    #[serde(rename = "sd_k")]
    pub sd_ones: f64,
    #[serde(skip)]
    pub replicates: usize,
}

#[derive(Debug, Clone)]
pub struct GrowthCurve {
    pub points: Vec<GrowthCurvePoint>,
    /// `None` when the curve is too short or flat to fit.
    pub influence_fit: Option<FitResult>,
    pub ones_fit: Option<FitResult>,
}

fn summarise<F>(x: usize, replicates: usize, mut draw: F) -> Result<GrowthCurvePoint>
where
    F: FnMut(usize) -> Result<DirectedTree>,
{
    let mut infl = Vec::with_capacity(replicates);
    let mut ones = Vec::with_capacity(replicates);
    for r in 0..replicates {
        let report = optimal_summary(&draw(r)?);
        infl.push(report.influence as f64);
        ones.push(report.k as f64);
    }
    Ok(GrowthCurvePoint {
        x,
        mean_influence: mean(&infl),
        sd_influence: sample_sd(&infl),
        mean_ones: mean(&ones),
        sd_ones: sample_sd(&ones),
        replicates,
    })
}

/// Sweeps the tree size and fits the mean `I*` and `k*` against `n`.
pub fn growth_vs_n(
    sizes: &[usize],
    replicates: usize,
    master_seed: u64,
    model: &dyn TreeModel,
) -> Result<GrowthCurve> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("empty size range".into()));
    }
    if replicates == 0 {
        return Err(Error::InvalidParameter("replicates must be at least 1".into()));
    }
    let points = sizes
        .iter()
        .map(|&n| {
            summarise(n, replicates, |r| {
                let mut rng = stream(master_seed, &[n as u64, r as u64]);
                model.sample(n, &mut rng)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = points.iter().map(|p| p.x as f64).collect();
    let yi: Vec<f64> = points.iter().map(|p| p.mean_influence).collect();
    let yk: Vec<f64> = points.iter().map(|p| p.mean_ones).collect();
    Ok(GrowthCurve {
        influence_fit: fit_line(&xs, &yi).ok(),
        ones_fit: fit_line(&xs, &yk).ok(),
        points,
    })
}

/// Sweeps the height at fixed size using [`random_tree_fixed_height`].
pub fn growth_vs_height(
    n: usize,
    heights: &[usize],
    replicates: usize,
    master_seed: u64,
) -> Result<Vec<GrowthCurvePoint>> {
    if heights.is_empty() {
        return Err(Error::InvalidParameter("empty height range".into()));
    }
    if replicates == 0 {
        return Err(Error::InvalidParameter("replicates must be at least 1".into()));
    }
    heights
        .iter()
        .map(|&h| {
            summarise(h, replicates, |r| {
                let mut rng = stream(master_seed, &[n as u64, h as u64, r as u64]);
                random_tree_fixed_height(n, h, &mut rng)
            })
        })
        .collect()
}
