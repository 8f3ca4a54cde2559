//! Histogramming of per-cascade values and Kullback-Leibler divergence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SMOOTHING: f64 = 1e-4;

/// How values are binned before comparing distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BinSpec {
    /// Bins `[j, j + 1)` for every integer `j` between the smallest and the
    /// largest floor of any value.
    UnitWidth,
    /// `count` equal-width bins spanning the smallest to the largest value;
    /// the top edge belongs to the last bin.
    Uniform { count: usize },
}

/// Resolved bin layout shared by all compared samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bins {
    pub lower: f64,
    pub width: f64,
    pub count: usize,
}

impl Bins {
    pub fn resolve(spec: BinSpec, samples: &[&[f64]]) -> Result<Self> {
        let all = || samples.iter().flat_map(|s| s.iter().copied());
        if all().next().is_none() {
            return Err(Error::InvalidParameter("no values to bin".into()));
        }
        if all().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite value".into()));
        }
        let lo = all().fold(f64::INFINITY, f64::min);
        let hi = all().fold(f64::NEG_INFINITY, f64::max);
        match spec {
            BinSpec::UnitWidth => {
                let lower = lo.floor();
                Ok(Self {
                    lower,
                    width: 1.0,
                    count: (hi.floor() - lower) as usize + 1,
                })
            }
            BinSpec::Uniform { count } => {
                if count == 0 {
                    return Err(Error::InvalidParameter("bin count must be positive".into()));
                }
                let width = if hi > lo { (hi - lo) / count as f64 } else { 1.0 };
                Ok(Self {
                    lower: lo,
                    width,
                    count,
                })
            }
        }
    }

    pub fn index(&self, v: f64) -> usize {
        let j = ((v - self.lower) / self.width).floor();
        (j.max(0.0) as usize).min(self.count - 1)
    }

    pub fn histogram(&self, values: &[f64]) -> Vec<f64> {
        let mut h = vec![0.0; self.count];
        for &v in values {
            h[self.index(v)] += 1.0;
        }
        h
    }
}

fn normalise(xs: &[f64], what: &str) -> Result<Vec<f64>> {
    if xs.iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("{what} has a negative or non-finite mass")));
    }
    let total: f64 = xs.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidParameter(format!("{what} has zero total mass")));
    }
    Ok(xs.iter().map(|x| x / total).collect())
}

/// `D(p || q) = sum p_i ln(p_i / q_i)` in nats.
///
/// Both inputs are normalised first. If `q` is zero on a bin where `p` has
/// mass, `smoothing` is added to every bin of `q`, which is renormalised;
/// otherwise `q` is used as is. Bins with `p_i = 0` contribute nothing.
pub fn kl_divergence(p: &[f64], q: &[f64], smoothing: f64) -> Result<f64> {
    if !smoothing.is_finite() || smoothing <= 0.0 {
        return Err(Error::InvalidParameter(format!("smoothing must be positive, got {smoothing}")));
    }
    if p.is_empty() || p.len() != q.len() {
        return Err(Error::InvalidParameter(format!(
            "distributions need equal nonzero length, got {} and {}",
            p.len(),
            q.len()
        )));
    }
    let p = normalise(p, "p")?;
    let mut q = normalise(q, "q")?;
    if p.iter().zip(&q).any(|(&pi, &qi)| pi > 0.0 && qi == 0.0) {
        q.iter_mut().for_each(|qi| *qi += smoothing);
        q = normalise(&q, "q")?;
    }
    Ok(p
        .iter()
        .zip(&q)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| pi * (pi / qi).ln())
        .sum())
}
