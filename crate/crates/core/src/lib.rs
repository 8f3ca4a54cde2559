//! Influence of binary-labelled node subsets in directed trees.
//!
//! The influence of a labelling is the number of edges leading from a
//! 1-node to a 0-node. The crate provides:
//!
//! * [`optimal`]: the exact optimum with no budget, in linear time, plus a
//!   minimal-cardinality optimal labelling;
//! * [`greedy`]: placement under a fixed budget by greedy seeding and label
//!   switches;
//! * [`oracle`]: brute-force references and the `(m10, m11)` phase diagram;
//! * [`synth`]: random tree generators and growth-rate experiments;
//! * [`cascade`]: ingestion and auditing of observed labelled cascades.

pub mod cascade;
pub mod cli;
pub mod error;
pub mod greedy;
pub mod optimal;
pub mod oracle;
pub mod seed;
pub mod stats;
pub mod synth;
pub mod tree;

pub use error::{Error, Result, TreeError};
pub use tree::{
    bounds, degree_stats, edge_mix_counts, influence, Bounds, DegreeStats, DirectedTree, EdgeMix,
    InfluenceReport, Labelling,
};
