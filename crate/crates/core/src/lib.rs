//! Dorfman two-stage pooled testing with positively correlated samples.
//!
//! - [`cost_model`]: exact expected relative cost for Markov-modulated
//!   sample streams and group-size optimisation.
//! - [`line_sim`]: Monte-Carlo simulation of the arrival line.
//! - [`pool_exec`]: test accounting for a given pooling permutation.
//! - [`sampled_graph`] and [`pooling`]: covariance-driven hierarchical
//!   pooling on a social graph, plus the random baseline.
//! - [`cascade`]: independent-cascade infections.
//! - [`graph_io`], [`datasets`]: graph ingestion, generation and statistics.
//! - [`experiment`], [`tables`], [`report`]: experiment drivers and CSV output.
//!
//! Replicate loops run on rayon when the `parallel` feature (default) is
//! enabled; results are identical with it disabled.

pub mod cascade;
pub mod cost_model;
pub mod datasets;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod graph_io;
pub mod line_sim;
pub mod par;
pub mod pool_exec;
pub mod pooling;
pub mod report;
pub mod rng;
pub mod sampled_graph;
pub mod tables;

pub use error::{Error, Result};
pub use graph::Graph;
pub use pool_exec::{PoolingStrategy, StatusVector};
