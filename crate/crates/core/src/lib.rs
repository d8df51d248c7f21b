//! End-to-end entanglement capacity of random spatial fiber networks.
//!
//! Nodes are scattered in a square region of half-width `R`, joined by
//! pure-loss fiber links according to a Waxman, Erdős–Rényi or
//! distance-weighted preferential-attachment model, and each link carries
//! the repeaterless capacity `-log2(1 - 10^(-gamma D))`. The end-to-end
//! capacity of a node pair is the min cut between them.
//!
//! ```
//! use qnetcap_core::{generate, LossParams, ModelParams, WeightedGraph};
//!
//! let params = ModelParams::waxman(200, 400.0, 7);
//! let graph = WeightedGraph::new(generate(&params)?, LossParams::default());
//! let cut = graph.end_to_end_capacity(0, 1)?;
//! assert!(cut.value <= graph.node_capacity(0)?.min(graph.node_capacity(1)?) + 1e-9);
//! # Ok::<(), qnetcap_core::Error>(())
//! ```

pub mod asymptotics;
pub mod capacity;
pub mod ensemble;
pub mod error;
pub mod graphstats;
pub mod maxflow;
pub mod netgen;
mod quadrature;
pub mod seed;

pub use capacity::{
    edge_capacity, min_cut, CutResult, FlowTree, LossParams, WeightedGraph, DEFAULT_GAMMA,
};
pub use ensemble::{run_sweep, run_sweep_with_workers, ExperimentConfig, SweepOutput};
pub use error::{Error, Result};
pub use netgen::{generate, Coord, Family, ModelParams, NodeId, SpatialGraph};
