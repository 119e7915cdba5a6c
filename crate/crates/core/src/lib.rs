//! Stability of local-information centrality rankings under
//! degree-preserving network randomization.
//!
//! The pipeline is: load or [`generate`] a graph, score nodes with the six
//! local [`centrality`] measures, [`randomize`] the graph while keeping
//! every degree fixed, and compare rankings before and after with the
//! metrics in [`stability`]. [`experiment`] ties the steps together for
//! multi-seed runs and assortativity sweeps.
//!
//! Per-node scoring and per-seed runs go through [`par`], which uses rayon
//! when the `parallel` feature is enabled (the default) and plain iterators
//! otherwise. Output is identical in both modes.

pub mod centrality;
pub mod experiment;
pub mod generate;
pub mod graph;
pub mod par;
pub mod randomize;
pub mod stability;

pub use centrality::{CentralityVector, Measure};
pub use graph::{load_edge_list, save_edge_list, DegreeSequence, Graph, GraphError, LoadedGraph, NodeId};
pub use par::Execution;
pub use randomize::{Direction, NoiseModel, PerturbationPlan, PerturbationTrace, Steps};
pub use stability::{rank_nodes, RankVector};
