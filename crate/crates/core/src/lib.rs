//! Contraction trees for tensor networks via linear orderings.
//!
//! A network is projected to a weighted graph, the multilevel solver in
//! [`ordering`] arranges its tensors on a line, and the interval DP in
//! [`treeopt`] finds the best contraction tree consistent with that line
//! under one of three objectives. Everything is generic over the float type;
//! the aliases below fix it to `f64` (or `f32` with the `32` suffix).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod network;
pub mod oracle;
pub mod ordering;
pub mod qaoa;
pub mod real;
pub mod treeopt;

pub use error::{Error, Result};
pub use network::{
    contract_indices, evaluate_subtree, evaluate_tree, project_graph, ContractionTree, Endpoints,
    Objective, TreeNode,
};
pub use ordering::{mla_order, MlaConfig};
pub use real::{log_sum, Real};
pub use treeopt::{optimize_pipeline, optimize_tree, Ordering, PipelineConfig, Strategy};

pub type Network = network::TensorNetwork<f64>;
pub type Network32 = network::TensorNetwork<f32>;
pub type CostReport = network::CostReport<f64>;
pub type CostReport32 = network::CostReport<f32>;
pub type Graph = network::OrderingGraph<f64>;
pub type Graph32 = network::OrderingGraph<f32>;
pub type DpTable = treeopt::DpTable<f64>;
pub type DpTable32 = treeopt::DpTable<f32>;
pub type PipelineResult = treeopt::PipelineResult<f64>;
pub type Dense = oracle::DenseTensor<f64>;
