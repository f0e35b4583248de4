//! Optimal contraction trees for a fixed linear order of tensors.
//!
//! For a chain `X_1 * ... * X_n` the best parenthesization under edge
//! congestion, vertex congestion or total operations is found by an
//! interval DP over windows `[i, j]`:
//!
//! ```text
//! edge:    c(i,j) = min_k max(out(i,j),             c(i,k), c(k+1,j))
//! vertex:  c(i,j) = min_k max(out(i,j) + shared(k), c(i,k), c(k+1,j))
//! total:   c(i,j) = min_k     out(i,j) + shared(k) ⊕ (c(i,k) ⊕ c(k+1,j))
//! ```
//!
//! where `⊕` is the log-domain sum. Leaves cost their own log-size for the
//! congestion objectives and nothing for total operations. Ties go to the
//! smallest `k`.

mod chain;
mod dp;
mod order;
pub mod pipeline;

use crate::error::Result;
use crate::network::{ContractionTree, Objective, TensorNetwork};
use crate::real::Real;

pub use chain::{calc_shared, Chain};
pub use dp::{DpTable, Strategy};
pub use order::Ordering;
pub use pipeline::{optimize_pipeline, PipelineConfig, PipelineResult};

/// Fill the window table for `order` under `objective`.
pub fn solve_windows<T: Real>(
    net: &TensorNetwork<T>,
    order: &Ordering,
    objective: Objective,
    strategy: Strategy,
) -> Result<DpTable<T>> {
    let chain = Chain::new(net, order)?;
    Ok(dp::solve(&chain, objective, strategy))
}

/// Optimal tree whose left-to-right leaves are `order`, and its value.
pub fn optimize_tree<T: Real>(
    net: &TensorNetwork<T>,
    order: &Ordering,
    objective: Objective,
) -> Result<(ContractionTree, T)> {
    optimize_tree_with(net, order, objective, Strategy::BottomUp)
}

pub fn optimize_tree_with<T: Real>(
    net: &TensorNetwork<T>,
    order: &Ordering,
    objective: Objective,
    strategy: Strategy,
) -> Result<(ContractionTree, T)> {
    let table = solve_windows(net, order, objective, strategy)?;
    Ok((table.tree(order), table.optimum()))
}
