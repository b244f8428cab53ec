//! Bipartite matching and integral maximum flow.
//!
//! Ids are dense: left vertices are `0..left`, right vertices `0..right`,
//! network nodes `0..nodes`. All loops visit ids in ascending order, so
//! results depend only on the input.

mod bipartite;
mod flow;
mod weighted;

pub use bipartite::{max_cardinality_matching, BipartiteGraph, GraphError, Matching};
pub use flow::{max_flow, FlowError, FlowNetwork, FlowResult};
pub use weighted::{max_weight_matching, WeightError};
