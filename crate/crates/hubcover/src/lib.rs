//! Hub covering toolkit.
//!
//! Banks route deliveries between branches through one or two open hubs;
//! opening a hub costs money and a tour is admissible only if it is short
//! enough (metric variant) or uses existing links (graph variants). The
//! crate models the six problem settings (three geometry variants, single
//! or multi allocation), checks candidate solutions exactly, solves small
//! instances by exhaustive search, runs the known approximation
//! algorithms, and rewrites problems into each other (graph to metric,
//! coverage to graph, set cover in both directions, queens completion
//! boards to single-allocation instances).
//!
//! All arithmetic is exact rational; no feasibility decision involves
//! floating point.

pub mod approx;
pub mod bench;
pub mod cli;
pub mod exact;
pub mod feasibility;
pub mod format;
pub mod generate;
pub mod model;
pub mod rational;
pub mod reductions;

#[cfg(test)]
pub(crate) mod fixtures;
