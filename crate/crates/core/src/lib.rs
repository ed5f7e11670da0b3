//! Balanced allocation driven by non-backtracking random walks on regular graphs.
//!
//! The crate is split along the lines of the experiment pipeline:
//!
//! * [`graphs`] builds and inspects k-regular graphs (generators, girth,
//!   adjacency spectrum, exact non-backtracking walk matrices).
//! * [`nbwalk`] holds the directed-edge walker ensemble and the three reset
//!   disciplines (reset on intersection, periodic reset, no reset).
//! * [`allocator`] places balls into bins using the walkers or a baseline.
//! * [`analysis`] evaluates the bound recursions and runs the exact and Monte
//!   Carlo verifiers.
//! * [`harness`] derives seeds, parses experiment configs and runs sweeps.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocator;
pub mod analysis;
mod error;
pub mod graphs;
pub mod harness;
pub mod nbwalk;

pub use error::{Error, Result};
