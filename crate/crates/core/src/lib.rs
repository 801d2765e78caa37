//! Causal bounds from selection-biased data and bound-truncated bandits.
//!
//! The crate is `no_std` (with `alloc`) so the identification and bandit
//! machinery can be embedded anywhere; file formats and the command-line
//! driver live in the `pcb` crate.
#![no_std]

extern crate alloc;

pub mod assignment;
pub mod bandits;
pub mod bounds;
pub mod estimand;
pub mod graph;
pub mod scm;
pub mod fixtures;

pub use assignment::Assignment;
pub use estimand::{Estimand, EvalError, Evaluator, Extremum};
pub use graph::{CausalGraph, GraphBuilder, GraphError, NodeId, NodeKind, NodeSet};
pub use scm::{Dataset, DiscreteScm, JointTable, ScmError};
