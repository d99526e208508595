//! Alphabet reduction for maxmin binary CSP reconfiguration.
//!
//! The crate turns a binary constraint graph over a `2^n`-letter alphabet into a binary
//! constraint graph over a smaller alphabet in four stages: Hadamard encoding of every
//! vertex, robust circuits over codeword blocks, composition with an assignment tester,
//! and arity reduction. Exact exhaustive oracles back every stage at desk scale.

pub mod compose;
pub mod constants;
pub mod csp;
pub mod error;
pub mod experiments;
pub mod format;
pub mod generate;
pub mod hadamard;
pub mod pipeline;
pub mod robustize;
pub mod seeds;
pub mod solver;
pub mod trace;

pub use csp::{
    sequence_value, validate_sequence, value, Assignment, ConstraintGraph, Hyperedge,
    ReconfInstance, ReconfigSequence, Symbol, Value,
};
pub use error::{Error, Result};
pub use hadamard::BitFunction;
