//! Shallow hitting edge sets in uniform hypergraphs.
//!
//! A `t`-shallow hitting edge set of a hypergraph `H` is a set of edges
//! covering every vertex at least once and at most `t` times. This crate
//! generates the extremal constructions for the problem, solves instances
//! exactly and with local-lemma resampling, and evaluates the associated
//! threshold formulas.

pub mod bounds;
mod combin;
pub mod constructions;
pub mod designs;
pub mod error;
pub mod experiment;
pub mod hypergraph;
pub mod io;
pub mod solvers;

pub use error::{Error, Result};
pub use hypergraph::{EdgeSelection, Hypergraph};
