//! Source estimation for SI spreading on graphs.
//!
//! The crate is organised bottom-up: [`graph`] holds the graph type and
//! generators, [`spread`] simulates the SI process, [`likelihood`] computes
//! exact likelihoods (brute-force oracle and closed forms), [`centrality`]
//! and [`estimators`] implement the scoring rules, and [`bench`] runs seeded
//! Monte-Carlo comparisons.

pub mod bench;
pub mod centrality;
pub mod combinatorics;
pub mod error;
pub mod estimators;
pub mod graph;
pub mod likelihood;
pub mod spread;

pub use error::{Error, ErrorClass, Result};
pub use graph::{Graph, Vertex};
