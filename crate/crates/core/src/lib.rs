//! Coined discrete-time quantum walks on graphs, their operator identities,
//! the Szegedy spectral map, and quantum graphs solved through the
//! associated walk.
//!
//! Vertices are labelled `1..=n`; arcs `(u, v)` are indexed lexicographically,
//! so the arcs leaving a vertex form a contiguous block ordered by terminus.

pub mod cli;
pub mod coins;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod operator;
pub mod quantum_graph;
pub mod szegedy;

pub use error::{Error, Result};
