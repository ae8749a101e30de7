//! Query-complexity laboratory for local search on vertex-transitive graphs.
//!
//! The crate builds snake-shaped hard instances on Cayley and other
//! vertex-transitive graphs, checks the finite inequalities that the
//! lower-bound argument rests on, computes relational and quantum adversary
//! scores exactly on small ensembles, and measures classical local-search
//! solvers against the bound formula.

pub mod adversary;
pub mod analysis;
pub mod budget;
pub mod error;
pub mod families;
pub mod graph;
pub mod group;
pub mod harness;
pub mod mixing;
pub mod rng;
pub mod snake;
pub mod solvers;
pub mod stats;

pub use error::{Error, Result};
