//! Majority-agreed key distribution over stabilizer states.
//!
//! The crate is layered bottom-up:
//!
//! - [`pauli`] and [`gf2`]: signed Pauli strings in symplectic form and the
//!   bit-packed GF(2) elimination everything else reduces to.
//! - [`stabilizer`]: tableaux, local subgroups, entanglement entropy, AME
//!   certification, measurement and graph-state canonicalization.
//! - [`graph`]: simple graphs, the source of graph states and key routes.
//! - [`planner`]: choosing and certifying stabilizers for key agreement.
//! - [`protocol`]: seeded simulation of key sessions and die partitioning.
//! - [`qudit`]: the prime-dimension generalization.
//! - [`dense`]: brute-force statevector oracles and Bell expressions.

pub mod dense;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod pauli;
pub mod planner;
pub mod protocol;
pub mod qudit;
pub mod stabilizer;
pub mod states;

pub use error::{Error, Result};
pub use graph::Graph;
pub use pauli::{Gate, Letter, PauliString};
pub use stabilizer::{LocalSubgroup, Tableau};
