//! Double signs of Hamiltonian circles in complete graphs whose edges are
//! labeled by the Klein four-group `F_2^2 = {e, a, b, c}`.
//!
//! The crate is `no_std` with `alloc`: every algorithm here is pure and
//! deterministic. File formats, parallel sweeps and the command line live in
//! the `dsign` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod census;
pub mod cycle_space;
pub mod gen;
pub mod graph;
pub mod group;
pub mod lemma_lab;
pub mod oracle;
pub mod solver;
pub mod switching;

pub use graph::{Circle, Path, SignedCompleteGraph, Triangle, Vertex};
pub use group::{SignCounts, SignSet, F22};
