//! Finite periodic-boundary-condition covers of graphs carrying periodic
//! Jacobi matrices, and the machinery to compare their eigenvalue counting
//! measures with the density of states of the lifted operator on the
//! universal cover tree.
//!
//! The crate is organised around a few building blocks:
//!
//! * [`graph`]: colored half-edge multigraphs, covers of the rose, finite
//!   leafless graphs with spanning trees, covering maps and lego expansion.
//! * [`jacobi`]: exact Jacobi matrices, trace moments and dense spectra.
//! * [`tree_dos`]: density-of-states moments computed on truncations of the
//!   universal cover.
//! * [`ball`]: balls in the free-group Cayley tree and the ways of closing
//!   them into finite covers (antipodal or random pairings).
//! * [`group`]: free words, the Sanov embedding and congruence quotients.
//! * [`diagnostics`]: girth, local tree-likeness and convergence reports.

pub mod ball;
pub mod diagnostics;
mod error;
pub mod graph;
pub mod group;
pub mod jacobi;
pub mod rational;
pub mod rng;
pub mod tree_dos;

pub use error::{Error, Result};
pub use rational::Rational;
