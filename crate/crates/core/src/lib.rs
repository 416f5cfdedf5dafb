//! End-to-end emulation of a linear-combination-of-Hamiltonian-simulations
//! solver for advection-diffusion equations with boundary conditions.
//!
//! The crate discretizes the governing equation with a finite volume method,
//! synthesizes explicit select-oracle circuits for the resulting operators,
//! simulates them exactly on a dense state vector, and reconstructs the
//! physical solution from the post-selected branch.

pub mod analysis;
pub mod blocks;
pub mod circuits;
pub mod dense;
pub mod error;
pub mod experiments;
pub mod fvm;
pub mod lchs;
pub mod math;
pub mod reference;
pub mod sim;
pub mod solver;

pub use error::{Error, Result};
