//! Quantum doubles of generalized Haagerup categories via tube algebras.
//!
//! The crate builds the tube algebra of a generalized Haagerup category (or
//! of its graded extension or de-equivariantization) inside a Cuntz algebra,
//! finds the minimal central projections numerically and assembles the
//! modular data `S`, `T` of the Drinfeld center.

pub mod center;
pub mod cli;
pub mod cuntz;
pub mod ghdata;
pub mod groups;
pub mod modular;
pub mod numerics;
pub mod structured;
pub mod tube;
