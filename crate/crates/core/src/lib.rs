//! Exact and numeric core for hyperkähler period domains.
//!
//! Quadratic lattices with their Bogomolov–Beauville–Fujiki form, period points
//! as positive oriented 2-planes, generic hyperkähler lines with exact
//! genericity certificates, the subtwistor metric, and isometry / spinorial
//! norm calculus. Everything here is `no_std` with `alloc`; IO lives in the
//! companion `hk` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod ghk;
pub mod lattice;
pub mod linalg;
pub mod ortho;
pub mod period;
pub mod scalars;
pub mod subspace;
pub mod subtwistor;

pub use error::{Error, Result};
pub use lattice::{FujikiData, QuadLattice};
pub use scalars::{AlgebraicScalar, AlgebraicVector, FieldSpec};
