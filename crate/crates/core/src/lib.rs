//! Effect algebras, assert maps, comprehension and quotients over three
//! concrete instances:
//!
//! * [`boolean::Sets`]: finite sets and partial functions,
//! * [`prob::Dists`]: finite subdistribution kernels with exact rational weights,
//! * [`quantum::Quantum`]: finite-dimensional block-diagonal algebras and
//!   Kraus maps, with explicit [`tol::Tolerances`].
//!
//! Generic constructions live in [`effectus`]; [`harness`] checks the laws
//! by enumeration and seeded sampling.

pub mod boolean;
pub mod cli;
pub mod effectus;
pub mod error;
pub mod eval;
pub mod harness;
pub mod linalg;
pub mod prob;
pub mod quantum;
pub mod sample;
pub mod scalar;
pub mod tol;

pub use error::{Error, Result};
