//! Numerical library for soft projection pairs: pairs (a, b) of positive
//! contractions satisfying the relaxed idempotency relations
//! (a−a²)(a−b) = 0 and (b−b²)(a−b) = 0.
//!
//! The crate verifies the relations and their derived identities, splits
//! valid pairs over ℂ into a common part plus projections, computes the
//! integer class tr(a−b), constructs and certifies explicit homotopies,
//! models the universal algebra of the relations on a sample grid together
//! with the κ/ι correspondence with projection classes, and handles
//! matrix-valued fields over sampled spaces with discrete Chern numbers.

pub mod error;
pub mod funcalg;
pub mod homotopy;
pub mod io;
pub mod matrix;
pub mod pairs;
pub mod reduction;
pub mod rng;
pub mod universal;

pub use error::{Error, Result};
pub use matrix::{CMatrix, EigenSystem};
pub use pairs::{RelationReport, SoftPair};
