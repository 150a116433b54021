//! Shearlet groups, their symplectic embeddings, `sp(2, R)` normal forms, and representation and coorbit numerics.

pub mod coorbit;
pub mod error;
pub mod groups;
pub mod liealg;
pub mod matrix;
pub mod report;
pub mod repr;
pub mod scalar;
pub mod suites;
pub mod symplectic;

pub use error::{Error, Result};
