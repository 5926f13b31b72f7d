//! Finite-truncation laboratory for Lie group representations on nested
//! scales of Hilbert spaces.

pub mod error;
pub mod flow;
pub mod harness;
pub mod hermite;
pub mod integrator;
pub mod lie;
pub mod linalg;
pub mod nilpotent;
pub mod quadrature;
pub mod scale;
pub mod semigroup;

pub use error::{LabError, Result};
