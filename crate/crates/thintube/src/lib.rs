//! Spectral laboratory for Neumann diffusion operators on thin tubular
//! neighbourhoods of closed plane curves.
//!
//! The crate builds the half-width-dependent quadratic form of the
//! variable-coefficient Laplacian on a fixed reference cylinder, the
//! averaged effective operator on the underlying curve, and compares the
//! two through eigenvalue sweeps and projected resolvent differences.

pub mod coefficient;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod oracle;

pub use error::{Error, Result};
