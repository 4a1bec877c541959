//! Structured discretization matrices, their spectral symbols, and numerical
//! checks of eigenvalue and singular value distributions.

pub mod analysis;
pub mod builders;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod symbol;

pub use error::{Error, Result};
