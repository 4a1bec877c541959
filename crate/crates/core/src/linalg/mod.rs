//! Dense and banded real linear algebra.

mod banded;
mod cholesky;
mod dense;
mod hessenberg;
mod householder;
mod jacobi;
mod norms;
mod spectral;
mod svd;
mod tridiag;

pub use banded::BandedMatrix;
pub use cholesky::{solve_spd_banded, BandedCholesky};
pub use dense::DenseMatrix;
pub use hessenberg::{balance, hessenberg, hqr, nonsym_eigvals};
pub use householder::{bidiagonalize, tridiagonalize};
pub use jacobi::{jacobi_eigen, jacobi_eigvals};
pub use norms::{schatten_from_values, schatten_norm, spectral_norm, two_norm_bound};
pub use spectral::{
    generalized_sym_eigvals, sym_eigenpairs, sym_eigvals, sym_eigvals_with_tol, Matrix,
    SpectralSet, SpectrumKind,
};
pub use svd::singular_values;
pub use tridiag::tridiag_eigvals;

/// Default relative tolerance for the symmetry check.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Dense symmetric matrices up to this size go through cyclic Jacobi.
pub const JACOBI_MAX_N: usize = 64;
