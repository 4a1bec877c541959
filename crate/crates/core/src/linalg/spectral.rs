use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    jacobi_eigen, jacobi_eigvals, tridiag_eigvals, tridiagonalize, BandedCholesky, BandedMatrix,
    DenseMatrix, JACOBI_MAX_N, SYMMETRY_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Eigenvalues,
    SingularValues,
}

/// Real spectrum sorted ascending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSet {
    values: Vec<f64>,
    kind: SpectrumKind,
}

impl SpectralSet {
    pub fn new(mut values: Vec<f64>, kind: SpectrumKind) -> Self {
        if kind == SpectrumKind::SingularValues {
            for v in values.iter_mut() {
                *v = v.abs();
            }
        }
        values.sort_by(f64::total_cmp);
        Self { values, kind }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self::new(self.values.iter().map(|v| alpha * v).collect(), self.kind)
    }
}

/// Either storage format.
#[derive(Clone, Debug, PartialEq)]
pub enum Matrix {
    Banded(BandedMatrix),
    Dense(DenseMatrix),
}

impl Matrix {
    pub fn n(&self) -> usize {
        match self {
            Matrix::Banded(b) => b.n(),
            Matrix::Dense(d) => d.rows(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Matrix::Banded(b) => b.to_dense(),
            Matrix::Dense(d) => d.clone(),
        }
    }

    pub fn scale(&self, alpha: f64) -> Self {
        match self {
            Matrix::Banded(b) => Matrix::Banded(b.scale(alpha)),
            Matrix::Dense(d) => Matrix::Dense(d.scale(alpha)),
        }
    }

    pub fn asymmetry(&self) -> f64 {
        match self {
            Matrix::Banded(b) => b.asymmetry(),
            Matrix::Dense(d) => d.asymmetry(),
        }
    }

    pub fn check_symmetric(&self, rel_tol: f64) -> Result<()> {
        match self {
            Matrix::Banded(b) => b.check_symmetric(rel_tol),
            Matrix::Dense(d) => d.check_symmetric(rel_tol),
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            Matrix::Banded(b) => b.trace(),
            Matrix::Dense(d) => d.trace(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        match self {
            Matrix::Banded(b) => b.frobenius_norm(),
            Matrix::Dense(d) => d.frobenius_norm(),
        }
    }
}

impl From<BandedMatrix> for Matrix {
    fn from(b: BandedMatrix) -> Self {
        Matrix::Banded(b)
    }
}

impl From<DenseMatrix> for Matrix {
    fn from(d: DenseMatrix) -> Self {
        Matrix::Dense(d)
    }
}

/// Eigenvalues of a symmetric matrix, sorted ascending.
///
/// Tridiagonal bands go straight to implicit QL. Anything wider is treated
/// as dense: cyclic Jacobi for small sizes, Householder tridiagonalization
/// followed by QL otherwise.
pub fn sym_eigvals(a: &Matrix) -> Result<SpectralSet> {
    sym_eigvals_with_tol(a, SYMMETRY_TOL)
}

pub fn sym_eigvals_with_tol(a: &Matrix, rel_tol: f64) -> Result<SpectralSet> {
    a.check_symmetric(rel_tol)?;
    let values = match a {
        Matrix::Banded(b) if b.lower() <= 1 && b.upper() <= 1 => {
            let d = b.diagonal(0);
            let e = b.diagonal(-1);
            tridiag_eigvals(&d, &e)?
        }
        Matrix::Banded(b) => dense_sym_values(&b.to_dense())?,
        Matrix::Dense(d) => dense_sym_values(d)?,
    };
    Ok(SpectralSet::new(values, SpectrumKind::Eigenvalues))
}

fn dense_sym_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    if a.rows() <= JACOBI_MAX_N {
        jacobi_eigvals(a)
    } else {
        let (d, e) = tridiagonalize(a)?;
        tridiag_eigvals(&d, &e)
    }
}

/// Eigenpairs of a small dense symmetric matrix by Jacobi, sorted by value.
pub fn sym_eigenpairs(a: &DenseMatrix) -> Result<Vec<(f64, Vec<f64>)>> {
    a.check_symmetric(SYMMETRY_TOL)?;
    let n = a.rows();
    let (vals, q) = jacobi_eigen(a)?;
    let mut pairs: Vec<(f64, Vec<f64>)> = vals
        .into_iter()
        .enumerate()
        .map(|(k, v)| (v, (0..n).map(|i| q[(i, k)]).collect()))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(pairs)
}

/// Eigenvalues of the symmetric pencil `K v = lambda M v` with `M` SPD.
///
/// Uses `M = L L^T` and the congruent symmetric matrix `L^{-1} K L^{-T}`.
pub fn generalized_sym_eigvals(k: &BandedMatrix, m: &BandedMatrix) -> Result<SpectralSet> {
    if k.n() != m.n() {
        return Err(Error::DimensionMismatch(format!("pencil {} vs {}", k.n(), m.n())));
    }
    k.check_symmetric(SYMMETRY_TOL)?;
    let chol = BandedCholesky::factor(m)?;
    let x = chol.forward_solve(&k.to_dense())?;
    let c = chol.forward_solve(&x.transpose())?;
    let n = c.rows();
    let c = DenseMatrix::from_fn(n, n, |i, j| 0.5 * (c[(i, j)] + c[(j, i)]));
    Ok(SpectralSet::new(dense_sym_values(&c)?, SpectrumKind::Eigenvalues))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn laplacian(n: usize) -> BandedMatrix {
        BandedMatrix::tridiagonal(&vec![-1.0; n - 1], &vec![2.0; n], &vec![-1.0; n - 1]).unwrap()
    }

    #[test]
    fn laplacian_n8() {
        let s = sym_eigvals(&laplacian(8).into()).unwrap();
        for (k, v) in s.values().iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * PI / 9.0).cos();
            assert!((v - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_n4() {
        let s = sym_eigvals(&BandedMatrix::identity(4).unwrap().into()).unwrap();
        assert_eq!(s.values(), &[1.0; 4]);
    }

    #[test]
    fn dense_paths_agree() {
        let n = 80;
        let a = DenseMatrix::from_fn(n, n, |i, j| 1.0 / (1.0 + (i as f64 - j as f64).abs()));
        let via_householder = sym_eigvals(&a.clone().into()).unwrap();
        let mut via_jacobi = jacobi_eigvals(&a).unwrap();
        via_jacobi.sort_by(f64::total_cmp);
        for (x, y) in via_householder.values().iter().zip(&via_jacobi) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn nonsymmetric_rejected() {
        let a = BandedMatrix::tridiagonal(&[1.0], &[0.0, 0.0], &[2.0]).unwrap();
        assert!(matches!(
            sym_eigvals(&a.into()),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn pencil_of_identity_mass() {
        let k = laplacian(5);
        let m = BandedMatrix::identity(5).unwrap();
        let g = generalized_sym_eigvals(&k, &m).unwrap();
        let s = sym_eigvals(&k.into()).unwrap();
        for (x, y) in g.values().iter().zip(s.values()) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn singular_values_sorted_nonnegative() {
        let s = SpectralSet::new(vec![3.0, -4.0, 0.0], SpectrumKind::SingularValues);
        assert_eq!(s.values(), &[0.0, 3.0, 4.0]);
    }
}
