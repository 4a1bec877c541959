use crate::error::{Error, Result};
use crate::linalg::{BandedMatrix, DenseMatrix, SYMMETRY_TOL};

/// Banded Cholesky factor `A = L L^T`, with `L` lower triangular of the
/// same lower bandwidth as `A`.
#[derive(Clone, Debug)]
pub struct BandedCholesky {
    l: BandedMatrix,
}

impl BandedCholesky {
    pub fn factor(a: &BandedMatrix) -> Result<Self> {
        a.check_symmetric(SYMMETRY_TOL)?;
        let n = a.n();
        let p = a.lower().max(a.upper());
        let mut l = BandedMatrix::zeros(n, p, 0)?;
        let diag_scale = (0..n).fold(0.0f64, |m, i| m.max(a.get(i, i).abs()));
        let floor = 1e-14 * diag_scale;
        for j in 0..n {
            let k0 = j.saturating_sub(p);
            let mut s = a.get(j, j);
            for k in k0..j {
                s -= l.get(j, k).powi(2);
            }
            if !(s > floor) {
                return Err(Error::NotPositiveDefinite { row: j, pivot: s });
            }
            let ljj = s.sqrt();
            l.set(j, j, ljj);
            for i in j + 1..(j + p + 1).min(n) {
                let mut s = a.get(i, j);
                for k in i.saturating_sub(p)..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / ljj);
            }
        }
        Ok(Self { l })
    }

    pub fn factor_matrix(&self) -> &BandedMatrix {
        &self.l
    }

    pub fn n(&self) -> usize {
        self.l.n()
    }

    /// Solves `L y = b` in place.
    pub fn forward_in_place(&self, b: &mut [f64]) {
        let p = self.l.lower();
        for i in 0..b.len() {
            let mut s = b[i];
            for k in i.saturating_sub(p)..i {
                s -= self.l.get(i, k) * b[k];
            }
            b[i] = s / self.l.get(i, i);
        }
    }

    /// Solves `L^T x = y` in place.
    pub fn backward_in_place(&self, y: &mut [f64]) {
        let n = y.len();
        let p = self.l.lower();
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + p + 1).min(n) {
                s -= self.l.get(k, i) * y[k];
            }
            y[i] = s / self.l.get(i, i);
        }
    }

    pub fn solve_vec(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.check_len(b.len())?;
        let mut x = b.to_vec();
        self.forward_in_place(&mut x);
        self.backward_in_place(&mut x);
        Ok(x)
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        self.map_columns(b, |c, col| {
            c.forward_in_place(col);
            c.backward_in_place(col);
        })
    }

    /// `L^{-1} B`.
    pub fn forward_solve(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        self.map_columns(b, |c, col| c.forward_in_place(col))
    }

    fn map_columns(
        &self,
        b: &DenseMatrix,
        f: impl Fn(&Self, &mut [f64]),
    ) -> Result<DenseMatrix> {
        self.check_len(b.rows())?;
        let mut out = b.transpose();
        for j in 0..out.rows() {
            f(self, out.row_mut(j));
        }
        Ok(out.transpose())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {len} for n = {}",
                self.n()
            )));
        }
        Ok(())
    }
}

/// Solves `A X = B` for symmetric positive definite banded `A`.
pub fn solve_spd_banded(a: &BandedMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    BandedCholesky::factor(a)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_identity() {
        let a = BandedMatrix::from_diagonal(&[2.0; 3]).unwrap();
        let x = solve_spd_banded(&a, &DenseMatrix::identity(3)).unwrap();
        let err = x.sub(&DenseMatrix::identity(3).scale(0.5)).unwrap().max_abs();
        assert!(err < 1e-15);
    }

    #[test]
    fn laplacian_inverse_first_column() {
        let n = 4;
        let a = BandedMatrix::tridiagonal(&[-1.0; 3], &[2.0; 4], &[-1.0; 3]).unwrap();
        let mut e1 = DenseMatrix::zeros(n, 1);
        e1[(0, 0)] = 1.0;
        let x = solve_spd_banded(&a, &e1).unwrap();
        for i in 0..n {
            let exact = (n - i) as f64 / (n + 1) as f64;
            assert!((x[(i, 0)] - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = BandedMatrix::tridiagonal(&[1.0], &[1.0, 1.0], &[1.0]).unwrap();
        assert!(matches!(
            BandedCholesky::factor(&a),
            Err(Error::NotPositiveDefinite { row: 1, .. })
        ));
    }

    #[test]
    fn nonsymmetric_rejected() {
        let a = BandedMatrix::tridiagonal(&[1.0], &[3.0, 3.0], &[0.0]).unwrap();
        assert!(matches!(
            BandedCholesky::factor(&a),
            Err(Error::NotSymmetric { .. })
        ));
    }
}
