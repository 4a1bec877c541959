use crate::error::Result;
use crate::linalg::{bidiagonalize, tridiag_eigvals, DenseMatrix, SpectralSet, SpectrumKind};

/// Singular values of a real matrix, sorted ascending.
///
/// The matrix is bidiagonalized and the singular values are read off the
/// symmetric tridiagonal Golub-Kahan form `[[0, B], [B^T, 0]]` after a
/// perfect shuffle, whose eigenvalues are `+-sigma_i`.
pub fn singular_values(a: &DenseMatrix) -> Result<SpectralSet> {
    let owned;
    let a = if a.rows() < a.cols() {
        owned = a.transpose();
        &owned
    } else {
        a
    };
    let n = a.cols();
    if n == 0 {
        return Ok(SpectralSet::new(Vec::new(), SpectrumKind::SingularValues));
    }
    let (d, f) = bidiagonalize(a)?;
    let mut off = Vec::with_capacity(2 * n - 1);
    for k in 0..n {
        off.push(d[k]);
        if k + 1 < n {
            off.push(f[k]);
        }
    }
    let mut vals = tridiag_eigvals(&vec![0.0; 2 * n], &off)?;
    vals.sort_by(f64::total_cmp);
    let top: Vec<f64> = vals[n..].iter().map(|v| v.abs()).collect();
    Ok(SpectralSet::new(top, SpectrumKind::SingularValues))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_with_negative_entry() {
        let a = DenseMatrix::from_diag(&[3.0, -4.0]);
        let s = singular_values(&a).unwrap();
        assert!((s.values()[0] - 3.0).abs() < 1e-14 && (s.values()[1] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix() {
        let s = singular_values(&DenseMatrix::zeros(3, 3)).unwrap();
        assert_eq!(s.values(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn wide_matrix_uses_transpose() {
        let a = DenseMatrix::from_rows(&[vec![3.0, 0.0, 4.0]]).unwrap();
        let s = singular_values(&a).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.values()[0] - 5.0).abs() < 1e-14);
    }
}
