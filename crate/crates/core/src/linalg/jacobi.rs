use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

const MAX_SWEEPS: usize = 30;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations (unsorted).
pub fn jacobi_eigvals(a: &DenseMatrix) -> Result<Vec<f64>> {
    jacobi(a, false).map(|(v, _)| v)
}

/// Eigenvalues and eigenvectors by cyclic Jacobi. Column `k` of the returned
/// matrix is the eigenvector of value `k`.
pub fn jacobi_eigen(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    jacobi(a, true).map(|(v, q)| (v, q.expect("vectors requested")))
}

fn jacobi(a: &DenseMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<DenseMatrix>)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut q = want_vectors.then(|| DenseMatrix::identity(n));
    let scale = a.frobenius_norm();
    if n <= 1 || scale == 0.0 {
        let vals = (0..n).map(|i| m[(i, i)]).collect();
        return Ok((vals, q));
    }
    for _sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale * 1e-2 {
            let vals = (0..n).map(|i| m[(i, i)]).collect();
            return Ok((vals, q));
        }
        for p in 0..n - 1 {
            for r in p + 1..n {
                let apr = m[(p, r)];
                if apr.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[(r, r)] - m[(p, p)]) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                rotate(&mut m, p, r, c, s);
                if let Some(q) = q.as_mut() {
                    for k in 0..n {
                        let qp = q[(k, p)];
                        let qr = q[(k, r)];
                        q[(k, p)] = c * qp - s * qr;
                        q[(k, r)] = s * qp + c * qr;
                    }
                }
            }
        }
    }
    Err(Error::NoConvergence {
        algorithm: "cyclic Jacobi",
        iterations: MAX_SWEEPS,
    })
}

// m <- J^T m J with J the rotation in the (p, r) plane
fn rotate(m: &mut DenseMatrix, p: usize, r: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let mp = m[(k, p)];
        let mr = m[(k, r)];
        m[(k, p)] = c * mp - s * mr;
        m[(k, r)] = s * mp + c * mr;
    }
    for k in 0..n {
        let mp = m[(p, k)];
        let mr = m[(r, k)];
        m[(p, k)] = c * mp - s * mr;
        m[(r, k)] = s * mp + c * mr;
    }
    m[(p, r)] = 0.0;
    m[(r, p)] = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let mut v = jacobi_eigvals(&a).unwrap();
        v.sort_by(f64::total_cmp);
        assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvectors_satisfy_residual() {
        let n = 12;
        let a = DenseMatrix::from_fn(n, n, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let (vals, q) = jacobi_eigen(&a).unwrap();
        for k in 0..n {
            let v: Vec<f64> = (0..n).map(|i| q[(i, k)]).collect();
            let av = a.matvec(&v).unwrap();
            let res = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - vals[k] * y).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-12 * a.frobenius_norm());
        }
    }
}
