use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

// Householder vector v (in place) with (I - beta v v^T) x = alpha e_1.
// Returns (beta, alpha); beta = 0 when x is already a multiple of e_1.
fn reflector(x: &mut [f64]) -> (f64, f64) {
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return (0.0, 0.0);
    }
    let tail: f64 = x[1..].iter().map(|v| (v / scale).powi(2)).sum();
    if tail == 0.0 {
        return (0.0, x[0]);
    }
    let norm = scale * ((x[0] / scale).powi(2) + tail).sqrt();
    let alpha = -norm.copysign(x[0]);
    x[0] -= alpha;
    let vnorm2: f64 = x.iter().map(|v| v * v).sum();
    (2.0 / vnorm2, alpha)
}

/// Reduces a symmetric matrix to tridiagonal form by Householder similarity
/// transformations. Returns the diagonal and the off-diagonal.
pub fn tridiagonalize(a: &DenseMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let len = n - k - 1;
        let v = &mut v[..len];
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = m[(k + 1 + i, k)];
        }
        let (beta, alpha) = reflector(v);
        e[k] = alpha;
        if beta == 0.0 {
            e[k] = m[(k + 1, k)];
            continue;
        }
        // trailing block B <- H B H with H = I - beta v v^T
        let p = &mut p[..len];
        for i in 0..len {
            let row = &m.row(k + 1 + i)[k + 1..];
            p[i] = beta * row.iter().zip(v.iter()).map(|(x, y)| x * y).sum::<f64>();
        }
        let kk = 0.5 * beta * p.iter().zip(v.iter()).map(|(x, y)| x * y).sum::<f64>();
        for i in 0..len {
            p[i] -= kk * v[i];
        }
        for i in 0..len {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut m.row_mut(k + 1 + i)[k + 1..];
            for j in 0..len {
                row[j] -= vi * p[j] + wi * v[j];
            }
        }
    }
    let d = (0..n).map(|i| m[(i, i)]).collect();
    Ok((d, e))
}

/// Golub-Kahan bidiagonalization of an m x n matrix with m >= n.
/// Returns the diagonal `d` (length n) and superdiagonal `f` (length n - 1).
pub fn bidiagonalize(a: &DenseMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let (rows, cols) = (a.rows(), a.cols());
    if rows < cols {
        return Err(Error::DimensionMismatch(format!(
            "bidiagonalization needs rows >= cols, got {rows}x{cols}"
        )));
    }
    let mut m = a.clone();
    let mut d = vec![0.0; cols];
    let mut f = vec![0.0; cols.saturating_sub(1)];
    let mut u = vec![0.0; rows];
    let mut w = vec![0.0; cols.max(rows)];
    for k in 0..cols {
        // left reflector on column k, rows k..
        let len = rows - k;
        let u = &mut u[..len];
        for (i, ui) in u.iter_mut().enumerate() {
            *ui = m[(k + i, k)];
        }
        let (beta, alpha) = reflector(u);
        d[k] = if beta == 0.0 { m[(k, k)] } else { alpha };
        if beta != 0.0 {
            let w = &mut w[..cols - k];
            w.iter_mut().for_each(|x| *x = 0.0);
            for i in 0..len {
                let row = &m.row(k + i)[k..];
                for (wj, rj) in w.iter_mut().zip(row) {
                    *wj += u[i] * rj;
                }
            }
            for i in 0..len {
                let s = beta * u[i];
                let row = &mut m.row_mut(k + i)[k..];
                for (rj, wj) in row.iter_mut().zip(w.iter()) {
                    *rj -= s * wj;
                }
            }
        }
        if k + 2 > cols {
            continue;
        }
        // right reflector on row k, columns k+1..
        let len = cols - k - 1;
        let v = &mut w[..len];
        v.copy_from_slice(&m.row(k)[k + 1..]);
        let (beta, alpha) = reflector(v);
        f[k] = if beta == 0.0 { m[(k, k + 1)] } else { alpha };
        if beta != 0.0 {
            let v = v.to_vec();
            for i in k + 1..rows {
                let row = &mut m.row_mut(i)[k + 1..];
                let s = beta * row.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>();
                for (rj, vj) in row.iter_mut().zip(&v) {
                    *rj -= s * vj;
                }
            }
        }
    }
    Ok((d, f))
}
