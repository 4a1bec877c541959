use crate::error::{Error, Result};
use crate::linalg::{singular_values, DenseMatrix};

/// p-norm of a vector of singular values; `p = f64::INFINITY` gives the max.
pub fn schatten_from_values(sigma: &[f64], p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("Schatten norm needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(sigma.iter().fold(0.0, |m, s| m.max(s.abs())));
    }
    let scale = sigma.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = sigma.iter().map(|s| (s.abs() / scale).powf(p)).sum();
    Ok(scale * sum.powf(1.0 / p))
}

/// Schatten p-norm, the p-norm of the singular value vector.
pub fn schatten_norm(a: &DenseMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("Schatten norm needs p >= 1, got {p}")));
    }
    if p == 2.0 {
        return Ok(a.frobenius_norm());
    }
    let s = singular_values(a)?;
    schatten_from_values(s.values(), p)
}

pub fn spectral_norm(a: &DenseMatrix) -> Result<f64> {
    schatten_norm(a, f64::INFINITY)
}

/// sqrt(|A|_1 |A|_inf), an upper bound for the spectral norm.
pub fn two_norm_bound(a: &DenseMatrix) -> f64 {
    (a.norm_1() * a.norm_inf()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_norm_of_diagonal() {
        let a = DenseMatrix::from_diag(&[1.0, -2.0, 3.0]);
        assert!((schatten_norm(&a, 1.0).unwrap() - 6.0).abs() < 1e-13);
        assert!((schatten_norm(&a, f64::INFINITY).unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_small_p() {
        let a = DenseMatrix::identity(2);
        assert!(schatten_norm(&a, 0.5).is_err());
        assert!(schatten_norm(&a, f64::NAN).is_err());
    }

    #[test]
    fn frobenius_identity() {
        let a = DenseMatrix::from_fn(6, 6, |i, j| (i as f64 - j as f64).sin());
        let s = singular_values(&a).unwrap();
        let via_sigma = schatten_from_values(s.values(), 2.0).unwrap();
        assert!((via_sigma - a.frobenius_norm()).abs() < 1e-12 * a.frobenius_norm());
    }
}
