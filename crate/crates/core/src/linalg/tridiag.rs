use crate::error::{Error, Result};

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e.len() == d.len() - 1`), via implicit QL with
/// Wilkinson-type shifts. Values only, returned unsorted.
pub fn tridiag_eigvals(d: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if e.len() + 1 != n {
        return Err(Error::DimensionMismatch(format!(
            "tridiagonal with {} diagonal and {} off-diagonal entries",
            n,
            e.len()
        )));
    }
    let mut d = d.to_vec();
    // e[i] couples rows i and i+1; the trailing slot is scratch
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).collect();
    ql_implicit(&mut d, &mut e)?;
    Ok(d)
}

pub(crate) fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    let cap = 50 * n.max(1);
    let mut total = 0usize;
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            total += 1;
            if total > cap {
                return Err(Error::NoConvergence {
                    algorithm: "tridiagonal QL",
                    iterations: total,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            if iter % 10 == 0 {
                // exceptional shift to break a stagnating cycle
                g = d[m] - d[l] + e[l].abs();
            }
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn laplacian_closed_form() {
        let n = 8;
        let mut v = tridiag_eigvals(&vec![2.0; n], &vec![-1.0; n - 1]).unwrap();
        v.sort_by(f64::total_cmp);
        for (k, lam) in v.iter().enumerate() {
            let exact = 2.0 - 2.0 * (((k + 1) as f64) * PI / (n as f64 + 1.0)).cos();
            assert!((lam - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn split_matrix_keeps_blocks() {
        let v = tridiag_eigvals(&[1.0, 5.0, 3.0], &[0.0, 0.0]).unwrap();
        let mut v = v;
        v.sort_by(f64::total_cmp);
        assert_eq!(v, vec![1.0, 3.0, 5.0]);
    }

    #[test]
    fn one_by_one() {
        assert_eq!(tridiag_eigvals(&[7.0], &[]).unwrap(), vec![7.0]);
        assert!(tridiag_eigvals(&[1.0, 2.0], &[]).is_err());
    }

    #[test]
    fn large_n_runs() {
        let n = 5000;
        let v = tridiag_eigvals(&vec![2.0; n], &vec![-1.0; n - 1]).unwrap();
        let trace: f64 = v.iter().sum();
        assert!((trace - 2.0 * n as f64).abs() < 1e-8 * n as f64);
    }
}
