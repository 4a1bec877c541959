use crate::builders::Grid;
use crate::error::{Error, Result};
use crate::linalg::{BandedMatrix, DenseMatrix};
use crate::symbol::{Coefficient, TrigPoly};

/// `T_n(f) = [f_{i-j}]`. Fourier coefficients beyond `n - 1` do not fit and
/// are dropped.
pub fn toeplitz(f: &TrigPoly, n: usize) -> Result<BandedMatrix> {
    if !f.has_real_coeffs() {
        return Err(Error::ComplexToeplitz);
    }
    let (re, _) = toeplitz_parts(f, n)?;
    Ok(re)
}

/// Real and imaginary parts of `T_n(f)` for any trigonometric polynomial.
pub fn toeplitz_parts(f: &TrigPoly, n: usize) -> Result<(BandedMatrix, BandedMatrix)> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix size must be positive".into()));
    }
    let r = f.degree().min(n - 1);
    let mut re = BandedMatrix::zeros(n, r, r)?;
    let mut im = BandedMatrix::zeros(n, r, r)?;
    for i in 0..n {
        for j in i.saturating_sub(r)..(i + r + 1).min(n) {
            let c = f.coeff(i as isize - j as isize);
            re.set(i, j, c.re);
            im.set(i, j, c.im);
        }
    }
    Ok((re, im))
}

/// `D_n(a) = diag(a(x_i))`.
pub fn diag_sampling(a: &Coefficient, grid: &Grid) -> Result<BandedMatrix> {
    let d: Vec<f64> = grid.points().iter().map(|&x| a.eval(x)).collect();
    BandedMatrix::from_diagonal(&d)
}

/// Arrow-shaped sampling matrix `S_ij = a(x_{min(i,j)})`.
pub fn arrow_sampling(a: &Coefficient, grid: &Grid) -> DenseMatrix {
    let d: Vec<f64> = grid.points().iter().map(|&x| a.eval(x)).collect();
    let n = d.len();
    DenseMatrix::from_fn(n, n, |i, j| d[i.min(j)])
}

/// `S_n(a) o T_n(f)` kept banded: only the band of `T_n(f)` survives the
/// Hadamard product.
pub fn arrow_hadamard_toeplitz(a: &Coefficient, grid: &Grid, f: &TrigPoly) -> Result<BandedMatrix> {
    let t = toeplitz(f, grid.n())?;
    let d: Vec<f64> = grid.points().iter().map(|&x| a.eval(x)).collect();
    let mut out = t.clone();
    for i in 0..t.n() {
        for j in t.row_range(i) {
            out.set(i, j, d[i.min(j)] * t.get(i, j));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{fd_node_grid, uniform_grid};

    #[test]
    fn laplacian_n3() {
        let t = toeplitz(&TrigPoly::laplacian(), 3).unwrap().to_dense();
        let expect = [[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t[(i, j)], expect[i][j]);
            }
        }
    }

    #[test]
    fn sine_gives_skew_h() {
        // -i T_n(sin) = (1/2) tridiag(-1, 0, 1)
        let (re, im) = toeplitz_parts(&TrigPoly::sin(), 5).unwrap();
        assert_eq!(re.max_abs(), 0.0);
        for i in 0..5 {
            for j in 0..5 {
                let expect = if j == i + 1 {
                    0.5
                } else if i == j + 1 {
                    -0.5
                } else {
                    0.0
                };
                // -i * (i * im) = im
                assert_eq!(im.get(i, j), expect);
            }
        }
        assert_eq!(toeplitz(&TrigPoly::sin(), 5), Err(Error::ComplexToeplitz));
    }

    #[test]
    fn constant_gives_scaled_identity() {
        let t = toeplitz(&TrigPoly::constant(2.5), 2).unwrap().to_dense();
        assert_eq!(t.to_rows(), vec![vec![2.5, 0.0], vec![0.0, 2.5]]);
    }

    #[test]
    fn arrow_matrix_for_x() {
        let s = arrow_sampling(&Coefficient::x(), &uniform_grid(3).unwrap());
        let t = 1.0 / 3.0;
        let u = 2.0 / 3.0;
        let expect = [[t, t, t], [t, u, u], [t, u, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((s[(i, j)] - expect[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn unit_sampling() {
        let g = uniform_grid(4).unwrap();
        assert_eq!(diag_sampling(&Coefficient::one(), &g).unwrap(), BandedMatrix::identity(4).unwrap());
        assert!(arrow_sampling(&Coefficient::one(), &g).as_slice().iter().all(|&v| v == 1.0));
        assert_eq!(diag_sampling(&Coefficient::x(), &g).unwrap().get(0, 0), 0.25);
    }

    #[test]
    fn banded_hadamard_matches_dense() {
        let g = fd_node_grid(7).unwrap();
        let f = TrigPoly::fourth_order_p();
        let banded = arrow_hadamard_toeplitz(&Coefficient::exp(), &g, &f).unwrap().to_dense();
        let dense = arrow_sampling(&Coefficient::exp(), &g)
            .hadamard(&toeplitz(&f, 7).unwrap().to_dense())
            .unwrap();
        assert_eq!(banded, dense);
    }
}
