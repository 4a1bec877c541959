//! Finite difference matrices for 1D diffusion-type problems on [0, 1].
//!
//! Unless stated otherwise the mesh is `x_j = j h`, `h = 1/(n+1)`, and every
//! matrix is the one multiplying the unknowns after scaling the scheme by `h^2`.

use crate::builders::{fd_node_grid, toeplitz, GridMap};
use crate::error::{Error, Result};
use crate::linalg::BandedMatrix;
use crate::symbol::{Coefficient, TrigPoly};

fn mesh_h(n: usize) -> f64 {
    1.0 / (n + 1) as f64
}

fn require_n(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!("{what} needs n >= {min}, got {n}")));
    }
    Ok(())
}

/// `tridiag(-w_j, w_j + w_{j+1}, -w_{j+1})` from interval weights `w_1..w_{n+1}`.
fn interval_weighted(w: &[f64]) -> Result<BandedMatrix> {
    let n = w.len() - 1;
    let diag: Vec<f64> = (0..n).map(|j| w[j] + w[j + 1]).collect();
    let off: Vec<f64> = (1..n).map(|j| -w[j]).collect();
    BandedMatrix::tridiagonal(&off, &diag, &off)
}

/// Central scheme for `-(a u')'`: diagonal `a(x_{j-1/2}) + a(x_{j+1/2})`,
/// off-diagonals `-a(x_{j+1/2})`.
pub fn fd_diffusion_matrix(a: &Coefficient, n: usize) -> Result<BandedMatrix> {
    require_n(n, 1, "diffusion matrix")?;
    let h = mesh_h(n);
    let w: Vec<f64> = (0..=n).map(|k| a.eval((k as f64 + 0.5) * h)).collect();
    interval_weighted(&w)
}

/// `Z_n = (h/2) tridiag(-b_j, 0, b_j) + h^2 diag(c_j)`, row `j` sampled at `x_j`.
pub fn fd_convection_reaction(b: &Coefficient, c: &Coefficient, n: usize) -> Result<BandedMatrix> {
    require_n(n, 1, "convection-reaction matrix")?;
    let h = mesh_h(n);
    let mut z = BandedMatrix::zeros(n, 1, 1)?;
    for i in 0..n {
        let x = (i + 1) as f64 * h;
        let (bi, ci) = (b.eval(x), c.eval(x));
        z.set(i, i, h * h * ci);
        if i > 0 {
            z.set(i, i - 1, -0.5 * h * bi);
        }
        if i + 1 < n {
            z.set(i, i + 1, 0.5 * h * bi);
        }
    }
    Ok(z)
}

/// Correction from the one-sided Neumann closure: two nonzero corner entries.
pub fn fd_neumann_correction(a: &Coefficient, b: &Coefficient, n: usize) -> Result<BandedMatrix> {
    require_n(n, 1, "Neumann correction")?;
    let h = mesh_h(n);
    let mut r = BandedMatrix::zeros(n, 0, 0)?;
    r.add_to(0, 0, -a.eval(0.5 * h) - 0.5 * h * b.eval(h));
    r.add_to(n - 1, n - 1, -a.eval((n as f64 + 0.5) * h) + 0.5 * h * b.eval(n as f64 * h));
    Ok(r)
}

fn node_samples(a: &Coefficient, n: usize) -> Vec<f64> {
    let h = mesh_h(n);
    (1..=n).map(|j| a.eval(j as f64 * h)).collect()
}

/// Non-divergence diffusion `diag(a_j) T_n(2 - 2cos)`.
pub fn fd_nondiv_diffusion(a: &Coefficient, n: usize) -> Result<BandedMatrix> {
    require_n(n, 1, "non-divergence diffusion")?;
    toeplitz(&TrigPoly::laplacian(), n)?.scale_rows(&node_samples(a, n))
}

/// Symmetric companion `S_n(a) o T_n(2 - 2cos)` on the FD nodes.
pub fn fd_nondiv_symmetrized(a: &Coefficient, n: usize) -> Result<BandedMatrix> {
    require_n(n, 1, "non-divergence diffusion")?;
    crate::builders::arrow_hadamard_toeplitz(a, &fd_node_grid(n)?, &TrigPoly::laplacian())
}

/// Fourth-order diffusion: `a_j (1,-16,30,-16,1)/12` inside, `a_j (-1,2,-1)`
/// in the first and last rows.
pub fn fd_fourth_order_diffusion(a: &Coefficient, n: usize) -> Result<BandedMatrix> {
    require_n(n, 4, "fourth-order scheme")?;
    let d = node_samples(a, n);
    let stencil = [1.0, -16.0, 30.0, -16.0, 1.0];
    let mut k = BandedMatrix::zeros(n, 2, 2)?;
    k.set(0, 0, 2.0 * d[0]);
    k.set(0, 1, -d[0]);
    k.set(n - 1, n - 2, -d[n - 1]);
    k.set(n - 1, n - 1, 2.0 * d[n - 1]);
    for i in 1..n - 1 {
        for (s, w) in stencil.iter().enumerate() {
            let j = i as isize + s as isize - 2;
            if (0..n as isize).contains(&j) {
                k.set(i, j as usize, d[i] * w / 12.0);
            }
        }
    }
    Ok(k)
}

/// Backward-difference convection plus three-point averaged reaction.
pub fn fd_fourth_order_lower(b: &Coefficient, c: &Coefficient, n: usize) -> Result<BandedMatrix> {
    require_n(n, 4, "fourth-order scheme")?;
    let h = mesh_h(n);
    let mut z = BandedMatrix::zeros(n, 1, 1)?;
    for i in 0..n {
        let x = (i + 1) as f64 * h;
        let (bi, ci) = (b.eval(x), c.eval(x));
        let r = h * h / 3.0 * ci;
        z.set(i, i, h * bi + r);
        if i > 0 {
            z.set(i, i - 1, -h * bi + r);
        }
        if i + 1 < n {
            z.set(i, i + 1, r);
        }
    }
    Ok(z)
}

/// `K_n = K~_n + R_n + N_n` with `K~_n = S_n(a) o T_n(p)`, `R_n` the two
/// boundary rows and `N_n` the interior remainder.
#[derive(Clone, Debug)]
pub struct FourthOrderSplit {
    pub k: BandedMatrix,
    pub k_tilde: BandedMatrix,
    pub r: BandedMatrix,
    pub rest: BandedMatrix,
}

pub fn fd_fourth_order_split(a: &Coefficient, n: usize) -> Result<FourthOrderSplit> {
    let k = fd_fourth_order_diffusion(a, n)?;
    let k_tilde =
        crate::builders::arrow_hadamard_toeplitz(a, &fd_node_grid(n)?, &TrigPoly::fourth_order_p())?;
    let d = node_samples(a, n);
    let mut r = BandedMatrix::zeros(n, 2, 2)?;
    let (a1, am2, am1, an) = (d[0], d[n - 3], d[n - 2], d[n - 1]);
    r.set(0, 0, -6.0 * a1 / 12.0);
    r.set(0, 1, 4.0 * a1 / 12.0);
    r.set(0, 2, -a1 / 12.0);
    r.set(n - 1, n - 3, -am2 / 12.0);
    r.set(n - 1, n - 2, (16.0 * am1 - 12.0 * an) / 12.0);
    r.set(n - 1, n - 1, -6.0 * an / 12.0);
    let rest = k.sub(&k_tilde)?.sub(&r)?;
    Ok(FourthOrderSplit { k, k_tilde, r, rest })
}

/// Fourth-derivative scheme `D_n(a) T_n(q)` on the grid `x_{i+1} = (i+1)/(n+3)`.
/// Returned as the diagonal samples and the Toeplitz factor.
pub fn fd_fourth_derivative_factors(a: &Coefficient, n: usize) -> Result<(Vec<f64>, BandedMatrix)> {
    require_n(n, 5, "fourth-derivative scheme")?;
    let h = 1.0 / (n + 3) as f64;
    let d: Vec<f64> = (1..=n).map(|i| a.eval((i + 1) as f64 * h)).collect();
    Ok((d, toeplitz(&TrigPoly::fourth_derivative_q(), n)?))
}

pub fn fd_fourth_derivative_matrix(a: &Coefficient, n: usize) -> Result<BandedMatrix> {
    let (d, t) = fd_fourth_derivative_factors(a, n)?;
    t.scale_rows(&d)
}

/// Mapped-mesh diffusion with `x_j = G(j/(n+1))` and `h_j = x_j - x_{j-1}`.
/// Each interval contributes `a(midpoint)/h_j`, which makes the matrix
/// exactly symmetric.
pub fn fd_nonuniform_matrix(a: &Coefficient, map: &GridMap, n: usize) -> Result<BandedMatrix> {
    require_n(n, 1, "non-uniform scheme")?;
    let x: Vec<f64> = (0..=n + 1).map(|j| map.eval(j as f64 / (n + 1) as f64)).collect();
    let mut w = Vec::with_capacity(n + 1);
    for k in 1..=n + 1 {
        let hk = x[k] - x[k - 1];
        if !(hk > 0.0) {
            return Err(Error::MapNotIncreasing { step: k, value: hk });
        }
        w.push(a.eval(x[k - 1] + 0.5 * hk) / hk);
    }
    interval_weighted(&w)
}

/// `(1/(n+1)) A_{G,n} - D_n(a(G)/G') T_n(2 - 2cos)` on the nodes `j/(n+1)`.
pub fn fd_nonuniform_defect(a: &Coefficient, map: &GridMap, n: usize) -> Result<BandedMatrix> {
    let scaled = fd_nonuniform_matrix(a, map, n)?.scale(mesh_h(n));
    let d: Vec<f64> = (1..=n)
        .map(|j| {
            let xh = j as f64 * mesh_h(n);
            a.eval(map.eval(xh)) / map.derivative(xh)
        })
        .collect();
    scaled.sub(&toeplitz(&TrigPoly::laplacian(), n)?.scale_rows(&d)?)
}
