//! Linear finite elements on the uniform mesh `x_i = i/(n+1)` with hat basis
//! functions `phi_1..phi_n`.

use crate::error::{Error, Result};
use crate::linalg::{BandedCholesky, BandedMatrix, DenseMatrix};
use crate::quadrature::gauss_legendre;
use crate::symbol::Coefficient;

pub const DEFAULT_QUAD_ORDER: usize = 5;

// geometric grading toward declared singular points
const GRADING_RATIO: f64 = 0.5;
const GRADING_LEVELS: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Form {
    // g phi_j' phi_i'
    Stiffness,
    // g phi_j phi_i
    Mass,
    // g phi_j' phi_i
    Convection,
}

/// Gauss nodes and weights covering `[l, r]`, refined geometrically toward
/// every singular point inside it. Nodes never coincide with those points.
fn element_rule(l: f64, r: f64, order: usize, singular: &[f64]) -> Vec<(f64, f64)> {
    let (ref_x, ref_w) = gauss_legendre(order);
    let mut panels: Vec<(f64, f64)> = Vec::new();
    let mut cuts: Vec<f64> = singular.iter().copied().filter(|&s| s >= l && s <= r).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut breaks = vec![l];
    breaks.extend(cuts.iter().copied().filter(|&s| s > l && s < r));
    breaks.push(r);
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let at_a = cuts.contains(&a);
        let at_b = cuts.contains(&b);
        if at_a && at_b {
            let m = 0.5 * (a + b);
            graded(a, m, &mut panels);
            graded(b, m, &mut panels);
        } else if at_a {
            graded(a, b, &mut panels);
        } else if at_b {
            graded(b, a, &mut panels);
        } else {
            refine_near(a, b, singular, &mut panels);
        }
    }
    let mut rule = Vec::with_capacity(panels.len() * order);
    for (a, b) in panels {
        let (c, hw) = (0.5 * (a + b), 0.5 * (b - a));
        for (x, w) in ref_x.iter().zip(&ref_w) {
            rule.push((c + hw * x, hw.abs() * w));
        }
    }
    rule
}

/// Bisects `[a, b]` until no panel is longer than its distance to the
/// nearest singular point.
fn refine_near(a: f64, b: f64, singular: &[f64], panels: &mut Vec<(f64, f64)>) {
    let dist = singular
        .iter()
        .map(|&s| if s < a { a - s } else if s > b { s - b } else { 0.0 })
        .fold(f64::INFINITY, f64::min);
    if b - a > dist && dist > 0.0 {
        let m = 0.5 * (a + b);
        refine_near(a, m, singular, panels);
        refine_near(m, b, singular, panels);
    } else {
        panels.push((a, b));
    }
}

/// Panels between singular point `s` and `far`, shrinking geometrically toward `s`.
fn graded(s: f64, far: f64, panels: &mut Vec<(f64, f64)>) {
    let len = far - s;
    let mut outer = 1.0;
    for _ in 0..GRADING_LEVELS {
        let inner = outer * GRADING_RATIO;
        let (p, q) = (s + inner * len, s + outer * len);
        panels.push((p.min(q), p.max(q)));
        outer = inner;
    }
    let q = s + outer * len;
    panels.push((s.min(q), s.max(q)));
}

fn assemble(g: &Coefficient, n: usize, order: usize, form: Form) -> Result<BandedMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix size must be positive".into()));
    }
    if order == 0 {
        return Err(Error::InvalidArgument("quadrature order must be at least 1".into()));
    }
    let h = 1.0 / (n + 1) as f64;
    let mut m = BandedMatrix::zeros(n, 1, 1)?;
    for e in 0..=n {
        let (l, r) = (e as f64 * h, (e + 1) as f64 * h);
        // local dofs: left node e (phi decreasing), right node e + 1 (phi increasing)
        let mut local = [[0.0f64; 2]; 2];
        for (x, w) in element_rule(l, r, order, g.singular_points()) {
            let gx = g.eval(x);
            if !gx.is_finite() {
                continue;
            }
            let val = [(r - x) / h, (x - l) / h];
            let der = [-1.0 / h, 1.0 / h];
            for (p, row) in local.iter_mut().enumerate() {
                for (q, entry) in row.iter_mut().enumerate() {
                    let v = match form {
                        Form::Stiffness => der[q] * der[p],
                        Form::Mass => val[q] * val[p],
                        Form::Convection => der[q] * val[p],
                    };
                    *entry += w * gx * v;
                }
            }
        }
        let dofs = [e.checked_sub(1), if e < n { Some(e) } else { None }];
        for (p, di) in dofs.iter().enumerate() {
            for (q, dj) in dofs.iter().enumerate() {
                if let (Some(i), Some(j)) = (di, dj) {
                    m.add_to(*i, *j, local[p][q]);
                }
            }
        }
    }
    Ok(m)
}

/// `K_n(g) = [int g phi_j' phi_i']`.
pub fn fe_stiffness(g: &Coefficient, n: usize, quad_order: usize) -> Result<BandedMatrix> {
    let k = assemble(g, n, quad_order, Form::Stiffness)?;
    Ok(symmetrize_banded(k))
}

/// `M_n(g) = [int g phi_j phi_i]`.
pub fn fe_mass(g: &Coefficient, n: usize, quad_order: usize) -> Result<BandedMatrix> {
    let m = assemble(g, n, quad_order, Form::Mass)?;
    Ok(symmetrize_banded(m))
}

/// `[int b phi_j' phi_i]`; `b = 1` gives `(1/2) tridiag(-1, 0, 1)`.
pub fn fe_convection(b: &Coefficient, n: usize, quad_order: usize) -> Result<BandedMatrix> {
    assemble(b, n, quad_order, Form::Convection)
}

// element assembly adds identical terms to (i,j) and (j,i), but in orders
// that can differ in the last bit
fn symmetrize_banded(mut a: BandedMatrix) -> BandedMatrix {
    let n = a.n();
    for i in 1..n {
        let v = 0.5 * (a.get(i, i - 1) + a.get(i - 1, i));
        a.set(i, i - 1, v);
        a.set(i - 1, i, v);
    }
    a
}

/// Stiffness matrix of the full convection-diffusion-reaction form
/// `K_n(a) + [int b phi_j' phi_i] + M_n(c)`.
pub fn fe_cdr_matrix(
    a: &Coefficient,
    b: &Coefficient,
    c: &Coefficient,
    n: usize,
    quad_order: usize,
) -> Result<BandedMatrix> {
    let mut m = fe_stiffness(a, n, quad_order)?;
    if !b.is_zero() {
        m = m.add(&fe_convection(b, n, quad_order)?)?;
    }
    if !c.is_zero() {
        m = m.add(&fe_mass(c, n, quad_order)?)?;
    }
    Ok(m)
}

/// Negative Schur complement `rho M_n + H_n^T K_n(a)^{-1} H_n`, with
/// `H_n = [int phi_j' phi_i]` and `M_n = M_n(1)`.
///
/// With `K_n = L L^T` the second term is `Y^T Y` for `Y = L^{-1} H_n`, which
/// keeps the result symmetric; the last-bit asymmetry of the product is
/// removed explicitly.
pub fn fe_schur_complement(a: &Coefficient, rho: f64, n: usize, quad_order: usize) -> Result<DenseMatrix> {
    let k = fe_stiffness(a, n, quad_order)?;
    let chol = BandedCholesky::factor(&k)?;
    let hmat = fe_convection(&Coefficient::one(), n, quad_order)?;
    let y = chol.forward_solve(&hmat.to_dense())?;
    let gram = y.transpose().matmul(&y)?;
    let mass = fe_mass(&Coefficient::one(), n, quad_order)?.scale(rho).to_dense();
    let s = gram.add(&mass)?;
    Ok(DenseMatrix::from_fn(n, n, |i, j| 0.5 * (s[(i, j)] + s[(j, i)])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::solve_spd_banded;
    use crate::builders::toeplitz;
    use crate::symbol::TrigPoly;

    /// Midpoint rule on a fine uniform partition, independent of the assembly code.
    fn oracle(g: impl Fn(f64) -> f64, n: usize, i: usize, j: usize, form: Form) -> f64 {
        let h = 1.0 / (n + 1) as f64;
        let hat = |k: usize, x: f64| (1.0 - ((x - (k + 1) as f64 * h) / h).abs()).max(0.0);
        let dhat = |k: usize, x: f64| {
            let c = (k + 1) as f64 * h;
            if (x - c).abs() >= h {
                0.0
            } else if x < c {
                1.0 / h
            } else {
                -1.0 / h
            }
        };
        // cells aligned with the elements so no cell straddles a kink
        let m = 20_000;
        let cell = h / m as f64;
        (0..=n)
            .flat_map(|e| (0..m).map(move |s| e as f64 * h + (s as f64 + 0.5) * cell))
            .map(|x| {
                let v = match form {
                    Form::Stiffness => dhat(j, x) * dhat(i, x),
                    Form::Mass => hat(j, x) * hat(i, x),
                    Form::Convection => dhat(j, x) * hat(i, x),
                };
                g(x) * v * cell
            })
            .sum()
    }

    #[test]
    fn unit_stiffness_is_scaled_laplacian() {
        let n = 6;
        let k = fe_stiffness(&Coefficient::one(), n, DEFAULT_QUAD_ORDER).unwrap();
        let t = toeplitz(&TrigPoly::laplacian(), n).unwrap().scale((n + 1) as f64);
        assert!(k.sub(&t).unwrap().max_abs() < 1e-12);
        assert_eq!(k.asymmetry(), 0.0);
    }

    #[test]
    fn unit_mass() {
        let n = 5;
        let h = 1.0 / 6.0;
        let m = fe_mass(&Coefficient::one(), n, DEFAULT_QUAD_ORDER).unwrap();
        let t = toeplitz(&TrigPoly::two_plus_cos(), n).unwrap().scale(h / 3.0);
        assert!(m.sub(&t).unwrap().max_abs() < 1e-15);
        let row: f64 = (0..n).map(|j| m.get(2, j)).sum::<f64>() * 6.0 / h;
        assert!((row - 6.0).abs() < 1e-12);
    }

    #[test]
    fn unit_convection_is_h() {
        let n = 5;
        let c = fe_convection(&Coefficient::one(), n, DEFAULT_QUAD_ORDER).unwrap();
        for i in 0..n {
            for j in 0..n {
                let e = if j == i + 1 {
                    0.5
                } else if i == j + 1 {
                    -0.5
                } else {
                    0.0
                };
                assert!((c.get(i, j) - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn single_element_pair_with_x() {
        // K_11 = (1/h^2) int_0^{2h} x dx = 2 for n = 1
        let k = fe_stiffness(&Coefficient::x(), 1, DEFAULT_QUAD_ORDER).unwrap();
        assert!((k.get(0, 0) - 2.0).abs() < 1e-13);
        let o = oracle(|x| x, 1, 0, 0, Form::Stiffness);
        assert!((k.get(0, 0) - o).abs() < 1e-8);
    }

    #[test]
    fn polynomial_coefficients_match_oracle() {
        let n = 10;
        let g = Coefficient::x();
        let cubic = Coefficient::new("cubic", crate::symbol::Regularity::Continuous, |x| {
            1.0 + x - 2.0 * x * x * x
        });
        for (form, m) in [
            (Form::Stiffness, fe_stiffness(&cubic, n, 5).unwrap()),
            (Form::Mass, fe_mass(&g, n, 5).unwrap()),
            (Form::Convection, fe_convection(&cubic, n, 5).unwrap()),
        ] {
            for i in 0..n {
                for j in i.saturating_sub(1)..(i + 2).min(n) {
                    let f: &Coefficient = if form == Form::Mass { &g } else { &cubic };
                    let o = oracle(|x| f.eval(x), n, i, j, form);
                    assert!((m.get(i, j) - o).abs() < 1e-8, "{form:?} ({i},{j})");
                }
            }
            assert_eq!(m.get(0, 5), 0.0);
        }
    }

    #[test]
    fn singular_coefficient_integrates() {
        // K_n(|x - 1/2|^{-1/4}) with n odd puts 1/2 on a node
        let g = Coefficient::abs_power_singular(0.5, 0.25);
        for n in [3, 4] {
            let k = fe_stiffness(&g, n, DEFAULT_QUAD_ORDER).unwrap();
            assert!(k.is_finite());
            // trace equals (n+1)^2 int g (sum over elements of (phi')^2 weights)
            let h = 1.0 / (n + 1) as f64;
            let exact_l1 = 2.0 * (4.0 / 3.0) * 0.5f64.powf(0.75);
            let interior: f64 = k.trace();
            // every element except the two boundary ones is counted twice
            let boundary = |l: f64, r: f64| {
                let f = |x: f64| (x - 0.5).signum() * (4.0 / 3.0) * (x - 0.5).abs().powf(0.75);
                f(r) - f(l)
            };
            let expect = (2.0 * exact_l1 - boundary(0.0, h) - boundary(1.0 - h, 1.0)) / (h * h);
            assert!((interior - expect).abs() < 1e-8 * expect, "{interior} vs {expect}");
        }
    }

    #[test]
    fn schur_matches_dense_oracle() {
        let n = 2;
        let s = fe_schur_complement(&Coefficient::one(), 0.0, n, DEFAULT_QUAD_ORDER).unwrap();
        let k = fe_stiffness(&Coefficient::one(), n, DEFAULT_QUAD_ORDER).unwrap();
        let hm = fe_convection(&Coefficient::one(), n, DEFAULT_QUAD_ORDER).unwrap().to_dense();
        let x = solve_spd_banded(&k, &hm).unwrap();
        let o = hm.transpose().matmul(&x).unwrap();
        assert!(s.sub(&o).unwrap().max_abs() < 1e-14);
        assert_eq!(s.asymmetry(), 0.0);
        let s = fe_schur_complement(&Coefficient::exp(), 1.5, 40, DEFAULT_QUAD_ORDER).unwrap();
        assert_eq!(s.asymmetry(), 0.0);
    }

    #[test]
    fn schur_needs_spd_stiffness() {
        let neg = Coefficient::constant(-1.0);
        assert!(matches!(
            fe_schur_complement(&neg, 0.0, 4, DEFAULT_QUAD_ORDER),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }
}
