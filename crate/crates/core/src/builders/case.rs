use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::builders::fd::*;
use crate::builders::fe::*;
use crate::builders::{toeplitz, GridMap};
use crate::error::{Error, Result};
use crate::linalg::{
    generalized_sym_eigvals, nonsym_eigvals, singular_values, sym_eigvals, BandedCholesky,
    BandedMatrix, DenseMatrix, Matrix, SpectralSet, SpectrumKind,
};
use crate::symbol::{Coefficient, Rect, SymbolExpr, TrigPoly};

/// Normalization factor applied to the matrix before comparing with the symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    One,
    InvNPlus1,
    NPlus1,
    InvNPlus1Squared,
}

impl Normalization {
    pub fn value(self, n: usize) -> f64 {
        let m = (n + 1) as f64;
        match self {
            Normalization::One => 1.0,
            Normalization::InvNPlus1 => 1.0 / m,
            Normalization::NPlus1 => m,
            Normalization::InvNPlus1Squared => 1.0 / (m * m),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Normalization::One => "1",
            Normalization::InvNPlus1 => "1/(n+1)",
            Normalization::NPlus1 => "n+1",
            Normalization::InvNPlus1Squared => "(n+1)^-2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    /// Similar to a symmetric matrix (positive diagonal scaling or an SPD pencil).
    Symmetrizable,
    Nonsymmetric,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::Symmetrizable => "symmetrizable",
            Symmetry::Nonsymmetric => "nonsymmetric",
        })
    }
}

/// Imaginary parts below this multiple of the matrix norm count as roundoff.
pub const REAL_SPECTRUM_TOL: f64 = 1e-7;

/// A built matrix in the form that makes its spectrum cheapest to compute.
#[derive(Clone, Debug)]
pub enum Assembled {
    Symmetric(Matrix),
    General(Matrix),
    /// `diag(d) * t` with `t` symmetric.
    DiagScaled { d: Vec<f64>, t: BandedMatrix },
    /// `M^{-1} K` given as the pair; `M` SPD.
    Pencil { k: BandedMatrix, m: BandedMatrix },
}

impl Assembled {
    pub fn n(&self) -> usize {
        match self {
            Assembled::Symmetric(a) | Assembled::General(a) => a.n(),
            Assembled::DiagScaled { t, .. } => t.n(),
            Assembled::Pencil { k, .. } => k.n(),
        }
    }

    /// Explicit matrix. For a pencil this forms `M^{-1} K` by Cholesky solves.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        match self {
            Assembled::Symmetric(a) | Assembled::General(a) => Ok(a.to_dense()),
            Assembled::DiagScaled { d, t } => Ok(t.scale_rows(d)?.to_dense()),
            Assembled::Pencil { k, m } => BandedCholesky::factor(m)?.solve(&k.to_dense()),
        }
    }

    /// Banded form when one exists (not for pencils).
    pub fn to_banded(&self) -> Option<BandedMatrix> {
        match self {
            Assembled::Symmetric(Matrix::Banded(b)) | Assembled::General(Matrix::Banded(b)) => {
                Some(b.clone())
            }
            Assembled::DiagScaled { d, t } => t.scale_rows(d).ok(),
            _ => None,
        }
    }

    /// Whether the spectrum is guaranteed real by structure.
    pub fn has_real_structure(&self) -> bool {
        match self {
            Assembled::Symmetric(_) | Assembled::Pencil { .. } => true,
            Assembled::DiagScaled { d, .. } => d.iter().all(|&v| v > 0.0),
            Assembled::General(_) => false,
        }
    }

    /// Eigenvalues of `alpha * A`, sorted ascending. Structured forms use
    /// symmetric solvers; a general matrix goes through the Hessenberg QR path
    /// and is rejected if its spectrum is not real.
    pub fn real_eigenvalues(&self, alpha: f64) -> Result<SpectralSet> {
        let s = match self {
            Assembled::Symmetric(a) => sym_eigvals(a)?,
            Assembled::DiagScaled { d, t } if d.iter().all(|&v| v > 0.0) => {
                let root: Vec<f64> = d.iter().map(|v| v.sqrt()).collect();
                sym_eigvals(&Matrix::Banded(t.scale_symmetric(&root)?))?
            }
            Assembled::Pencil { k, m } => generalized_sym_eigvals(k, m)?,
            _ => {
                let dense = self.to_dense()?;
                let vals = nonsym_eigvals(&dense)?;
                let scale = dense.norm_inf().max(f64::MIN_POSITIVE);
                let max_imag = vals.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
                if max_imag > REAL_SPECTRUM_TOL * scale {
                    return Err(Error::ComplexSpectrum { max_imag });
                }
                SpectralSet::new(vals.iter().map(|z| z.re).collect(), SpectrumKind::Eigenvalues)
            }
        };
        Ok(s.scaled(alpha))
    }

    /// Complex eigenvalues of `alpha * A` from the nonsymmetric solver.
    pub fn complex_eigenvalues(&self, alpha: f64) -> Result<Vec<Complex64>> {
        let vals = nonsym_eigvals(&self.to_dense()?)?;
        Ok(vals.into_iter().map(|z| z * alpha).collect())
    }

    /// Singular values of `alpha * A`.
    pub fn singular_values(&self, alpha: f64) -> Result<SpectralSet> {
        match self {
            Assembled::Symmetric(a) => {
                let e = sym_eigvals(a)?;
                Ok(SpectralSet::new(e.into_values(), SpectrumKind::SingularValues).scaled(alpha.abs()))
            }
            _ => Ok(singular_values(&self.to_dense()?)?.scaled(alpha.abs())),
        }
    }
}

type Builder = Arc<dyn Fn(usize) -> Result<Assembled> + Send + Sync>;

/// One matrix family with its normalization and predicted symbol.
#[derive(Clone)]
pub struct DiscretizationCase {
    name: String,
    description: String,
    symbol: SymbolExpr,
    symbol_label: String,
    normalization: Normalization,
    symmetry: Symmetry,
    coefficients: Vec<(String, String)>,
    quad_order: Option<usize>,
    quadrature_approximate: bool,
    bounded_symbol: bool,
    min_n: usize,
    builder: Builder,
}

impl DiscretizationCase {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn symbol(&self) -> &SymbolExpr {
        &self.symbol
    }

    /// Human-readable symbol, e.g. `a(x)(2-2cos(theta))`.
    pub fn symbol_label(&self) -> &str {
        &self.symbol_label
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn alpha(&self, n: usize) -> f64 {
        self.normalization.value(n)
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    /// `(role, coefficient name)` pairs.
    pub fn coefficients(&self) -> &[(String, String)] {
        &self.coefficients
    }

    pub fn quad_order(&self) -> Option<usize> {
        self.quad_order
    }

    /// True when FE entries involve a coefficient with integrable singularities.
    pub fn quadrature_approximate(&self) -> bool {
        self.quadrature_approximate
    }

    pub fn bounded_symbol(&self) -> bool {
        self.bounded_symbol
    }

    pub fn min_n(&self) -> usize {
        self.min_n
    }

    /// Domain for rearrangement and functionals: `[0,1] x [0,pi]` when the
    /// symbol is even in theta, else the full rectangle.
    pub fn symbol_rect(&self) -> Rect {
        if self.symbol.is_theta_even() {
            Rect::half()
        } else {
            Rect::full()
        }
    }

    pub fn build(&self, n: usize) -> Result<Assembled> {
        if n < self.min_n {
            return Err(Error::InvalidArgument(format!(
                "case {} needs n >= {}, got {n}",
                self.name, self.min_n
            )));
        }
        let a = (self.builder)(n)?;
        debug_assert_eq!(a.n(), n);
        Ok(a)
    }

    /// Registry listing line: `name | symbol | alpha=... | symmetry | description`.
    pub fn listing(&self) -> String {
        format!(
            "{} | {} | alpha={} | {} | {}",
            self.name,
            self.symbol_label,
            self.normalization.label(),
            self.symmetry,
            self.description
        )
    }
}

impl fmt::Debug for DiscretizationCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscretizationCase")
            .field("name", &self.name)
            .field("symbol", &self.symbol_label)
            .field("normalization", &self.normalization)
            .field("symmetry", &self.symmetry)
            .field("coefficients", &self.coefficients)
            .finish()
    }
}

struct Spec {
    name: &'static str,
    description: &'static str,
    symbol: SymbolExpr,
    symbol_label: String,
    normalization: Normalization,
    symmetry: Symmetry,
    coefficients: Vec<(&'static str, String)>,
}

fn make(spec: Spec, min_n: usize, builder: impl Fn(usize) -> Result<Assembled> + Send + Sync + 'static) -> DiscretizationCase {
    DiscretizationCase {
        name: spec.name.to_string(),
        description: spec.description.to_string(),
        symbol: spec.symbol,
        symbol_label: spec.symbol_label,
        normalization: spec.normalization,
        symmetry: spec.symmetry,
        coefficients: spec
            .coefficients
            .into_iter()
            .map(|(role, c)| (role.to_string(), c))
            .collect(),
        quad_order: None,
        quadrature_approximate: false,
        bounded_symbol: true,
        min_n,
        builder: Arc::new(builder),
    }
}

fn require_continuous(a: &Coefficient) -> Result<()> {
    if a.is_continuous() {
        Ok(())
    } else {
        Err(Error::ContinuityRequired(a.name().to_string()))
    }
}

fn require_bounded(c: &Coefficient, role: &str) -> Result<()> {
    if c.regularity().is_bounded() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "coefficient {role} = `{}` must be bounded",
            c.name()
        )))
    }
}

const LAPLACIAN_LABEL: &str = "a(x)(2-2cos(theta))";

/// Divergence-form diffusion `-(a u')'`, central differences.
pub fn fd_diffusion(a: Coefficient) -> DiscretizationCase {
    let spec = Spec {
        name: "fd_t1",
        description: "central FD for -(a u')' with Dirichlet conditions",
        symbol: SymbolExpr::separable(a.clone(), TrigPoly::laplacian()),
        symbol_label: LAPLACIAN_LABEL.into(),
        normalization: Normalization::One,
        symmetry: Symmetry::Symmetric,
        coefficients: vec![("a", a.name().to_string())],
    };
    make(spec, 1, move |n| Ok(Assembled::Symmetric(fd_diffusion_matrix(&a, n)?.into())))
}

/// `B_n = A_n + Z_n`: diffusion plus central convection and reaction.
pub fn fd_cdr_dirichlet(a: Coefficient, b: Coefficient, c: Coefficient) -> Result<DiscretizationCase> {
    require_bounded(&b, "b")?;
    require_bounded(&c, "c")?;
    let symmetric = b.is_zero();
    let spec = Spec {
        name: "fd_t2",
        description: "central FD for -(a u')' + b u' + c u with Dirichlet conditions",
        symbol: SymbolExpr::separable(a.clone(), TrigPoly::laplacian()),
        symbol_label: LAPLACIAN_LABEL.into(),
        normalization: Normalization::One,
        symmetry: if symmetric { Symmetry::Symmetric } else { Symmetry::Nonsymmetric },
        coefficients: vec![("a", a.name().to_string()), ("b", b.name().to_string()), ("c", c.name().to_string())],
    };
    Ok(make(spec, 1, move |n| {
        let m = fd_diffusion_matrix(&a, n)?.add(&fd_convection_reaction(&b, &c, n)?)?;
        Ok(if symmetric { Assembled::Symmetric(m.into()) } else { Assembled::General(m.into()) })
    }))
}

/// `C_n = B_n + R_n`: Neumann closure by one-sided differences.
pub fn fd_cdr_neumann(a: Coefficient, b: Coefficient, c: Coefficient) -> Result<DiscretizationCase> {
    require_bounded(&b, "b")?;
    require_bounded(&c, "c")?;
    let symmetric = b.is_zero();
    let spec = Spec {
        name: "fd_t3",
        description: "central FD for -(a u')' + b u' + c u with Neumann conditions",
        symbol: SymbolExpr::separable(a.clone(), TrigPoly::laplacian()),
        symbol_label: LAPLACIAN_LABEL.into(),
        normalization: Normalization::One,
        symmetry: if symmetric { Symmetry::Symmetric } else { Symmetry::Nonsymmetric },
        coefficients: vec![("a", a.name().to_string()), ("b", b.name().to_string()), ("c", c.name().to_string())],
    };
    Ok(make(spec, 1, move |n| {
        let m = fd_diffusion_matrix(&a, n)?
            .add(&fd_convection_reaction(&b, &c, n)?)?
            .add(&fd_neumann_correction(&a, &b, n)?)?;
        Ok(if symmetric { Assembled::Symmetric(m.into()) } else { Assembled::General(m.into()) })
    }))
}

/// `E_n = diag(a_j) T_n(2-2cos) + Z_n`: non-divergence diffusion.
pub fn fd_nondiv(a: Coefficient, b: Coefficient, c: Coefficient) -> Result<DiscretizationCase> {
    require_continuous(&a)?;
    require_bounded(&b, "b")?;
    require_bounded(&c, "c")?;
    let scaled = b.is_zero();
    let spec = Spec {
        name: "fd_t4",
        description: "central FD for -a u'' + b u' + c u with Dirichlet conditions",
        symbol: SymbolExpr::separable(a.clone(), TrigPoly::laplacian()),
        symbol_label: LAPLACIAN_LABEL.into(),
        normalization: Normalization::One,
        symmetry: if scaled { Symmetry::Symmetrizable } else { Symmetry::Nonsymmetric },
        coefficients: vec![("a", a.name().to_string()), ("b", b.name().to_string()), ("c", c.name().to_string())],
    };
    Ok(make(spec, 1, move |n| {
        let k = fd_nondiv_diffusion(&a, n)?;
        let z = fd_convection_reaction(&b, &c, n)?;
        let h = 1.0 / (n + 1) as f64;
        let d: Vec<f64> = (1..=n).map(|j| a.eval(j as f64 * h)).collect();
        if scaled && d.iter().all(|&v| v > 0.0) {
            // diag(a) T + h^2 diag(c) = diag(a) (T + diag(h^2 c / a))
            let mut t = toeplitz(&TrigPoly::laplacian(), n)?;
            for (i, di) in d.iter().enumerate() {
                t.add_to(i, i, z.get(i, i) / di);
            }
            return Ok(Assembled::DiagScaled { d, t });
        }
        Ok(Assembled::General(k.add(&z)?.into()))
    }))
}

/// `P_n = K_n + Z_n` with the fourth-order interior stencil.
pub fn fd_fourth_order_scheme(a: Coefficient, b: Coefficient, c: Coefficient) -> Result<DiscretizationCase> {
    require_continuous(&a)?;
    require_bounded(&b, "b")?;
    require_bounded(&c, "c")?;
    let spec = Spec {
        name: "fd_t5",
        description: "fourth-order central FD (1,-16,30,-16,1)/12 for -a u'' with (-1,2,-1) boundary rows",
        symbol: SymbolExpr::separable(a.clone(), TrigPoly::fourth_order_p()),
        symbol_label: "a(x)(30-32cos(theta)+2cos(2theta))/12".into(),
        normalization: Normalization::One,
        symmetry: Symmetry::Nonsymmetric,
        coefficients: vec![("a", a.name().to_string()), ("b", b.name().to_string()), ("c", c.name().to_string())],
    };
    Ok(make(spec, 4, move |n| {
        let m = fd_fourth_order_diffusion(&a, n)?.add(&fd_fourth_order_lower(&b, &c, n)?)?;
        Ok(Assembled::General(m.into()))
    }))
}

/// `A_n = D_n(a) T_n(q)` for `a u''''` on the grid `(i+1)/(n+3)`.
pub fn fd_fourth_derivative(a: Coefficient) -> Result<DiscretizationCase> {
    require_continuous(&a)?;
    let spec = Spec {
        name: "fd_t6",
        description: "central FD (1,-4,6,-4,1) for a u'''' with clamped conditions",
        symbol: SymbolExpr::separable(a.clone(), TrigPoly::fourth_derivative_q()),
        symbol_label: "a(x)(6-8cos(theta)+2cos(2theta))".into(),
        normalization: Normalization::One,
        symmetry: Symmetry::Symmetrizable,
        coefficients: vec![("a", a.name().to_string())],
    };
    Ok(make(spec, 5, move |n| {
        let (d, t) = fd_fourth_derivative_factors(&a, n)?;
        if d.iter().all(|&v| v > 0.0) {
            Ok(Assembled::DiagScaled { d, t })
        } else {
            Ok(Assembled::General(t.scale_rows(&d)?.into()))
        }
    }))
}

/// `A_{G,n}` on the mapped mesh `G(j/(n+1))`.
pub fn fd_nonuniform(a: Coefficient, map: GridMap) -> Result<DiscretizationCase> {
    require_continuous(&a)?;
    let g_coeff = {
        let m = map.clone();
        Coefficient::new(map.name().to_string(), crate::symbol::Regularity::Continuous, move |x| m.eval(x))
    };
    let dg = {
        let m = map.clone();
        Coefficient::new(
            format!("d/dx {}", map.name()),
            crate::symbol::Regularity::Continuous,
            move |x| m.derivative(x),
        )
        .with_singular_points(map.singular_points().to_vec())
    };
    let symbol = SymbolExpr::coeff(a.compose(&g_coeff))
        .mul(SymbolExpr::trig(TrigPoly::laplacian()))
        .div(SymbolExpr::coeff(dg), true)?;
    let spec = Spec {
        name: "fd_t7",
        description: "central FD for -(a u')' on the mesh G(j/(n+1))",
        symbol,
        symbol_label: format!("a(G(x))/G'(x)(2-2cos(theta)), G(x)={}", map.name()),
        normalization: Normalization::InvNPlus1,
        symmetry: Symmetry::Symmetric,
        coefficients: vec![("a", a.name().to_string())],
    };
    let bounded = !map.is_singular();
    let mut case = make(spec, 1, move |n| {
        Ok(Assembled::Symmetric(fd_nonuniform_matrix(&a, &map, n)?.into()))
    });
    case.bounded_symbol = bounded;
    Ok(case)
}

fn fe_meta(mut case: DiscretizationCase, quad_order: usize, coeffs: &[&Coefficient]) -> DiscretizationCase {
    case.quad_order = Some(quad_order);
    case.quadrature_approximate = coeffs.iter().any(|c| !c.singular_points().is_empty() || !c.regularity().is_bounded());
    case
}

/// Linear FE stiffness matrix of `-(a u')' + b u' + c u`.
pub fn fe_cdr(a: Coefficient, b: Coefficient, c: Coefficient, quad_order: usize) -> DiscretizationCase {
    let symmetric = b.is_zero();
    let spec = Spec {
        name: "fe_t1",
        description: "linear FE for -(a u')' + b u' + c u with Dirichlet conditions",
        symbol: SymbolExpr::separable(a.clone(), TrigPoly::laplacian()),
        symbol_label: LAPLACIAN_LABEL.into(),
        normalization: Normalization::InvNPlus1,
        symmetry: if symmetric { Symmetry::Symmetric } else { Symmetry::Nonsymmetric },
        coefficients: vec![("a", a.name().to_string()), ("b", b.name().to_string()), ("c", c.name().to_string())],
    };
    let coeffs = [a.clone(), b.clone(), c.clone()];
    let case = make(spec, 1, move |n| {
        let m = fe_cdr_matrix(&a, &b, &c, n, quad_order)?;
        Ok(if symmetric { Assembled::Symmetric(m.into()) } else { Assembled::General(m.into()) })
    });
    fe_meta(case, quad_order, &coeffs.iter().collect::<Vec<_>>())
}

/// Linear FE mass matrix `M_n(c)`.
pub fn fe_mass_case(c: Coefficient, quad_order: usize) -> DiscretizationCase {
    let spec = Spec {
        name: "fe_mass",
        description: "linear FE mass matrix M_n(c)",
        symbol: SymbolExpr::separable(c.clone(), TrigPoly::two_plus_cos().scale(1.0 / 3.0)),
        symbol_label: "c(x)(2/3+cos(theta)/3)".into(),
        normalization: Normalization::NPlus1,
        symmetry: Symmetry::Symmetric,
        coefficients: vec![("c", c.name().to_string())],
    };
    let cc = c.clone();
    let case = make(spec, 1, move |n| Ok(Assembled::Symmetric(fe_mass(&c, n, quad_order)?.into())));
    fe_meta(case, quad_order, &[&cc])
}

/// Schur complement `rho M_n + H_n^T K_n(a)^{-1} H_n` of the saddle-point system.
pub fn fe_system_schur(a: Coefficient, rho: f64, quad_order: usize) -> Result<DiscretizationCase> {
    if !rho.is_finite() {
        return Err(Error::InvalidArgument(format!("rho must be finite, got {rho}")));
    }
    let second = SymbolExpr::trig(TrigPoly::sin_squared())
        .div(SymbolExpr::separable(a.clone(), TrigPoly::laplacian()), true)?;
    let symbol = SymbolExpr::trig(TrigPoly::two_plus_cos().scale(rho / 3.0)).add(second);
    let spec = Spec {
        name: "schur",
        description: "Schur complement of the linear FE saddle-point system",
        symbol,
        symbol_label: format!("({rho}/3)(2+cos(theta))+sin^2(theta)/(a(x)(2-2cos(theta)))"),
        normalization: Normalization::NPlus1,
        symmetry: Symmetry::Symmetric,
        coefficients: vec![("a", a.name().to_string())],
    };
    let ac = a.clone();
    let case = make(spec, 1, move |n| {
        Ok(Assembled::Symmetric(fe_schur_complement(&a, rho, n, quad_order)?.into()))
    });
    Ok(fe_meta(case, quad_order, &[&ac]))
}

/// Generalized eigenproblem `K_n(a) u = lambda M_n(c) u`, i.e. `L_n = M_n^{-1} K_n`.
pub fn fe_eigproblem(a: Coefficient, c: Coefficient, quad_order: usize) -> Result<DiscretizationCase> {
    let num = SymbolExpr::separable(a.clone(), TrigPoly::laplacian().scale(3.0));
    let den = SymbolExpr::separable(c.clone(), TrigPoly::two_plus_cos());
    let spec = Spec {
        name: "Ln",
        description: "linear FE eigenproblem K_n(a) u = lambda M_n(c) u",
        symbol: num.div(den, true)?,
        symbol_label: "(a/c)(6-6cos)/(2+cos)".into(),
        normalization: Normalization::InvNPlus1Squared,
        symmetry: Symmetry::Symmetrizable,
        coefficients: vec![("a", a.name().to_string()), ("c", c.name().to_string())],
    };
    let coeffs = [a.clone(), c.clone()];
    let case = make(spec, 1, move |n| {
        let k = fe_stiffness(&a, n, quad_order)?;
        let m = fe_mass(&c, n, quad_order)?;
        BandedCholesky::factor(&m)?;
        Ok(Assembled::Pencil { k, m })
    });
    Ok(fe_meta(case, quad_order, &coeffs.iter().collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fd_t1_symbol_at_pi() {
        let case = fd_diffusion(Coefficient::xexp());
        let v = case.symbol().eval_real(0.7, PI).unwrap();
        assert!((v - 4.0 * 0.7 * (-0.7f64).exp()).abs() < 1e-14);
        assert!(case.listing().starts_with("fd_t1 | a(x)(2-2cos(theta)) | alpha=1"));
    }

    #[test]
    fn ln_listing_and_exact_spectrum() {
        let case = fe_eigproblem(Coefficient::one(), Coefficient::one(), DEFAULT_QUAD_ORDER).unwrap();
        assert!(case.listing().starts_with("Ln | (a/c)(6-6cos)/(2+cos) | alpha=(n+1)^-2"));
        let n = 2;
        let s = case.build(n).unwrap().real_eigenvalues(case.alpha(n)).unwrap();
        // theta_1 = pi/3: (6 - 3)/(2.5) = 1.2
        assert!((s.values()[0] - 1.2).abs() < 1e-12);
    }

    #[test]
    fn symmetric_cases_are_exactly_symmetric() {
        let cases = vec![
            fd_diffusion(Coefficient::exp()),
            fd_cdr_dirichlet(Coefficient::x(), Coefficient::zero(), Coefficient::one()).unwrap(),
            fd_nonuniform(Coefficient::one_plus_x(), GridMap::power(2.0).unwrap()).unwrap(),
            fe_cdr(Coefficient::xexp(), Coefficient::zero(), Coefficient::exp(), 5),
            fe_system_schur(Coefficient::one_plus_x(), 1.0, 5).unwrap(),
        ];
        for case in cases {
            assert_eq!(case.symmetry(), Symmetry::Symmetric);
            let m = case.build(17).unwrap().to_dense().unwrap();
            assert_eq!(m.asymmetry(), 0.0, "{}", case.name());
        }
    }

    #[test]
    fn diag_scaled_spectrum_matches_general_path() {
        let case = fd_nondiv(Coefficient::one_plus_x(), Coefficient::zero(), Coefficient::exp()).unwrap();
        let built = case.build(30).unwrap();
        assert!(matches!(built, Assembled::DiagScaled { .. }));
        let fast = built.real_eigenvalues(1.0).unwrap();
        let general = Assembled::General(built.to_dense().unwrap().into()).real_eigenvalues(1.0).unwrap();
        for (x, y) in fast.values().iter().zip(general.values()) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn continuity_is_enforced() {
        let g = Coefficient::abs_power_singular(0.5, 0.25);
        assert!(matches!(
            fd_nondiv(g.clone(), Coefficient::zero(), Coefficient::zero()),
            Err(Error::ContinuityRequired(_))
        ));
        assert!(fd_cdr_dirichlet(Coefficient::one(), g, Coefficient::zero()).is_err());
    }

    #[test]
    fn small_sizes_rejected() {
        let p = fd_fourth_order_scheme(Coefficient::one(), Coefficient::zero(), Coefficient::zero()).unwrap();
        assert!(p.build(3).is_err());
        let q = fd_fourth_derivative(Coefficient::one()).unwrap();
        assert!(q.build(4).is_err());
        assert_eq!(q.build(5).unwrap().n(), 5);
    }

    #[test]
    fn singular_map_symbol() {
        let case = fd_nonuniform(Coefficient::one(), GridMap::power(2.0).unwrap()).unwrap();
        assert!(!case.bounded_symbol());
        let v = case.symbol().eval_real(0.25, PI).unwrap();
        assert!((v - 4.0 / 0.5).abs() < 1e-12);
        assert!(matches!(case.symbol().eval(0.0, PI), Err(Error::SingularPoint { .. })));
    }
}
