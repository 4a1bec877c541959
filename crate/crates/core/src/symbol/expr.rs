use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symbol::{Coefficient, TrigPoly};

/// Division guard: denominators smaller than this in modulus are singular.
pub const DIVISION_GUARD: f64 = 1e-13;

/// Expression tree over `[0,1] x [-pi,pi]` with coefficient leaves in `x`
/// and trigonometric leaves in `theta`.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolExpr {
    Coeff(Coefficient),
    Trig(TrigPoly),
    Sum(Vec<SymbolExpr>),
    Prod(Vec<SymbolExpr>),
    Quot {
        num: Box<SymbolExpr>,
        den: Box<SymbolExpr>,
        nonzero_ae: bool,
    },
    Conj(Box<SymbolExpr>),
}

impl SymbolExpr {
    pub fn coeff(c: Coefficient) -> Self {
        SymbolExpr::Coeff(c)
    }

    pub fn trig(t: TrigPoly) -> Self {
        SymbolExpr::Trig(t)
    }

    pub fn constant(c: f64) -> Self {
        SymbolExpr::Trig(TrigPoly::constant(c))
    }

    /// `a(x) * f(theta)`.
    pub fn separable(a: Coefficient, f: TrigPoly) -> Self {
        SymbolExpr::Prod(vec![SymbolExpr::Coeff(a), SymbolExpr::Trig(f)])
    }

    pub fn add(self, other: SymbolExpr) -> Self {
        match self {
            SymbolExpr::Sum(mut terms) => {
                terms.push(other);
                SymbolExpr::Sum(terms)
            }
            s => SymbolExpr::Sum(vec![s, other]),
        }
    }

    pub fn mul(self, other: SymbolExpr) -> Self {
        match self {
            SymbolExpr::Prod(mut terms) => {
                terms.push(other);
                SymbolExpr::Prod(terms)
            }
            s => SymbolExpr::Prod(vec![s, other]),
        }
    }

    /// `self / den`; the caller must declare `den != 0` almost everywhere.
    pub fn div(self, den: SymbolExpr, nonzero_ae: bool) -> Result<Self> {
        if !nonzero_ae {
            return Err(Error::UndeclaredDivision);
        }
        Ok(SymbolExpr::Quot {
            num: Box::new(self),
            den: Box::new(den),
            nonzero_ae,
        })
    }

    pub fn conj(self) -> Self {
        SymbolExpr::Conj(Box::new(self))
    }

    /// Tree evaluation at `(x, theta)`.
    pub fn eval(&self, x: f64, theta: f64) -> Result<Complex64> {
        let v = match self {
            SymbolExpr::Coeff(c) => {
                let v = c.eval(x);
                if !v.is_finite() {
                    return Err(Error::SingularPoint { x, theta });
                }
                Complex64::new(v, 0.0)
            }
            SymbolExpr::Trig(t) => t.eval(theta),
            SymbolExpr::Sum(terms) => {
                let mut s = Complex64::new(0.0, 0.0);
                for t in terms {
                    s += t.eval(x, theta)?;
                }
                s
            }
            SymbolExpr::Prod(terms) => {
                let mut p = Complex64::new(1.0, 0.0);
                for t in terms {
                    p *= t.eval(x, theta)?;
                }
                p
            }
            SymbolExpr::Quot { num, den, .. } => {
                let d = den.eval(x, theta)?;
                if d.norm() < DIVISION_GUARD {
                    return Err(Error::SingularPoint { x, theta });
                }
                num.eval(x, theta)? / d
            }
            SymbolExpr::Conj(e) => e.eval(x, theta)?.conj(),
        };
        Ok(v)
    }

    /// Evaluation that must be real; imaginary parts above `1e-12 (1 + |re|)`
    /// are an error.
    pub fn eval_real(&self, x: f64, theta: f64) -> Result<f64> {
        let v = self.eval(x, theta)?;
        if v.im.abs() > 1e-12 * (1.0 + v.re.abs()) {
            return Err(Error::ComplexSymbol {
                x,
                theta,
                value: format!("{v}"),
            });
        }
        Ok(v.re)
    }

    pub fn depends_on_theta(&self) -> bool {
        match self {
            SymbolExpr::Coeff(_) => false,
            SymbolExpr::Trig(t) => t.degree() > 0,
            SymbolExpr::Sum(ts) | SymbolExpr::Prod(ts) => ts.iter().any(Self::depends_on_theta),
            SymbolExpr::Quot { num, den, .. } => num.depends_on_theta() || den.depends_on_theta(),
            SymbolExpr::Conj(e) => e.depends_on_theta(),
        }
    }

    pub fn depends_on_x(&self) -> bool {
        match self {
            SymbolExpr::Coeff(c) => c.constant_value().is_none(),
            SymbolExpr::Trig(_) => false,
            SymbolExpr::Sum(ts) | SymbolExpr::Prod(ts) => ts.iter().any(Self::depends_on_x),
            SymbolExpr::Quot { num, den, .. } => num.depends_on_x() || den.depends_on_x(),
            SymbolExpr::Conj(e) => e.depends_on_x(),
        }
    }

    /// Structural sufficient condition for `kappa(x, -theta) = kappa(x, theta)`:
    /// every trigonometric leaf is a cosine polynomial.
    pub fn is_theta_even(&self) -> bool {
        match self {
            SymbolExpr::Coeff(_) => true,
            SymbolExpr::Trig(t) => t.is_even(),
            SymbolExpr::Sum(ts) | SymbolExpr::Prod(ts) => ts.iter().all(Self::is_theta_even),
            SymbolExpr::Quot { num, den, .. } => num.is_theta_even() && den.is_theta_even(),
            SymbolExpr::Conj(e) => e.is_theta_even(),
        }
    }

    /// Coefficient leaves in depth-first order.
    pub fn coefficients(&self) -> Vec<&Coefficient> {
        let mut out = Vec::new();
        self.collect_coefficients(&mut out);
        out
    }

    fn collect_coefficients<'a>(&'a self, out: &mut Vec<&'a Coefficient>) {
        match self {
            SymbolExpr::Coeff(c) => out.push(c),
            SymbolExpr::Trig(_) => {}
            SymbolExpr::Sum(ts) | SymbolExpr::Prod(ts) => {
                ts.iter().for_each(|t| t.collect_coefficients(out))
            }
            SymbolExpr::Quot { num, den, .. } => {
                num.collect_coefficients(out);
                den.collect_coefficients(out);
            }
            SymbolExpr::Conj(e) => e.collect_coefficients(out),
        }
    }

    pub fn has_division(&self) -> bool {
        match self {
            SymbolExpr::Coeff(_) | SymbolExpr::Trig(_) => false,
            SymbolExpr::Sum(ts) | SymbolExpr::Prod(ts) => ts.iter().any(Self::has_division),
            SymbolExpr::Quot { .. } => true,
            SymbolExpr::Conj(e) => e.has_division(),
        }
    }
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolExpr::Coeff(c) => write!(f, "{}", c.name()),
            SymbolExpr::Trig(t) => write!(f, "{t}"),
            SymbolExpr::Sum(ts) => {
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            SymbolExpr::Prod(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            SymbolExpr::Quot { num, den, .. } => write!(f, "({num})/({den})"),
            SymbolExpr::Conj(e) => write!(f, "conj({e})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn xexp_laplacian_at_corner() {
        let k = SymbolExpr::separable(Coefficient::xexp(), TrigPoly::laplacian());
        let v = k.eval_real(1.0, PI).unwrap();
        assert!((v - 4.0 / E).abs() < 1e-14);
    }

    #[test]
    fn schur_symbol_at_half_pi() {
        // rho = 0, a = 1: sin^2 / (2 - 2cos)
        let k = SymbolExpr::trig(TrigPoly::sin_squared())
            .div(SymbolExpr::separable(Coefficient::one(), TrigPoly::laplacian()), true)
            .unwrap();
        assert!((k.eval_real(0.3, PI / 2.0).unwrap() - 0.5).abs() < 1e-14);
        assert!(matches!(k.eval(0.3, 0.0), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn undeclared_division_rejected() {
        let r = SymbolExpr::constant(1.0).div(SymbolExpr::coeff(Coefficient::x()), false);
        assert_eq!(r, Err(Error::UndeclaredDivision));
    }

    #[test]
    fn sum_distributes() {
        let f = TrigPoly::laplacian();
        let lhs = SymbolExpr::separable(Coefficient::x(), f.clone())
            .add(SymbolExpr::separable(Coefficient::exp(), f.clone()));
        for (x, t) in [(0.2, 0.4), (0.9, 3.0)] {
            let rhs = (x + f64::exp(x)) * f.eval(t).re;
            assert!((lhs.eval_real(x, t).unwrap() - rhs).abs() < 1e-13);
        }
    }

    #[test]
    fn product_at_half_pi() {
        let k = SymbolExpr::coeff(Coefficient::x()).mul(SymbolExpr::trig(TrigPoly::laplacian()));
        assert!((k.eval_real(0.5, PI).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn complex_values_flagged() {
        let k = SymbolExpr::trig(TrigPoly::backward_difference());
        assert!(matches!(k.eval_real(0.0, 1.0), Err(Error::ComplexSymbol { .. })));
        let modsq = k.clone().mul(k.conj());
        assert!((modsq.eval_real(0.0, PI).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn evenness_detection() {
        assert!(SymbolExpr::separable(Coefficient::x(), TrigPoly::laplacian()).is_theta_even());
        assert!(!SymbolExpr::trig(TrigPoly::sin()).is_theta_even());
        assert!(SymbolExpr::trig(TrigPoly::sin_squared()).is_theta_even());
    }
}
