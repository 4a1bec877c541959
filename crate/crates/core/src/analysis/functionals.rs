use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SpectralSet;
use crate::quadrature::gauss_legendre;
use crate::symbol::{Rearrangement, Rect, SymbolExpr};

/// Continuous, compactly supported test function `F` for Weyl functionals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    /// `(clamp(t, lo, hi) / scale)^degree` on `[lo, hi]`, tapered linearly to
    /// zero over `taper` on each side.
    Monomial {
        degree: u32,
        lo: f64,
        hi: f64,
        scale: f64,
        taper: f64,
    },
    /// `max(0, 1 - |t - center| / half_width)`.
    Hat { center: f64, half_width: f64 },
}

impl TestFunction {
    /// Unscaled clipped monomial with a taper of 5% of the window on each side.
    pub fn monomial(degree: u32, lo: f64, hi: f64) -> Result<Self> {
        Self::scaled_monomial(degree, lo, hi, 1.0)
    }

    pub fn scaled_monomial(degree: u32, lo: f64, hi: f64, scale: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidArgument(format!("bad monomial window [{lo}, {hi}]")));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidArgument(format!("monomial scale must be positive, got {scale}")));
        }
        let taper = (0.05 * (hi - lo)).max(1e-12);
        Ok(TestFunction::Monomial { degree, lo, hi, scale, taper })
    }

    pub fn hat(center: f64, half_width: f64) -> Result<Self> {
        if !(center.is_finite() && half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "hat needs finite center and positive width, got ({center}, {half_width})"
            )));
        }
        Ok(TestFunction::Hat { center, half_width })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            TestFunction::Monomial { degree, lo, hi, scale, taper } => {
                let weight = if t < lo {
                    (1.0 - (lo - t) / taper).max(0.0)
                } else if t > hi {
                    (1.0 - (t - hi) / taper).max(0.0)
                } else {
                    1.0
                };
                if weight == 0.0 {
                    return 0.0;
                }
                weight * (t.clamp(lo, hi) / scale).powi(degree as i32)
            }
            TestFunction::Hat { center, half_width } => (1.0 - (t - center).abs() / half_width).max(0.0),
        }
    }

    /// Compact support `[lo, hi]`.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            TestFunction::Monomial { lo, hi, taper, .. } => (lo - taper, hi + taper),
            TestFunction::Hat { center, half_width } => (center - half_width, center + half_width),
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TestFunction::Monomial { degree, lo, hi, scale, .. } => {
                if scale == 1.0 {
                    write!(f, "t^{degree} on [{lo:.6}, {hi:.6}]")
                } else {
                    write!(f, "(t/{scale:.6})^{degree} on [{lo:.6}, {hi:.6}]")
                }
            }
            TestFunction::Hat { center, half_width } => write!(f, "hat(c={center}, w={half_width})"),
        }
    }
}

/// Monomials of degree 0..=3 clipped to `[lo, hi]` widened by 5% of its length
/// on each side and scaled so that they take values in [-1, 1].
pub fn default_suite(lo: f64, hi: f64) -> Result<Vec<TestFunction>> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::UnboundedSymbol);
    }
    let pad = 0.05 * (hi - lo).max(1e-12);
    let (lo, hi) = (lo - pad, hi + pad);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    (0..=3).map(|d| TestFunction::scaled_monomial(d, lo, hi, scale)).collect()
}

/// `count` hats with half-width `(b - a)/(count + 1)` centred at the interior
/// nodes of an equispaced partition of `[a, b]`; their supports stay inside
/// the window.
pub fn hat_suite(window: (f64, f64), count: usize) -> Result<Vec<TestFunction>> {
    let (a, b) = window;
    if !(a.is_finite() && b.is_finite() && a < b) || count == 0 {
        return Err(Error::InvalidArgument(format!("bad hat window [{a}, {b}] with {count} hats")));
    }
    let step = (b - a) / (count + 1) as f64;
    (1..=count).map(|k| TestFunction::hat(a + k as f64 * step, step)).collect()
}

/// `(1/n) sum_i F(values_i)`.
pub fn empirical_functional(s: &SpectralSet, f: &TestFunction) -> f64 {
    if s.is_empty() {
        return 0.0;
    }
    let mut acc = Neumaier::default();
    s.values().iter().for_each(|&v| acc.add(f.eval(v)));
    acc.total() / s.len() as f64
}

/// `(1/N) sum F(samples)`: the functional of the rearranged symbol on (0, 1).
pub fn rearranged_functional(r: &Rearrangement, f: &TestFunction) -> f64 {
    let s = r.samples();
    s.iter().map(|&v| f.eval(v)).sum::<f64>() / s.len() as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureMethod {
    /// Three-point Gauss-Legendre per panel in each direction.
    Gauss,
    /// Cell midpoints, singular cells dropped and the measure renormalized.
    Midpoint,
}

/// Weighted samples of a symbol normalized to total weight one.
#[derive(Clone, Debug)]
pub struct SymbolSamples {
    values: Vec<f64>,
    weights: Vec<f64>,
    method: QuadratureMethod,
    skipped: usize,
}

const GAUSS_POINTS: usize = 3;

impl SymbolSamples {
    /// Samples `kappa` (or `|kappa|` when `absolute`) on `res` panels per
    /// direction of `rect`. Falls back to the midpoint rule as soon as a
    /// Gauss node hits a singular point.
    pub fn new(kappa: &SymbolExpr, rect: Rect, res: usize, absolute: bool) -> Result<Self> {
        if res == 0 {
            return Err(Error::InvalidArgument("quadrature resolution must be positive".into()));
        }
        match Self::gauss(kappa, rect, res, absolute) {
            Err(Error::SingularPoint { .. }) => Self::midpoint(kappa, rect, res, absolute),
            other => other,
        }
    }

    fn eval(kappa: &SymbolExpr, x: f64, t: f64, absolute: bool) -> Result<f64> {
        if absolute {
            kappa.eval(x, t).map(|z| z.norm())
        } else {
            kappa.eval_real(x, t)
        }
    }

    fn axis(range: (f64, f64), res: usize, nodes: &[f64], weights: &[f64]) -> Vec<(f64, f64)> {
        let (a, b) = range;
        let w = (b - a) / res as f64;
        let mut out = Vec::with_capacity(res * nodes.len());
        for p in 0..res {
            let c = a + (p as f64 + 0.5) * w;
            for (x, wx) in nodes.iter().zip(weights) {
                out.push((c + 0.5 * w * x, 0.5 * wx / res as f64));
            }
        }
        out
    }

    fn gauss(kappa: &SymbolExpr, rect: Rect, res: usize, absolute: bool) -> Result<Self> {
        let (nodes, w) = gauss_legendre(GAUSS_POINTS);
        let xs = Self::axis(rect.x, res, &nodes, &w);
        let ts = match rect.theta {
            Some(th) => Self::axis(th, res, &nodes, &w),
            None => vec![(0.0, 1.0)],
        };
        let mut values = Vec::with_capacity(xs.len() * ts.len());
        let mut weights = Vec::with_capacity(xs.len() * ts.len());
        for &(x, wx) in &xs {
            for &(t, wt) in &ts {
                let v = Self::eval(kappa, x, t, absolute)?;
                if !v.is_finite() {
                    return Err(Error::SingularPoint { x, theta: t });
                }
                values.push(v);
                weights.push(wx * wt);
            }
        }
        Ok(Self { values, weights, method: QuadratureMethod::Gauss, skipped: 0 })
    }

    fn midpoint(kappa: &SymbolExpr, rect: Rect, res: usize, absolute: bool) -> Result<Self> {
        let mids = |(a, b): (f64, f64)| -> Vec<f64> {
            (0..res).map(|i| a + (i as f64 + 0.5) * (b - a) / res as f64).collect()
        };
        let xs = mids(rect.x);
        let ts = rect.theta.map(mids).unwrap_or_else(|| vec![0.0]);
        let mut values = Vec::with_capacity(xs.len() * ts.len());
        let mut skipped = 0;
        for &x in &xs {
            for &t in &ts {
                match Self::eval(kappa, x, t, absolute) {
                    Ok(v) if v.is_finite() => values.push(v),
                    Ok(_) | Err(Error::SingularPoint { .. }) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        if values.is_empty() {
            return Err(Error::EverywhereSingular);
        }
        let w = 1.0 / values.len() as f64;
        let weights = vec![w; values.len()];
        Ok(Self { values, weights, method: QuadratureMethod::Midpoint, skipped })
    }

    /// Normalized integral `(1/|rect|) int F(kappa)`. Dividing by the summed
    /// weights makes constants integrate exactly.
    pub fn integrate(&self, f: &TestFunction) -> f64 {
        let mut num = Neumaier::default();
        let mut den = Neumaier::default();
        for (&v, &w) in self.values.iter().zip(&self.weights) {
            num.add(w * f.eval(v));
            den.add(w);
        }
        num.total() / den.total()
    }

    pub fn method(&self) -> QuadratureMethod {
        self.method
    }

    /// Cells dropped by the midpoint rule.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Smallest and largest sampled value.
    pub fn range(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

// compensated summation
#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Quadrature value with a refinement estimate from the half-resolution rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolFunctional {
    pub value: f64,
    /// `|Q(res) - Q(res/2)|`.
    pub refinement: f64,
    pub method: QuadratureMethod,
    pub skipped: usize,
}

/// Functionals of every `F` in `suite`, sampling the symbol only twice.
pub fn symbol_functionals(
    kappa: &SymbolExpr,
    rect: Rect,
    suite: &[TestFunction],
    quad_res: usize,
    absolute: bool,
) -> Result<Vec<SymbolFunctional>> {
    let fine = SymbolSamples::new(kappa, rect, quad_res, absolute)?;
    let coarse = SymbolSamples::new(kappa, rect, (quad_res / 2).max(1), absolute)?;
    Ok(suite
        .iter()
        .map(|f| {
            let value = fine.integrate(f);
            SymbolFunctional {
                value,
                refinement: (value - coarse.integrate(f)).abs(),
                method: fine.method(),
                skipped: fine.skipped(),
            }
        })
        .collect())
}

/// `(1/|rect|) int_rect F(kappa)`.
pub fn symbol_functional(kappa: &SymbolExpr, rect: Rect, f: &TestFunction, quad_res: usize) -> Result<SymbolFunctional> {
    Ok(symbol_functionals(kappa, rect, std::slice::from_ref(f), quad_res, false)?[0])
}

/// Range of `kappa` (or `|kappa|`) over an `(res+1)^2` lattice that includes
/// the edges of `rect`. Singular and non-finite points are skipped.
pub fn symbol_range(kappa: &SymbolExpr, rect: Rect, res: usize, absolute: bool) -> Result<(f64, f64)> {
    let res = res.max(1);
    let grid = |(a, b): (f64, f64)| -> Vec<f64> { (0..=res).map(|i| a + i as f64 * (b - a) / res as f64).collect() };
    let xs = grid(rect.x);
    let ts = rect.theta.map(grid).unwrap_or_else(|| vec![0.0]);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &x in &xs {
        for &t in &ts {
            match SymbolSamples::eval(kappa, x, t, absolute) {
                Ok(v) if v.is_finite() => {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                Ok(_) | Err(Error::SingularPoint { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    if lo > hi {
        return Err(Error::EverywhereSingular);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::toeplitz;
    use crate::linalg::{sym_eigvals, SpectrumKind};
    use crate::symbol::{Coefficient, TrigPoly};

    fn laplacian_spectrum(n: usize) -> SpectralSet {
        sym_eigvals(&toeplitz(&TrigPoly::laplacian(), n).unwrap().into()).unwrap()
    }

    #[test]
    fn empirical_linear_is_trace() {
        let f = TestFunction::monomial(1, -1.0, 5.0).unwrap();
        let v = empirical_functional(&laplacian_spectrum(40), &f);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn empirical_square_closed_form() {
        let n = 30;
        let f = TestFunction::monomial(2, -1.0, 5.0).unwrap();
        let v = empirical_functional(&laplacian_spectrum(n), &f);
        assert!((v - (6.0 * n as f64 - 2.0) / n as f64).abs() < 1e-12);
    }

    #[test]
    fn far_hat_is_zero() {
        let f = TestFunction::hat(100.0, 1.0).unwrap();
        assert_eq!(empirical_functional(&laplacian_spectrum(10), &f), 0.0);
        let empty = SpectralSet::new(vec![], SpectrumKind::Eigenvalues);
        assert_eq!(empirical_functional(&empty, &f), 0.0);
    }

    #[test]
    fn symbol_functional_closed_forms() {
        let k = SymbolExpr::trig(TrigPoly::laplacian());
        let t1 = TestFunction::monomial(1, -1.0, 5.0).unwrap();
        let t2 = TestFunction::monomial(2, -1.0, 5.0).unwrap();
        assert!((symbol_functional(&k, Rect::half(), &t1, 40).unwrap().value - 2.0).abs() < 1e-12);
        assert!((symbol_functional(&k, Rect::full(), &t2, 40).unwrap().value - 6.0).abs() < 1e-12);
        let kx = SymbolExpr::separable(Coefficient::x(), TrigPoly::laplacian());
        assert!((symbol_functional(&kx, Rect::half(), &t1, 40).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monomial_taper_is_continuous() {
        let f = TestFunction::monomial(2, 1.0, 3.0).unwrap();
        assert_eq!(f.eval(3.0), 9.0);
        assert!((f.eval(3.0 + 1e-9) - 9.0).abs() < 1e-6);
        assert_eq!(f.eval(3.2), 0.0);
        assert_eq!(f.eval(0.0), 0.0);
        let (a, b) = f.support();
        assert!((a - 0.9).abs() < 1e-12 && (b - 3.1).abs() < 1e-12);
    }

    #[test]
    fn singular_symbol_uses_midpoint() {
        let den = SymbolExpr::coeff(Coefficient::x());
        let k = SymbolExpr::trig(TrigPoly::laplacian()).div(den, true).unwrap();
        // odd panel count puts a node on x = 1/2
        let g = Coefficient::new("(x-1/2)^2", crate::symbol::Regularity::Continuous, |x| (x - 0.5) * (x - 0.5));
        let k2 = SymbolExpr::trig(TrigPoly::laplacian())
            .div(SymbolExpr::coeff(g), true)
            .unwrap();
        let hat = TestFunction::hat(1.0, 1.0).unwrap();
        let a = symbol_functional(&k, Rect::half(), &hat, 50).unwrap();
        assert_eq!(a.method, QuadratureMethod::Gauss);
        let b = symbol_functional(&k2, Rect::half(), &hat, 51).unwrap();
        assert_eq!(b.method, QuadratureMethod::Midpoint);
        assert_eq!(b.skipped, 51);
        assert!(b.value.is_finite());
    }

    #[test]
    fn everywhere_singular_errors() {
        let zero = SymbolExpr::constant(0.0);
        let k = SymbolExpr::constant(1.0).div(zero, true).unwrap();
        let hat = TestFunction::hat(1.0, 1.0).unwrap();
        assert!(matches!(
            symbol_functional(&k, Rect::half(), &hat, 4),
            Err(Error::EverywhereSingular)
        ));
    }

    #[test]
    fn hat_suite_fits_window() {
        let s = hat_suite((0.0, 20.0), 7).unwrap();
        assert_eq!(s.len(), 7);
        for f in &s {
            let (a, b) = f.support();
            assert!(a >= -1e-12 && b <= 20.0 + 1e-12);
        }
    }
}
