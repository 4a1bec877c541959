use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-14;

/// Trigonometric polynomial `f(theta) = sum_{k=-r}^{r} f_k e^{i k theta}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    // f_{-r}, ..., f_r
    coeffs: Vec<Complex64>,
}

impl TrigPoly {
    /// Coefficients listed from `f_{-r}` to `f_r`; the length must be odd.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "trigonometric polynomial needs 2r+1 coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite Fourier coefficient".into()));
        }
        Ok(Self { coeffs }.trimmed())
    }

    /// Real coefficients listed from `f_{-r}` to `f_r`.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: f64) -> Self {
        Self {
            coeffs: vec![Complex64::new(c, 0.0)],
        }
    }

    /// 2 - 2cos(theta).
    pub fn laplacian() -> Self {
        Self::from_real(&[-1.0, 2.0, -1.0]).expect("odd length")
    }

    /// (30 - 32cos(theta) + 2cos(2theta)) / 12, the fourth-order second-derivative stencil.
    pub fn fourth_order_p() -> Self {
        Self::from_real(&[1.0 / 12.0, -16.0 / 12.0, 30.0 / 12.0, -16.0 / 12.0, 1.0 / 12.0])
            .expect("odd length")
    }

    /// 6 - 8cos(theta) + 2cos(2theta) = (2 - 2cos(theta))^2.
    pub fn fourth_derivative_q() -> Self {
        Self::from_real(&[1.0, -4.0, 6.0, -4.0, 1.0]).expect("odd length")
    }

    /// 2 + cos(theta).
    pub fn two_plus_cos() -> Self {
        Self::from_real(&[0.5, 2.0, 0.5]).expect("odd length")
    }

    /// sin(theta) = (e^{i theta} - e^{-i theta}) / 2i.
    pub fn sin() -> Self {
        Self {
            coeffs: vec![
                Complex64::new(0.0, 0.5),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -0.5),
            ],
        }
    }

    /// sin^2(theta) = 1/2 - cos(2 theta)/2.
    pub fn sin_squared() -> Self {
        Self::from_real(&[-0.25, 0.0, 0.5, 0.0, -0.25]).expect("odd length")
    }

    /// 1 - e^{-i theta}.
    pub fn backward_difference() -> Self {
        Self::from_real(&[-1.0, 1.0, 0.0]).expect("odd length")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() / 2
    }

    /// `f_k`, zero outside the support.
    pub fn coeff(&self, k: isize) -> Complex64 {
        let r = self.degree() as isize;
        if k.abs() > r {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + r) as usize]
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let r = self.degree() as isize;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * Complex64::from_polar(1.0, (i as isize - r) as f64 * theta))
            .sum()
    }

    /// True when `f_{-k} = conj(f_k)`, i.e. `f` is real-valued.
    pub fn is_real_valued(&self) -> bool {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm())).max(1.0);
        let r = self.degree() as isize;
        (0..=r).all(|k| (self.coeff(-k) - self.coeff(k).conj()).norm() <= HERMITIAN_TOL * scale)
    }

    /// True when all coefficients are real, so that `T_n(f)` is a real matrix.
    pub fn has_real_coeffs(&self) -> bool {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm())).max(1.0);
        self.coeffs.iter().all(|c| c.im.abs() <= HERMITIAN_TOL * scale)
    }

    /// Real-valued and even in theta (a cosine polynomial).
    pub fn is_even(&self) -> bool {
        self.is_real_valued() && self.has_real_coeffs()
    }

    /// max |f| over a uniform grid of `samples` points on [-pi, pi].
    pub fn sup_norm(&self, samples: usize) -> f64 {
        let samples = samples.max(2);
        (0..samples)
            .map(|i| {
                let t = -std::f64::consts::PI
                    + 2.0 * std::f64::consts::PI * i as f64 / (samples - 1) as f64;
                self.eval(t).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * alpha).collect(),
        }
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1
            && self.coeffs[0].norm() == 0.0
            && self.coeffs[self.coeffs.len() - 1].norm() == 0.0
        {
            self.coeffs.remove(0);
            self.coeffs.pop();
        }
        self
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.degree() as isize;
        let mut first = true;
        write!(f, "trig(")?;
        for k in -r..=r {
            let c = self.coeff(k);
            if c.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            if k != 0 {
                write!(f, "e^({k}i theta)")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}
