use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type Func = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    Continuous,
    AeContinuous,
    L1,
}

impl Regularity {
    /// Weakest of the two.
    pub fn meet(self, other: Self) -> Self {
        self.max(other)
    }

    pub fn is_bounded(self) -> bool {
        self != Regularity::L1
    }
}

/// Real function on [0, 1] with regularity metadata.
#[derive(Clone)]
pub struct Coefficient {
    name: String,
    eval: Func,
    regularity: Regularity,
    modulus: Option<Func>,
    singular_points: Vec<f64>,
    constant: Option<f64>,
}

impl Coefficient {
    pub fn new(
        name: impl Into<String>,
        regularity: Regularity,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            regularity,
            modulus: None,
            singular_points: Vec::new(),
            constant: None,
        }
    }

    /// Attaches an exact modulus of continuity `delta -> omega(delta)`.
    pub fn with_modulus(mut self, modulus: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.modulus = Some(Arc::new(modulus));
        self
    }

    /// Declares points where the evaluator may be infinite or undefined.
    pub fn with_singular_points(mut self, points: Vec<f64>) -> Self {
        self.singular_points = points;
        self
    }

    pub fn constant(c: f64) -> Self {
        let name = if c == 1.0 { "one".to_string() } else { format!("{c}") };
        let mut k = Self::new(name, Regularity::Continuous, move |_| c).with_modulus(|_| 0.0);
        k.constant = Some(c);
        k
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn zero() -> Self {
        let mut k = Self::constant(0.0);
        k.name = "zero".into();
        k
    }

    pub fn x() -> Self {
        Self::new("x", Regularity::Continuous, |x| x).with_modulus(|d| d.min(1.0))
    }

    pub fn x_squared() -> Self {
        Self::new("x^2", Regularity::Continuous, |x| x * x).with_modulus(|d| {
            let d = d.min(1.0);
            2.0 * d - d * d
        })
    }

    /// x e^{-x}; increasing and concave on [0, 1].
    pub fn xexp() -> Self {
        Self::new("xexp", Regularity::Continuous, |x| x * (-x).exp())
            .with_modulus(|d| {
                let d = d.min(1.0);
                d * (-d).exp()
            })
    }

    pub fn one_plus_x() -> Self {
        Self::new("1+x", Regularity::Continuous, |x| 1.0 + x).with_modulus(|d| d.min(1.0))
    }

    pub fn exp() -> Self {
        Self::new("exp", Regularity::Continuous, f64::exp).with_modulus(|d| {
            let d = d.min(1.0);
            std::f64::consts::E - (1.0 - d).exp()
        })
    }

    /// `|x - c|^{-gamma}`, integrable for gamma < 1, infinite at `c`.
    pub fn abs_power_singular(c: f64, gamma: f64) -> Self {
        Self::new(
            format!("|x-{c}|^-{gamma}"),
            Regularity::L1,
            move |x| (x - c).abs().powf(-gamma),
        )
        .with_singular_points(vec![c])
    }

    /// Piecewise-linear interpolant of a table with strictly increasing `xs` in [0, 1].
    pub fn from_table(name: impl Into<String>, xs: Vec<f64>, vs: Vec<f64>) -> Result<Self> {
        if xs.len() != vs.len() || xs.len() < 2 {
            return Err(Error::InvalidArgument(
                "coefficient table needs at least two (x, value) rows".into(),
            ));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("coefficient table x must be strictly ascending".into()));
        }
        if xs[0] < 0.0 || xs[xs.len() - 1] > 1.0 {
            return Err(Error::InvalidArgument("coefficient table x must lie in [0, 1]".into()));
        }
        if vs.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("coefficient table has non-finite values".into()));
        }
        let eval = move |x: f64| {
            let i = xs.partition_point(|&t| t <= x);
            if i == 0 {
                return vs[0];
            }
            if i == xs.len() {
                return vs[vs.len() - 1];
            }
            let (x0, x1) = (xs[i - 1], xs[i]);
            let s = (x - x0) / (x1 - x0);
            vs[i - 1] + s * (vs[i] - vs[i - 1])
        };
        Ok(Self::new(name, Regularity::Continuous, eval))
    }

    /// Parses a CSV table with header `x,value`.
    pub fn from_csv_str(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().unwrap_or_default();
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != ["x", "value"] {
            return Err(Error::InvalidArgument(format!(
                "coefficient CSV header must be `x,value`, found `{header}`"
            )));
        }
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let mut parts = line.split(',').map(str::trim);
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|s| s.parse().ok()).ok_or_else(|| {
                    Error::InvalidArgument(format!("bad coefficient CSV row {}: `{line}`", lineno + 2))
                })
            };
            xs.push(parse(parts.next())?);
            vs.push(parse(parts.next())?);
        }
        Self::from_table(name, xs, vs)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn is_continuous(&self) -> bool {
        self.regularity == Regularity::Continuous
    }

    pub fn singular_points(&self) -> &[f64] {
        &self.singular_points
    }

    pub fn constant_value(&self) -> Option<f64> {
        self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.constant == Some(0.0)
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn exact_modulus(&self, delta: f64) -> Option<f64> {
        self.modulus.as_ref().map(|m| m(delta))
    }

    pub fn has_exact_modulus(&self) -> bool {
        self.modulus.is_some()
    }

    /// max |a| over a uniform probe lattice of [0, 1], skipping non-finite values.
    pub fn sup_norm(&self, probes: usize) -> f64 {
        let probes = probes.max(2);
        (0..probes)
            .map(|i| self.eval(i as f64 / (probes - 1) as f64).abs())
            .filter(|v| v.is_finite())
            .fold(0.0, f64::max)
    }

    /// min a over the probe lattice.
    pub fn min_value(&self, probes: usize) -> f64 {
        let probes = probes.max(2);
        (0..probes)
            .map(|i| self.eval(i as f64 / (probes - 1) as f64))
            .filter(|v| v.is_finite())
            .fold(f64::INFINITY, f64::min)
    }

    /// `x -> self(inner(x))`.
    pub fn compose(&self, inner: &Coefficient) -> Self {
        let (outer, inner_f) = (self.eval.clone(), inner.eval.clone());
        Self::new(
            format!("{}({})", self.name, inner.name),
            self.regularity.meet(inner.regularity),
            move |x| outer(inner_f(x)),
        )
    }

    /// `x -> min(self(x), m)`.
    pub fn truncated(&self, m: f64) -> Self {
        let f = self.eval.clone();
        let reg = if self.regularity == Regularity::L1 {
            Regularity::AeContinuous
        } else {
            self.regularity
        };
        Self::new(format!("min({},{m})", self.name), reg, move |x| {
            let v = f(x);
            if v.is_nan() {
                m
            } else {
                v.min(m)
            }
        })
    }

    /// `x -> self(x) * other(x)`.
    pub fn times(&self, other: &Coefficient) -> Self {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let mut singular = self.singular_points.clone();
        singular.extend_from_slice(&other.singular_points);
        Self::new(
            format!("{}*{}", self.name, other.name),
            self.regularity.meet(other.regularity),
            move |x| f(x) * g(x),
        )
        .with_singular_points(singular)
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Coefficient")
            .field("name", &self.name)
            .field("regularity", &self.regularity)
            .field("exact_modulus", &self.modulus.is_some())
            .field("singular_points", &self.singular_points)
            .finish()
    }
}

impl PartialEq for Coefficient {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.regularity == other.regularity
    }
}

/// Named presets: `one`, `zero`, `x`, `x2`, `xexp`, `1+x`, `exp`.
pub fn coefficient_preset(name: &str) -> Result<Coefficient> {
    match name {
        "one" | "1" => Ok(Coefficient::one()),
        "zero" | "0" => Ok(Coefficient::zero()),
        "x" => Ok(Coefficient::x()),
        "x2" | "x^2" => Ok(Coefficient::x_squared()),
        "xexp" => Ok(Coefficient::xexp()),
        "1+x" => Ok(Coefficient::one_plus_x()),
        "exp" => Ok(Coefficient::exp()),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|c| c.is_finite())
            .map(Coefficient::constant)
            .ok_or_else(|| Error::UnknownCoefficient(other.to_string())),
    }
}

pub const PRESET_NAMES: &[&str] = &["one", "zero", "x", "x2", "xexp", "1+x", "exp"];
