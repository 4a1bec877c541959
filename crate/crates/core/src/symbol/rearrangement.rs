use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::SymbolExpr;

/// Rectangle `[x0, x1]` or `[x0, x1] x [t0, t1]` on which a symbol is sampled.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: (f64, f64),
    pub theta: Option<(f64, f64)>,
}

impl Rect {
    /// `[0,1] x [-pi,pi]`.
    pub fn full() -> Self {
        Self {
            x: (0.0, 1.0),
            theta: Some((-PI, PI)),
        }
    }

    /// `[0,1] x [0,pi]`, enough for symbols even in theta.
    pub fn half() -> Self {
        Self {
            x: (0.0, 1.0),
            theta: Some((0.0, PI)),
        }
    }

    /// `[0,1]`, for symbols that do not depend on theta.
    pub fn unit_interval() -> Self {
        Self {
            x: (0.0, 1.0),
            theta: None,
        }
    }

    pub fn dim(&self) -> u32 {
        if self.theta.is_some() {
            2
        } else {
            1
        }
    }

    pub fn measure(&self) -> f64 {
        let mx = self.x.1 - self.x.0;
        self.theta.map_or(mx, |(a, b)| mx * (b - a))
    }

    fn validate(&self) -> Result<()> {
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && b > a;
        if !ok(self.x) || !self.theta.is_none_or(ok) {
            return Err(Error::InvalidArgument(format!("degenerate rectangle {self:?}")));
        }
        Ok(())
    }
}

/// Piecewise-linear approximation of the monotone rearrangement of a symbol
/// built from sorted uniform-lattice samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rearrangement {
    samples: Vec<f64>,
    rect: Rect,
    r: usize,
    excluded: usize,
}

/// Samples `kappa` at `a_j + i_j (b_j - a_j) / r`, `i_j = 1..r`, sorts the
/// values and interpolates them over equally spaced nodes of [0, 1].
/// Singular lattice points are skipped and counted.
pub fn monotone_rearrangement(kappa: &SymbolExpr, rect: Rect, r: usize) -> Result<Rearrangement> {
    if r == 0 {
        return Err(Error::InvalidArgument("rearrangement needs r >= 1".into()));
    }
    rect.validate()?;
    let (x0, x1) = rect.x;
    let xs: Vec<f64> = (1..=r).map(|i| x0 + i as f64 * (x1 - x0) / r as f64).collect();
    let thetas: Vec<f64> = match rect.theta {
        Some((t0, t1)) => (1..=r).map(|i| t0 + i as f64 * (t1 - t0) / r as f64).collect(),
        None => vec![0.0],
    };
    let mut samples = Vec::with_capacity(xs.len() * thetas.len());
    let mut excluded = 0usize;
    for &x in &xs {
        for &t in &thetas {
            match kappa.eval_real(x, t) {
                Ok(v) => samples.push(v),
                Err(Error::SingularPoint { .. }) => excluded += 1,
                Err(e) => return Err(e),
            }
        }
    }
    if samples.is_empty() {
        return Err(Error::EverywhereSingular);
    }
    samples.sort_unstable_by(f64::total_cmp);
    Ok(Rearrangement {
        samples,
        rect,
        r,
        excluded,
    })
}

impl Rearrangement {
    /// Value at `t in [0, 1]`; nodes are equally spaced with the first sample
    /// at 0 and the last at 1.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "rearrangement argument {t} outside [0, 1]"
            )));
        }
        let n = self.samples.len();
        if n == 1 {
            return Ok(self.samples[0]);
        }
        let pos = t * (n - 1) as f64;
        let i = (pos.floor() as usize).min(n - 2);
        let s = pos - i as f64;
        Ok(self.samples[i] + s * (self.samples[i + 1] - self.samples[i]))
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of lattice points skipped as singular.
    pub fn excluded(&self) -> usize {
        self.excluded
    }

    /// Approximate essential infimum.
    pub fn ess_inf(&self) -> f64 {
        self.samples[0]
    }

    /// Approximate essential supremum.
    pub fn ess_sup(&self) -> f64 {
        self.samples[self.samples.len() - 1]
    }
}
