use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type Func = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Finite set of points in [0, 1] with its deviation from `{i/n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
    au_deviation: f64,
}

impl Grid {
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("grid needs at least one point".into()));
        }
        if points.iter().any(|x| !x.is_finite() || *x < 0.0 || *x > 1.0) {
            return Err(Error::InvalidArgument("grid points must lie in [0, 1]".into()));
        }
        if points.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument("grid points must be nondecreasing".into()));
        }
        let n = points.len() as f64;
        let au_deviation = points
            .iter()
            .enumerate()
            .map(|(i, x)| (x - (i + 1) as f64 / n).abs())
            .fold(0.0, f64::max);
        Ok(Self { points, au_deviation })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// m(G_n) = max_i |x_i - i/n|.
    pub fn au_deviation(&self) -> f64 {
        self.au_deviation
    }
}

/// `{i/n}_{i=1..n}`.
pub fn uniform_grid(n: usize) -> Result<Grid> {
    if n == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    Grid::from_points((1..=n).map(|i| i as f64 / n as f64).collect())
}

/// `{j h}_{j=1..n}` with `h = 1/(n+1)`: interior nodes of the standard FD mesh.
pub fn fd_node_grid(n: usize) -> Result<Grid> {
    if n == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    Grid::from_points((1..=n).map(|j| j as f64 / (n + 1) as f64).collect())
}

/// `{G(j/(n+1))}_{j=1..n}`.
pub fn mapped_grid(map: &GridMap, n: usize) -> Result<Grid> {
    if n == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    Grid::from_points((1..=n).map(|j| map.eval(j as f64 / (n + 1) as f64)).collect())
}

/// Increasing bijection of [0, 1] with its derivative.
#[derive(Clone)]
pub struct GridMap {
    name: String,
    g: Func,
    dg: Func,
    singular_points: Vec<f64>,
}

const MAP_PROBES: usize = 1001;
const ENDPOINT_TOL: f64 = 1e-12;

impl GridMap {
    /// Checks `G(0) = 0`, `G(1) = 1`, monotonicity and `G' >= 0` on a probe lattice.
    pub fn new(
        name: impl Into<String>,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dg: impl Fn(f64) -> f64 + Send + Sync + 'static,
        singular_points: Vec<f64>,
    ) -> Result<Self> {
        let map = Self {
            name: name.into(),
            g: Arc::new(g),
            dg: Arc::new(dg),
            singular_points,
        };
        let (g0, g1) = (map.eval(0.0), map.eval(1.0));
        if (g0).abs() > ENDPOINT_TOL || (g1 - 1.0).abs() > ENDPOINT_TOL {
            return Err(Error::InvalidArgument(format!(
                "grid map must fix the endpoints, got G(0)={g0}, G(1)={g1}"
            )));
        }
        let mut prev = g0;
        for i in 1..MAP_PROBES {
            let t = i as f64 / (MAP_PROBES - 1) as f64;
            let v = map.eval(t);
            if !(v > prev) {
                return Err(Error::MapNotIncreasing { step: i, value: v - prev });
            }
            if map.derivative(t) < 0.0 {
                return Err(Error::InvalidArgument(format!("G'({t}) is negative")));
            }
            prev = v;
        }
        Ok(map)
    }

    pub fn identity() -> Self {
        Self::new("identity", |x| x, |_| 1.0, Vec::new()).expect("identity is a bijection")
    }

    /// `G(x) = x^q`, singular at 0 when `q > 1`.
    pub fn power(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidArgument(format!("map exponent must be positive, got {q}")));
        }
        let singular = if q > 1.0 { vec![0.0] } else { Vec::new() };
        Self::new(format!("x^{q}"), move |x: f64| x.powf(q), move |x: f64| q * x.powf(q - 1.0), singular)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.g)(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (self.dg)(x)
    }

    /// Points where `G'` vanishes.
    pub fn singular_points(&self) -> &[f64] {
        &self.singular_points
    }

    pub fn is_singular(&self) -> bool {
        !self.singular_points.is_empty()
    }
}

impl fmt::Debug for GridMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridMap")
            .field("name", &self.name)
            .field("singular_points", &self.singular_points)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_has_zero_deviation() {
        let g = uniform_grid(4).unwrap();
        assert_eq!(g.points(), &[0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.au_deviation(), 0.0);
    }

    #[test]
    fn squared_map_points() {
        let g = mapped_grid(&GridMap::power(2.0).unwrap(), 3).unwrap();
        let expect = [1.0 / 16.0, 4.0 / 16.0, 9.0 / 16.0];
        for (x, e) in g.points().iter().zip(expect) {
            assert!((x - e).abs() < 1e-15);
        }
    }

    #[test]
    fn fd_nodes_deviation_closed_form() {
        for n in [1, 7, 100] {
            let g = fd_node_grid(n).unwrap();
            assert!((g.au_deviation() - 1.0 / (n + 1) as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn non_bijective_map_rejected() {
        assert!(GridMap::new("half", |x| 0.5 * x, |_| 0.5, vec![]).is_err());
        assert!(matches!(
            GridMap::new("bump", |x: f64| x + 0.2 * (std::f64::consts::TAU * x).sin(), |_| 1.0, vec![]),
            Err(Error::MapNotIncreasing { .. })
        ));
    }
}
