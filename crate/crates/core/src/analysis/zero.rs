use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{schatten_from_values, singular_values, Matrix};

/// Default required decay of the trend ratio between the first and last `n`.
pub const DEFAULT_DECAY_FACTOR: f64 = 2.0;
/// Singular values below this multiple of the largest one do not count toward rank.
pub const RANK_TOL: f64 = 1e-10;
/// Norms below this are treated as zero in trend checks.
const ZERO_NORM: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroTrendRow {
    pub n: usize,
    pub norm: f64,
    /// `|Z_n|_p / n^{1/p}`.
    pub ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSplitRow {
    pub n: usize,
    pub rank: usize,
    pub rank_ratio: f64,
    /// Spectral norm of the small-norm part.
    pub small_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroDistributionReport {
    pub p: f64,
    pub decay_factor: f64,
    pub rows: Vec<ZeroTrendRow>,
    pub monotone: bool,
    pub decayed: bool,
    pub trend_pass: bool,
    pub split: Option<Vec<ZeroSplitRow>>,
    pub split_pass: Option<bool>,
    pub pass: bool,
}

/// Schatten p-norm; `p = 2` uses the Frobenius norm without an SVD.
pub fn matrix_schatten(a: &Matrix, p: f64) -> Result<f64> {
    if p == 2.0 {
        return Ok(a.frobenius_norm());
    }
    schatten_from_values(singular_values(&a.to_dense())?.values(), p)
}

fn decreasing_trend(vals: &[f64], factor: f64) -> (bool, bool) {
    if vals.iter().all(|&v| v <= ZERO_NORM) {
        return (true, true);
    }
    let monotone = vals.windows(2).all(|w| w[1] <= w[0]);
    let decayed = vals.last().copied().unwrap_or(0.0) < vals[0] / factor;
    (monotone, decayed)
}

fn numeric_rank(a: &Matrix) -> Result<(usize, f64)> {
    let s = singular_values(&a.to_dense())?;
    let max = s.max().unwrap_or(0.0);
    if max <= ZERO_NORM {
        return Ok((0, max));
    }
    Ok((s.values().iter().filter(|&&v| v > RANK_TOL * max).count(), max))
}

/// Trend check of `|Z_n|_p / n^{1/p}` over `ns` (ascending). PASS when the
/// ratio decreases monotonically and the last value is below
/// `first / decay_factor`. When `split` supplies `(R_n, N_n)` with
/// `Z_n = R_n + N_n`, the report also tracks `rank(R_n)/n` and `|N_n|_2`,
/// and the sequence passes if either test does.
pub fn zero_distribution_check(
    ns: &[usize],
    p: f64,
    decay_factor: f64,
    build: &dyn Fn(usize) -> Result<Matrix>,
    split: Option<&dyn Fn(usize) -> Result<(Matrix, Matrix)>>,
) -> Result<ZeroDistributionReport> {
    if ns.len() < 2 || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("n-list needs at least two ascending sizes".into()));
    }
    if !(p >= 1.0) || !(decay_factor > 1.0) {
        return Err(Error::InvalidArgument(format!("need p >= 1 and decay factor > 1, got {p}, {decay_factor}")));
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let z = build(n)?;
        let norm = matrix_schatten(&z, p)?;
        let ratio = if p.is_infinite() { norm } else { norm / (n as f64).powf(1.0 / p) };
        rows.push(ZeroTrendRow { n, norm, ratio });
    }
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let (monotone, decayed) = decreasing_trend(&ratios, decay_factor);
    let trend_pass = monotone && decayed;

    let (split_rows, split_pass) = match split {
        None => (None, None),
        Some(f) => {
            let mut out = Vec::with_capacity(ns.len());
            for &n in ns {
                let (r, small) = f(n)?;
                let (rank, _) = numeric_rank(&r)?;
                let small_norm = matrix_schatten(&small, f64::INFINITY)?;
                out.push(ZeroSplitRow { n, rank, rank_ratio: rank as f64 / n as f64, small_norm });
            }
            let rank_ratios: Vec<f64> = out.iter().map(|r| r.rank_ratio).collect();
            let norms: Vec<f64> = out.iter().map(|r| r.small_norm).collect();
            let (rm, rd) = decreasing_trend(&rank_ratios, decay_factor);
            let (nm, nd) = decreasing_trend(&norms, decay_factor);
            (Some(out), Some(rm && rd && nm && nd))
        }
    };
    let pass = trend_pass || split_pass == Some(true);
    Ok(ZeroDistributionReport {
        p,
        decay_factor,
        rows,
        monotone,
        decayed,
        trend_pass,
        split: split_rows,
        split_pass,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::fd::fd_convection_reaction;
    use crate::linalg::{BandedMatrix, DenseMatrix};
    use crate::symbol::Coefficient;

    const NS: &[usize] = &[20, 40, 80, 160];

    #[test]
    fn convection_reaction_passes() {
        let build = |n| Ok(fd_convection_reaction(&Coefficient::one(), &Coefficient::one(), n)?.into());
        let rep = zero_distribution_check(NS, 2.0, DEFAULT_DECAY_FACTOR, &build, None).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn identity_fails() {
        let build = |n| Ok(BandedMatrix::identity(n)?.into());
        for p in [2.0, f64::INFINITY] {
            let rep = zero_distribution_check(NS, p, DEFAULT_DECAY_FACTOR, &build, None).unwrap();
            assert!(!rep.pass);
            assert!(rep.rows.iter().all(|r| (r.ratio - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn rank_one_passes_by_split() {
        let e11 = |n: usize| {
            let mut d = vec![0.0; n];
            d[0] = 1.0;
            Ok(Matrix::from(BandedMatrix::from_diagonal(&d)?))
        };
        let split = |n: usize| Ok((e11(n)?, Matrix::from(DenseMatrix::zeros(n, n))));
        let rep = zero_distribution_check(NS, f64::INFINITY, DEFAULT_DECAY_FACTOR, &e11, Some(&split)).unwrap();
        assert!(!rep.trend_pass);
        assert_eq!(rep.split_pass, Some(true));
        assert!(rep.pass);
        assert!(rep.split.unwrap().iter().all(|r| r.rank == 1));
    }

    #[test]
    fn bad_inputs() {
        let build = |n| Ok(BandedMatrix::identity(n)?.into());
        assert!(zero_distribution_check(&[10], 2.0, 2.0, &build, None).is_err());
        assert!(zero_distribution_check(&[10, 5], 2.0, 2.0, &build, None).is_err());
        assert!(zero_distribution_check(&[5, 10], 0.5, 2.0, &build, None).is_err());
    }
}
