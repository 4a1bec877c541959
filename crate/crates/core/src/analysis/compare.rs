use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::functionals::{default_suite, empirical_functional, symbol_functionals, symbol_range, TestFunction};
use crate::builders::{Assembled, DiscretizationCase, Symmetry};
use crate::error::{Error, Result};
use crate::linalg::SpectralSet;
use crate::symbol::{monotone_rearrangement, Rearrangement};

pub const DEFAULT_QUAD_RES: usize = 400;
pub const DEFAULT_OUTLIER_EPS: f64 = 1e-8;
/// Gaps at or below this are roundoff and count as zero in decay checks.
pub const WEYL_GAP_FLOOR: f64 = 1e-10;
/// Lattice used to find the symbol range for default suites and outliers.
const RANGE_RES: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Singular values of `alpha_n A_n` against `|kappa|`.
    Sigma,
    /// Eigenvalues of `alpha_n A_n` against `kappa`.
    Lambda,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma" => Ok(Mode::Sigma),
            "lambda" => Ok(Mode::Lambda),
            other => Err(Error::InvalidArgument(format!("mode must be sigma or lambda, got `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sigma => "sigma",
            Mode::Lambda => "lambda",
        })
    }
}

/// Why the comparison is expected to converge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backing {
    /// Singular value distribution of a GLT sequence.
    SingularValues,
    /// Hermitian matrices (or similar to Hermitian ones).
    Hermitian,
    /// Hermitian part plus a defect of spectral norm `o(n^{1/2})`.
    HermitianPerturbation,
    /// No eigenvalue result applies; the comparison is empirical only.
    Exploratory,
}

/// Cases whose nonsymmetric defect has a proved small-norm bound.
const PERTURBATION_BACKED: &[&str] = &["fd_t2", "fd_t3", "fd_t4", "fd_t5", "fe_t1"];

pub fn backing(case: &DiscretizationCase, mode: Mode) -> Backing {
    match (mode, case.symmetry()) {
        (Mode::Sigma, _) => Backing::SingularValues,
        (Mode::Lambda, Symmetry::Symmetric | Symmetry::Symmetrizable) => Backing::Hermitian,
        (Mode::Lambda, Symmetry::Nonsymmetric) if PERTURBATION_BACKED.contains(&case.name()) => {
            Backing::HermitianPerturbation
        }
        (Mode::Lambda, Symmetry::Nonsymmetric) => Backing::Exploratory,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalRow {
    pub test_function: TestFunction,
    pub label: String,
    pub empirical: f64,
    pub symbol: f64,
    pub gap: f64,
    /// Quadrature refinement estimate of the symbol side.
    pub quad_refinement: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutlierReport {
    pub lo: f64,
    pub hi: f64,
    pub eps: f64,
    pub count: usize,
    pub values: Vec<f64>,
}

/// Spectrum values outside `[lo - eps, hi + eps]`.
pub fn outlier_count(s: &SpectralSet, lo: f64, hi: f64, eps: f64) -> OutlierReport {
    let values: Vec<f64> = s
        .values()
        .iter()
        .copied()
        .filter(|&v| v < lo - eps || v > hi + eps)
        .collect();
    OutlierReport { lo, hi, eps, count: values.len(), values }
}

/// One row of the spectrum against rearrangement overlay.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlayRow {
    pub t: f64,
    pub rearrangement: f64,
    pub eigenvalue: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub case: String,
    pub n: usize,
    #[serde(rename = "alpha_n")]
    pub alpha: f64,
    pub mode: Mode,
    pub backing: Backing,
    pub spectrum: SpectralSet,
    pub functionals: Vec<FunctionalRow>,
    pub quad_res: Option<usize>,
    pub rearrangement_gap: Option<f64>,
    pub rearrangement_r: Option<usize>,
    pub outliers: OutlierReport,
    #[serde(skip)]
    pub overlay: Vec<OverlayRow>,
}

impl DistributionReport {
    /// Largest functional gap, 0 when there are none.
    pub fn max_gap(&self) -> f64 {
        self.functionals.iter().fold(0.0, |m, r| m.max(r.gap))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))
    }

    pub const CSV_HEADER: &'static str = "case,n,alpha_n,mode,test_function,empirical,symbol,gap,quad_refinement";

    /// One CSV row per test function (no header).
    pub fn csv_rows(&self) -> Vec<String> {
        self.functionals
            .iter()
            .map(|r| {
                format!(
                    "{},{},{:e},{},\"{}\",{:.16e},{:.16e},{:.16e},{:.16e}",
                    self.case, self.n, self.alpha, self.mode, r.label, r.empirical, r.symbol, r.gap, r.quad_refinement
                )
            })
            .collect()
    }
}

/// Decay check between two sizes: the fine gap is at most `coarse / factor`,
/// or both gaps are below [`WEYL_GAP_FLOOR`].
pub fn gap_decayed(coarse: f64, fine: f64, factor: f64) -> bool {
    fine <= coarse / factor || (coarse <= WEYL_GAP_FLOOR && fine <= WEYL_GAP_FLOOR)
}

fn spectrum(built: &Assembled, alpha: f64, mode: Mode) -> Result<SpectralSet> {
    match mode {
        Mode::Lambda => built.real_eigenvalues(alpha),
        Mode::Sigma => built.singular_values(alpha),
    }
}

/// Symbol range on the case's domain, `|kappa|` in sigma mode.
pub fn case_symbol_range(case: &DiscretizationCase, mode: Mode) -> Result<(f64, f64)> {
    if !case.bounded_symbol() {
        return Err(Error::UnboundedSymbol);
    }
    symbol_range(case.symbol(), case.symbol_rect(), RANGE_RES, mode == Mode::Sigma)
}

/// Default monomial suite for a bounded case.
pub fn case_default_suite(case: &DiscretizationCase, mode: Mode) -> Result<Vec<TestFunction>> {
    let (lo, hi) = case_symbol_range(case, mode)?;
    default_suite(lo, hi)
}

/// Weyl comparison of `(1/n) sum F(lambda_i)` (or `sigma_i`) against the
/// normalized symbol integral for every `F` in `suite`.
pub fn weyl_compare(
    case: &DiscretizationCase,
    n: usize,
    suite: &[TestFunction],
    mode: Mode,
    quad_res: usize,
) -> Result<DistributionReport> {
    let alpha = case.alpha(n);
    let built = case.build(n)?;
    let spec = spectrum(&built, alpha, mode)?;
    let sym = symbol_functionals(case.symbol(), case.symbol_rect(), suite, quad_res, mode == Mode::Sigma)?;
    let functionals = suite
        .iter()
        .zip(&sym)
        .map(|(f, s)| {
            let empirical = empirical_functional(&spec, f);
            FunctionalRow {
                test_function: *f,
                label: f.label(),
                empirical,
                symbol: s.value,
                gap: (empirical - s.value).abs(),
                quad_refinement: s.refinement,
            }
        })
        .collect();
    let (lo, hi) = if case.bounded_symbol() {
        case_symbol_range(case, mode)?
    } else {
        (
            symbol_range(case.symbol(), case.symbol_rect(), RANGE_RES, mode == Mode::Sigma)?.0,
            f64::INFINITY,
        )
    };
    let outliers = outlier_count(&spec, lo, hi, DEFAULT_OUTLIER_EPS);
    Ok(DistributionReport {
        case: case.name().to_string(),
        n,
        alpha,
        mode,
        backing: backing(case, mode),
        spectrum: spec,
        functionals,
        quad_res: Some(quad_res),
        rearrangement_gap: None,
        rearrangement_r: None,
        outliers,
        overlay: Vec::new(),
    })
}

/// Lattice-sorted approximation of the case symbol's monotone rearrangement.
pub fn case_rearrangement(case: &DiscretizationCase, r: usize) -> Result<Rearrangement> {
    if !case.bounded_symbol() {
        return Err(Error::UnboundedSymbol);
    }
    monotone_rearrangement(case.symbol(), case.symbol_rect(), r)
}

/// `|s_n - e_n|_inf` with `e_n` the sorted eigenvalues of `alpha_n A_n` and
/// `s_n = (kappa_r(i/n))_{i=1..n}`.
pub fn rearrangement_compare(case: &DiscretizationCase, n: usize, r: usize) -> Result<DistributionReport> {
    let rearr = case_rearrangement(case, r)?;
    rearrangement_compare_with(case, n, &rearr)
}

/// Same as [`rearrangement_compare`] with a precomputed rearrangement.
pub fn rearrangement_compare_with(
    case: &DiscretizationCase,
    n: usize,
    rearr: &Rearrangement,
) -> Result<DistributionReport> {
    if !case.bounded_symbol() {
        return Err(Error::UnboundedSymbol);
    }
    let alpha = case.alpha(n);
    let spec = case.build(n)?.real_eigenvalues(alpha)?;
    let mut overlay = Vec::with_capacity(n);
    let mut gap: f64 = 0.0;
    for (i, &e) in spec.values().iter().enumerate() {
        let t = (i + 1) as f64 / n as f64;
        let s = rearr.eval(t)?;
        gap = gap.max((s - e).abs());
        overlay.push(OverlayRow { t, rearrangement: s, eigenvalue: e });
    }
    let outliers = outlier_count(&spec, rearr.ess_inf(), rearr.ess_sup(), DEFAULT_OUTLIER_EPS);
    Ok(DistributionReport {
        case: case.name().to_string(),
        n,
        alpha,
        mode: Mode::Lambda,
        backing: backing(case, Mode::Lambda),
        spectrum: spec,
        functionals: Vec::new(),
        quad_res: None,
        rearrangement_gap: Some(gap),
        rearrangement_r: Some(rearr.r()),
        outliers,
        overlay,
    })
}

/// Reference gaps for `fd_t1` with `a(x) = x e^{-x}`.
pub const TABLE2_REFERENCE: [(usize, f64); 6] =
    [(50, 0.0327), (100, 0.0165), (200, 0.0083), (400, 0.0042), (800, 0.0022), (1600, 0.0011)];
pub const TABLE2_R: usize = 5000;
pub const TABLE2_CASE: &str = "fd_t1:a=xexp";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub n: usize,
    pub gap: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Allowed deviation from a reference gap: `max(5e-4, 5%)`.
pub fn table2_tolerance(reference: f64) -> f64 {
    (5e-4f64).max(0.05 * reference.abs())
}

/// Rearrangement gaps of [`TABLE2_CASE`] at the reference sizes.
pub fn table2(r: usize) -> Result<Vec<Table2Row>> {
    let case = crate::builders::case_from_spec(TABLE2_CASE)?;
    let rearr = case_rearrangement(&case, r)?;
    TABLE2_REFERENCE
        .iter()
        .map(|&(n, reference)| {
            let gap = rearrangement_compare_with(&case, n, &rearr)?
                .rearrangement_gap
                .unwrap_or(f64::NAN);
            let tolerance = table2_tolerance(reference);
            Ok(Table2Row { n, gap, reference, tolerance, pass: (gap - reference).abs() <= tolerance })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{case_from_spec, fd_diffusion};
    use crate::linalg::SpectrumKind;
    use crate::symbol::Coefficient;

    #[test]
    fn constant_laplacian_linear_gap_vanishes() {
        let case = fd_diffusion(Coefficient::one());
        let f = TestFunction::monomial(1, -1.0, 5.0).unwrap();
        let rep = weyl_compare(&case, 200, &[f], Mode::Lambda, 50).unwrap();
        assert!(rep.functionals[0].gap < 1e-10);
        assert_eq!(rep.backing, Backing::Hermitian);
        assert_eq!(rep.outliers.count, 0);
    }

    #[test]
    fn xexp_functional_gap_decreases() {
        let case = fd_diffusion(Coefficient::xexp());
        let f = TestFunction::monomial(1, -1.0, 5.0).unwrap();
        let g = |n| weyl_compare(&case, n, &[f], Mode::Lambda, 100).unwrap().functionals[0].gap;
        let exact = 2.0 * (1.0 - 2.0 / std::f64::consts::E);
        let rep = weyl_compare(&case, 100, &[f], Mode::Lambda, 100).unwrap();
        assert!((rep.functionals[0].symbol - exact).abs() < 1e-10);
        assert!(g(200) < g(50));
    }

    #[test]
    fn reference_gap_first_row() {
        let case = fd_diffusion(Coefficient::xexp());
        let rep = rearrangement_compare(&case, 50, 1000).unwrap();
        let gap = rep.rearrangement_gap.unwrap();
        assert!((gap - 0.0327).abs() < 2e-3, "{gap}");
        assert_eq!(rep.outliers.count, 0);
        assert_eq!(rep.overlay.len(), 50);
    }

    #[test]
    fn unbounded_symbol_refused() {
        let case = case_from_spec("fd_t7:q=2").unwrap();
        assert!(matches!(rearrangement_compare(&case, 20, 50), Err(Error::UnboundedSymbol)));
        assert!(matches!(case_default_suite(&case, Mode::Sigma), Err(Error::UnboundedSymbol)));
    }

    #[test]
    fn outliers() {
        let s = SpectralSet::new(vec![0.5, 1.0, 10.0], SpectrumKind::Eigenvalues);
        let o = outlier_count(&s, 0.0, 2.0, 1e-8);
        assert_eq!((o.count, o.values.clone()), (1, vec![10.0]));
        assert_eq!(outlier_count(&s, 0.0, 2.0, 100.0).count, 0);
    }

    #[test]
    fn json_round_trip() {
        let case = fd_diffusion(Coefficient::x());
        let suite = case_default_suite(&case, Mode::Lambda).unwrap();
        let rep = weyl_compare(&case, 20, &suite, Mode::Sigma, 20).unwrap();
        let text = rep.to_json().to_string();
        let back = DistributionReport::from_json_str(&text).unwrap();
        assert_eq!(back, rep);
        for key in ["case", "n", "alpha_n", "functionals", "rearrangement_gap", "outliers"] {
            assert!(rep.to_json().get(key).is_some(), "{key}");
        }
        assert_eq!(rep.csv_rows().len(), 4);
    }
}
