//! Python bindings: module `glt`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;

use glt_core::analysis::{
    self, acs_certificate, case_default_suite, canonical_family, default_ms, default_ns, hat_suite, Mode,
    TestFunction, DEFAULT_QUAD_RES,
};
use glt_core::builders::{self, DiscretizationCase};
use glt_core::symbol;
use glt_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::UnknownCase(_)
        | Error::UnknownCoefficient(_)
        | Error::UnknownFamily(_)
        | Error::InvalidArgument(_)
        | Error::ContinuityRequired(_)
        | Error::UnboundedSymbol
        | Error::Json(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn parse_mode(mode: &str) -> PyResult<Mode> {
    mode.parse().map_err(py_err)
}

/// A registered discretization case, e.g. `Case("fe_t1:a=exp,c=x")`.
#[pyclass(module = "glt", frozen)]
struct Case {
    spec: String,
    inner: DiscretizationCase,
}

#[pymethods]
impl Case {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self { spec: spec.to_string(), inner: builders::case_from_spec(spec).map_err(py_err)? })
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn symbol(&self) -> &str {
        self.inner.symbol_label()
    }

    #[getter]
    fn normalization(&self) -> &'static str {
        self.inner.normalization().label()
    }

    #[getter]
    fn symmetry(&self) -> String {
        self.inner.symmetry().to_string()
    }

    #[getter]
    fn bounded_symbol(&self) -> bool {
        self.inner.bounded_symbol()
    }

    #[getter]
    fn min_n(&self) -> usize {
        self.inner.min_n()
    }

    fn alpha(&self, n: usize) -> f64 {
        self.inner.alpha(n)
    }

    /// Dense rows of the unscaled matrix (stiffness for pencil cases).
    fn matrix(&self, n: usize) -> PyResult<Vec<Vec<f64>>> {
        let built = self.inner.build(n).map_err(py_err)?;
        Ok(built.to_dense().map_err(py_err)?.to_rows())
    }

    /// Sorted eigenvalues (`mode="lambda"`) or singular values (`"sigma"`) of `alpha_n A_n`.
    #[pyo3(signature = (n, mode = "lambda"))]
    fn spectrum(&self, py: Python<'_>, n: usize, mode: &str) -> PyResult<Vec<f64>> {
        let mode = parse_mode(mode)?;
        let case = &self.inner;
        py.allow_threads(|| {
            let built = case.build(n)?;
            let alpha = case.alpha(n);
            match mode {
                Mode::Lambda => built.real_eigenvalues(alpha),
                Mode::Sigma => built.singular_values(alpha),
            }
        })
        .map(|s| s.into_values())
        .map_err(py_err)
    }

    /// Symbol value at `(x, theta)` as a complex number.
    fn symbol_at(&self, x: f64, theta: f64) -> PyResult<num_complex::Complex64> {
        self.inner.symbol().eval(x, theta).map_err(py_err)
    }

    fn symbol_json(&self) -> String {
        symbol::json::to_json_string(self.inner.symbol())
    }

    fn __repr__(&self) -> String {
        format!("Case({:?})", self.spec)
    }
}

/// Weyl or rearrangement comparison; `json` holds the full report.
#[pyclass(module = "glt", frozen)]
struct Report {
    inner: analysis::DistributionReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn case(&self) -> &str {
        &self.inner.case
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn alpha_n(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn spectrum(&self) -> Vec<f64> {
        self.inner.spectrum.values().to_vec()
    }

    #[getter]
    fn max_gap(&self) -> f64 {
        self.inner.max_gap()
    }

    #[getter]
    fn rearrangement_gap(&self) -> Option<f64> {
        self.inner.rearrangement_gap
    }

    #[getter]
    fn outliers(&self) -> usize {
        self.inner.outliers.count
    }

    /// `(label, empirical, symbol, gap)` per test function.
    #[getter]
    fn functionals(&self) -> Vec<(String, f64, f64, f64)> {
        self.inner
            .functionals
            .iter()
            .map(|r| (r.label.clone(), r.empirical, r.symbol, r.gap))
            .collect()
    }

    /// `(t, rearrangement, eigenvalue)` rows.
    #[getter]
    fn overlay(&self) -> Vec<(f64, f64, f64)> {
        self.inner.overlay.iter().map(|o| (o.t, o.rearrangement, o.eigenvalue)).collect()
    }

    fn json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Report(case={:?}, n={}, max_gap={:e})", self.inner.case, self.inner.n, self.inner.max_gap())
    }
}

/// Weyl comparison on the default monomial suite, or on `hats` hat
/// functions over `window` when given.
#[pyfunction]
#[pyo3(signature = (case, n, mode = "lambda", quad_res = DEFAULT_QUAD_RES, window = None, hats = 7))]
fn weyl_compare(
    py: Python<'_>,
    case: &Case,
    n: usize,
    mode: &str,
    quad_res: usize,
    window: Option<(f64, f64)>,
    hats: usize,
) -> PyResult<Report> {
    let mode = parse_mode(mode)?;
    let c = &case.inner;
    py.allow_threads(|| {
        let suite: Vec<TestFunction> = match window {
            Some(w) => hat_suite(w, hats)?,
            None => case_default_suite(c, mode)?,
        };
        analysis::weyl_compare(c, n, &suite, mode, quad_res)
    })
    .map(|inner| Report { inner })
    .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (case, n, r = 1000))]
fn rearrangement_compare(py: Python<'_>, case: &Case, n: usize, r: usize) -> PyResult<Report> {
    let c = &case.inner;
    py.allow_threads(|| analysis::rearrangement_compare(c, n, r))
        .map(|inner| Report { inner })
        .map_err(py_err)
}

/// Samples of the lattice-sorted monotone rearrangement of a case symbol at `ts`.
#[pyfunction]
fn rearrangement(py: Python<'_>, case: &Case, r: usize, ts: Vec<f64>) -> PyResult<Vec<f64>> {
    let c = &case.inner;
    py.allow_threads(|| {
        let rr = analysis::case_rearrangement(c, r)?;
        ts.iter().map(|&t| rr.eval(t)).collect::<glt_core::Result<Vec<f64>>>()
    })
    .map_err(py_err)
}

/// Runs a certificate family; returns `(pass, lines)`.
#[pyfunction]
#[pyo3(signature = (family, ns = None, ms = None))]
fn certify(py: Python<'_>, family: &str, ns: Option<Vec<usize>>, ms: Option<Vec<usize>>) -> PyResult<(bool, Vec<String>)> {
    let fam = canonical_family(family).map_err(py_err)?;
    py.allow_threads(|| {
        let ns = match ns {
            Some(v) => v,
            None => default_ns(fam)?,
        };
        let ms = match ms {
            Some(v) => v,
            None => default_ms(fam)?,
        };
        acs_certificate(fam, &ns, &ms)
    })
    .map(|rep| (rep.pass, rep.lines()))
    .map_err(py_err)
}

/// `(n, gap, reference, pass)` rows of the rearrangement gap table.
#[pyfunction]
#[pyo3(signature = (r = analysis::TABLE2_R))]
fn table2(py: Python<'_>, r: usize) -> PyResult<Vec<(usize, f64, f64, bool)>> {
    py.allow_threads(|| analysis::table2(r))
        .map(|rows| rows.iter().map(|x| (x.n, x.gap, x.reference, x.pass)).collect())
        .map_err(py_err)
}

#[pyfunction]
fn list_cases(py: Python<'_>) -> Bound<'_, PyList> {
    PyList::new_bound(py, builders::list_cases())
}

#[pymodule]
pub fn glt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Case>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(list_cases, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_compare, m)?)?;
    m.add_function(wrap_pyfunction!(rearrangement_compare, m)?)?;
    m.add_function(wrap_pyfunction!(rearrangement, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(table2, m)?)?;
    m.add("CASE_NAMES", builders::CASE_NAMES.to_vec())?;
    Ok(())
}
