use pyo3::prelude::*;

fn with_module<R>(f: impl FnOnce(Python<'_>, &Bound<'_, PyModule>) -> PyResult<R>) -> R {
    pyo3::prepare_freethreaded_python();
    Python::with_gil(|py| {
        let m = PyModule::new_bound(py, "glt").unwrap();
        glt::glt(&m).unwrap();
        f(py, &m).unwrap()
    })
}

#[test]
fn case_spectrum_and_listing() {
    with_module(|_py, m| {
        let lines: Vec<String> = m.getattr("list_cases")?.call0()?.extract()?;
        assert_eq!(lines.len(), 11);
        let case = m.getattr("Case")?.call1(("fd_t1",))?;
        let vals: Vec<f64> = case.call_method1("spectrum", (4,))?.extract()?;
        let exact = 2.0 - 2.0 * (std::f64::consts::PI / 5.0).cos();
        assert!((vals[0] - exact).abs() < 1e-14);
        assert_eq!(case.getattr("normalization")?.extract::<String>()?, "1");
        Ok(())
    });
}

#[test]
fn errors_map_to_python_exceptions() {
    with_module(|py, m| {
        let err = m.getattr("Case")?.call1(("nope",)).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
        let err = m.getattr("certify")?.call1(("bogus",)).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
        Ok(())
    });
}

#[test]
fn reports_expose_gaps() {
    with_module(|_py, m| {
        let case = m.getattr("Case")?.call1(("fd_t1:a=xexp",))?;
        let rep = m.getattr("rearrangement_compare")?.call1((case, 40, 200))?;
        let gap: Option<f64> = rep.getattr("rearrangement_gap")?.extract()?;
        assert!(gap.unwrap() < 0.1);
        let rows: Vec<(f64, f64, f64)> = rep.getattr("overlay")?.extract()?;
        assert_eq!(rows.len(), 40);
        Ok(())
    });
}
