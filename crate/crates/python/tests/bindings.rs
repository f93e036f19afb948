use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

fn with_module<R>(f: impl FnOnce(&Bound<'_, PyModule>) -> R) -> R {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "cuweno_py").unwrap();
        cuweno_py::cuweno_py(&m).unwrap();
        f(&m)
    })
}

#[test]
fn exact_coefficients_cross_the_boundary() {
    with_module(|m| {
        let d = m.getattr("coefficients").unwrap().call1((2, true)).unwrap();
        let d = d.cast::<PyDict>().unwrap();
        let c: Vec<String> = d.get_item("c_full").unwrap().unwrap().extract().unwrap();
        assert_eq!(c, ["-1/12", "7/12", "7/12", "-1/12"]);
    });
}

#[test]
fn run_returns_primitive_profiles() {
    with_module(|m| {
        let kwargs = PyDict::new(m.py());
        kwargs.set_item("problem", "lax").unwrap();
        kwargs.set_item("n", 50).unwrap();
        kwargs.set_item("t_final", 0.1).unwrap();
        let d = m.getattr("run").unwrap().call((), Some(&kwargs)).unwrap();
        let d = d.cast::<PyDict>().unwrap();
        let rho: Vec<f64> = d.get_item("density").unwrap().unwrap().extract().unwrap();
        assert_eq!(rho.len(), 50);
        assert!(rho.iter().all(|r| *r > 0.3 && *r < 1.5));
        let t: f64 = d.get_item("t").unwrap().unwrap().extract().unwrap();
        assert!((t - 0.1).abs() < 1e-12);
    });
}

#[test]
fn bad_input_raises_value_error() {
    with_module(|m| {
        let err = m.getattr("weights").unwrap().call1(("za6", vec![1.0, 2.0])).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(m.py()));
        let err = m.getattr("adr").unwrap().call1(("zz6",)).unwrap_err();
        assert!(err.to_string().contains("unknown scheme"), "{err}");
    });
}
