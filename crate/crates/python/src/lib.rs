use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cuweno::analysis::{self, critical_point_study, CRITICAL_RESOLUTIONS};
use cuweno::coeffgen::{tables, to_f64, Rational};
use cuweno::problems::{preset, Domain, ExactRiemann, Primitive, ProblemSpec, PRESETS};
use cuweno::solver::{self, Field, RunOptions, SolverError};
use cuweno::weno::{reconstruct_plus, SchemeKind, TauVariant, Window};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn tau_variant(tau: Option<&str>) -> PyResult<Option<TauVariant>> {
    match tau {
        None => Ok(None),
        Some("tau") => Ok(Some(TauVariant::Tau)),
        Some("tau_prime" | "tau-prime") => Ok(Some(TauVariant::TauPrime)),
        Some(other) => Err(PyValueError::new_err(format!("tau must be `tau` or `tau_prime`, got `{other}`"))),
    }
}

fn scheme_kind(name: &str, p: Option<f64>, eps: Option<f64>, eps_exponent: Option<f64>, tau: Option<&str>, ai: bool) -> PyResult<SchemeKind> {
    let kind: SchemeKind = name.parse().map_err(value_err)?;
    let mut w = kind.params;
    if let Some(p) = p {
        w.power = p;
    }
    if let Some(e) = eps {
        w.eps = e;
    }
    if eps_exponent.is_some() {
        w.eps_exponent = eps_exponent;
    }
    if let Some(t) = tau_variant(tau)? {
        w.tau_variant = t;
    }
    w.affine_invariant |= ai;
    w.validate().map_err(value_err)?;
    Ok(kind.with_params(w))
}

/// Names of every available scheme.
#[pyfunction]
fn schemes() -> Vec<String> {
    SchemeKind::catalog()
}

/// `(name, description)` of every built-in problem.
#[pyfunction]
fn presets() -> Vec<(String, String)> {
    PRESETS.iter().map(|p| (p.name.to_string(), p.description.to_string())).collect()
}

/// Reconstruction coefficients and smoothness matrices for substencil
/// width `r`, as floats or exact `"num/den"` strings.
#[pyfunction]
#[pyo3(signature = (r, exact = false))]
fn coefficients<'py>(py: Python<'py>, r: usize, exact: bool) -> PyResult<Bound<'py, PyDict>> {
    let t = tables(r).map_err(value_err)?;
    let d = PyDict::new(py);
    let conv = |v: &[Rational]| -> PyResult<Py<PyAny>> {
        Ok(if exact {
            v.iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect::<Vec<_>>().into_pyobject(py)?.into_any().unbind()
        } else {
            v.iter().map(to_f64).collect::<Vec<_>>().into_pyobject(py)?.into_any().unbind()
        })
    };
    d.set_item("r", r)?;
    d.set_item("c_full", conv(&t.c_full)?)?;
    d.set_item("c_upwind_full", conv(&t.c_upwind_full)?)?;
    d.set_item("c_sub", t.c_sub.iter().map(|c| conv(c)).collect::<PyResult<Vec<_>>>()?)?;
    d.set_item("d_central", conv(&t.d_central)?)?;
    d.set_item("d_upwind", conv(&t.d_upwind)?)?;
    let b = t
        .b
        .iter()
        .map(|m| m.iter().map(|row| conv(row)).collect::<PyResult<Vec<_>>>())
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("b", b)?;
    d.set_item("c_tau", conv(&t.c_tau)?)?;
    d.set_item("c_tau_prime", conv(&t.c_tau_prime)?)?;
    Ok(d)
}

/// Nonlinear weights of `scheme` on one window of samples; `None` for the
/// linear schemes.
#[pyfunction]
#[pyo3(signature = (scheme, samples, dx = 1.0, p = None, eps = None, eps_exponent = None, tau = None, ai = false))]
#[allow(clippy::too_many_arguments)]
fn weights(
    scheme: &str,
    samples: Vec<f64>,
    dx: f64,
    p: Option<f64>,
    eps: Option<f64>,
    eps_exponent: Option<f64>,
    tau: Option<&str>,
    ai: bool,
) -> PyResult<Option<Vec<f64>>> {
    let s = scheme_kind(scheme, p, eps, eps_exponent, tau, ai)?.build().map_err(value_err)?;
    if samples.len() != s.window_len() {
        return Err(PyValueError::new_err(format!("{scheme} needs {} samples, got {}", s.window_len(), samples.len())));
    }
    Ok(s.weights(&samples, dx))
}

/// Left-biased interface value `f̂⁺_{i+½}` from one window of samples.
#[pyfunction]
#[pyo3(signature = (scheme, samples, dx = 1.0, p = None, eps = None, eps_exponent = None, tau = None, ai = false))]
#[allow(clippy::too_many_arguments)]
fn reconstruct(
    scheme: &str,
    samples: Vec<f64>,
    dx: f64,
    p: Option<f64>,
    eps: Option<f64>,
    eps_exponent: Option<f64>,
    tau: Option<&str>,
    ai: bool,
) -> PyResult<f64> {
    let s = scheme_kind(scheme, p, eps, eps_exponent, tau, ai)?.build().map_err(value_err)?;
    reconstruct_plus(Window::new(&samples).with_dx(dx), &s).map_err(value_err)
}

/// Run a problem and return its final state.
///
/// 1D results carry `x` and per-cell primitives; 2D results carry `nx`,
/// `ny` and row-major `density` / `pressure` (NaN inside solid blocks).
#[pyfunction]
#[pyo3(signature = (problem = None, spec = None, scheme = None, n = None, nx = None, ny = None, t_final = None, cfl = None, positivity = None))]
#[allow(clippy::too_many_arguments)]
fn run<'py>(
    py: Python<'py>,
    problem: Option<&str>,
    spec: Option<&str>,
    scheme: Option<&str>,
    n: Option<usize>,
    nx: Option<usize>,
    ny: Option<usize>,
    t_final: Option<f64>,
    cfl: Option<f64>,
    positivity: Option<bool>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut s = match (problem, spec) {
        (Some(name), None) => preset(name).map_err(value_err)?,
        (None, Some(text)) => ProblemSpec::from_toml(text).map_err(value_err)?,
        _ => return Err(PyValueError::new_err("give exactly one of `problem` or `spec`")),
    };
    if let Some(name) = scheme {
        s.scheme = name.to_string();
        s.weights = None;
    }
    if let Some(t) = t_final {
        s.t_final = t;
    }
    if let Some(c) = cfl {
        s.cfl = c;
    }
    if let Some(p) = positivity {
        s.positivity = p;
    }
    s = match &s.domain {
        Domain::OneD { .. } => match n {
            Some(n) => s.with_cells(n),
            None => s,
        },
        Domain::TwoD { grid, .. } => {
            let (gx, gy) = (nx.unwrap_or(grid.nx), ny.unwrap_or(grid.ny));
            s.with_cells_2d(gx, gy)
        }
    };
    s.validate().map_err(value_err)?;
    let result = py.detach(|| solver::run(&s, &RunOptions::default()));
    let (sol, report) = result.map_err(|e| match e {
        SolverError::Problem(_) | SolverError::Config(_) => value_err(e),
        other => PyRuntimeError::new_err(other.to_string()),
    })?;
    let d = PyDict::new(py);
    d.set_item("name", &s.name)?;
    d.set_item("scheme", &report.scheme)?;
    d.set_item("t", sol.t)?;
    d.set_item("steps", report.steps)?;
    d.set_item("dt_digest", &report.dt_digest)?;
    d.set_item("wall_seconds", report.wall_seconds)?;
    d.set_item("min_density", report.min_density)?;
    d.set_item("min_pressure", report.min_pressure)?;
    match &sol.field {
        Field::Scalar(q) => {
            d.set_item("x", sol.x())?;
            d.set_item("q", q.clone())?;
        }
        Field::Euler1d(w) => {
            d.set_item("x", sol.x())?;
            d.set_item("density", w.iter().map(|s| s[0]).collect::<Vec<_>>())?;
            d.set_item("velocity", w.iter().map(|s| s[1]).collect::<Vec<_>>())?;
            d.set_item("pressure", w.iter().map(|s| s[2]).collect::<Vec<_>>())?;
        }
        Field::Euler2d(_) => {
            if let Domain::TwoD { grid, .. } = &s.domain {
                d.set_item("nx", grid.nx)?;
                d.set_item("ny", grid.ny)?;
            }
            d.set_item("density", sol.density())?;
            d.set_item("pressure", sol.pressure())?;
        }
    }
    Ok(d)
}

/// `(1/Δx, error, order)` rows of the critical-point convergence study.
#[pyfunction]
#[pyo3(signature = (n_cp, scheme = "za6", p = None, eps = None, eps_exponent = None))]
fn critical_points(n_cp: u32, scheme: &str, p: Option<f64>, eps: Option<f64>, eps_exponent: Option<f64>) -> PyResult<Vec<(u32, f64, Option<f64>)>> {
    let kind = scheme_kind(scheme, p, eps, eps_exponent, None, false)?;
    let rows = critical_point_study(n_cp, kind, &CRITICAL_RESOLUTIONS).map_err(value_err)?;
    Ok(rows.iter().map(|r| (r.inv_dx, r.error, r.order)).collect())
}

/// `(φ, Re Φ, Im Φ)` samples of the approximate dispersion relation.
#[pyfunction]
#[pyo3(signature = (scheme = "za6", samples = 64, tau = None, amplitude = 1.0))]
fn adr(scheme: &str, samples: usize, tau: Option<&str>, amplitude: f64) -> PyResult<Vec<(f64, f64, f64)>> {
    let kind = scheme_kind(scheme, None, None, None, tau, false)?;
    let pts = analysis::adr(kind, samples, amplitude).map_err(value_err)?;
    Ok(pts.iter().map(|p| (p.phi, p.re, p.im)).collect())
}

/// Exact Riemann solution `(ρ, u, p)` at positions `x` and time `t`.
#[pyfunction]
#[pyo3(signature = (left, right, x, t, x0 = 0.0, gamma = 1.4))]
fn exact_riemann(left: (f64, f64, f64), right: (f64, f64, f64), x: Vec<f64>, t: f64, x0: f64, gamma: f64) -> PyResult<Vec<(f64, f64, f64)>> {
    let prim = |s: (f64, f64, f64)| Primitive::new(s.0, s.1, s.2);
    let exact = ExactRiemann::new(prim(left), prim(right), gamma).map_err(value_err)?;
    Ok(x.iter()
        .map(|&xi| {
            let s = exact.at(xi, t, x0);
            (s.rho, s.u, s.p)
        })
        .collect())
}

#[pymodule]
pub fn cuweno_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(schemes, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(weights, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(critical_points, m)?)?;
    m.add_function(wrap_pyfunction!(adr, m)?)?;
    m.add_function(wrap_pyfunction!(exact_riemann, m)?)?;
    Ok(())
}
