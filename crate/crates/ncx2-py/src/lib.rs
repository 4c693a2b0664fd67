//! Python bindings for the noncentral chi-square evaluation methods.
//!
//! Build with `cargo build --release -p ncx2-py`; the resulting cdylib can be
//! imported as `ncx2_py` once renamed to the platform extension-module name
//! (see python/smoke_test.py for a loader that does this automatically).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ncx2::cdf::{self as ncx2_cdf, CdfMethod, Ncx2Params};
use ncx2::marcum::{marcum_q_quadrature, marcum_q_via_1g1, MarcumArgs};
use ncx2::oracle::{self, McConfig, MuVectorPolicy};
use ncx2::EvalPolicy;

fn to_py_err(e: ncx2::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_method(method: &str) -> PyResult<Option<CdfMethod>> {
    if method == "auto" {
        return Ok(None);
    }
    CdfMethod::parse(method).map(Some).ok_or_else(|| {
        let names: Vec<&str> = CdfMethod::ALL.iter().map(|m| m.name()).collect();
        PyValueError::new_err(format!(
            "unknown method '{method}'; expected 'auto' or one of: {}",
            names.join(", ")
        ))
    })
}

/// CDF of the noncentral chi-square distribution.
///
/// `method` selects one of the analytic evaluation paths (see `methods()`),
/// or "auto" for domain-aware dispatch.
#[pyfunction]
#[pyo3(signature = (nu, lam, x, method="auto", rel_tol=None))]
fn cdf(nu: f64, lam: f64, x: f64, method: &str, rel_tol: Option<f64>) -> PyResult<f64> {
    let params = Ncx2Params::new(nu, lam, x).map_err(to_py_err)?;
    let method = parse_method(method)?;
    let mut policy = EvalPolicy::default();
    if let Some(r) = rel_tol {
        policy.rel_tol = r;
    }
    ncx2_cdf::cdf(&params, method, &policy)
        .map(|rep| rep.value)
        .map_err(to_py_err)
}

/// Density of the noncentral chi-square distribution at x > 0.
#[pyfunction]
fn pdf(nu: f64, lam: f64, x: f64) -> PyResult<f64> {
    let params = Ncx2Params::new(nu, lam, x).map_err(to_py_err)?;
    ncx2_cdf::pdf(&params, &EvalPolicy::default()).map_err(to_py_err)
}

/// Generalized Marcum Q-function Q_mu(a, b).
///
/// Uses the incomplete confluent hypergeometric series; set
/// `by_quadrature=True` for the defining-integral route (requires a > 0).
#[pyfunction]
#[pyo3(signature = (mu, a, b, by_quadrature=false))]
fn marcum_q(mu: f64, a: f64, b: f64, by_quadrature: bool) -> PyResult<f64> {
    let policy = EvalPolicy::default();
    if by_quadrature {
        let args = MarcumArgs::new(mu, a, b).map_err(to_py_err)?;
        marcum_q_quadrature(&args, &policy).map_err(to_py_err)
    } else {
        marcum_q_via_1g1(mu, 0.5 * a * a, 0.5 * b * b, &policy).map_err(to_py_err)
    }
}

/// CDF by adaptive quadrature of the density (reference oracle).
#[pyfunction]
fn quad_cdf(nu: f64, lam: f64, x: f64) -> PyResult<f64> {
    oracle::quad_cdf(nu, lam, x).map_err(to_py_err)
}

/// Monte Carlo CDF estimate over sums of squared normals; returns
/// `(estimate, standard_error)`. Deterministic per seed.
#[pyfunction]
#[pyo3(signature = (n, lam, x, n_samples=1_000_000, seed=42, equal_split=false))]
fn mc_cdf(
    n: u32,
    lam: f64,
    x: f64,
    n_samples: u64,
    seed: u64,
    equal_split: bool,
) -> PyResult<(f64, f64)> {
    let cfg = McConfig {
        n_samples,
        seed,
        mu_policy: if equal_split {
            MuVectorPolicy::EqualSplit
        } else {
            MuVectorPolicy::SingleComponent
        },
    };
    oracle::mc_cdf(n, lam, x, &cfg).map_err(to_py_err)
}

/// Names of every CDF evaluation method.
#[pyfunction]
fn methods() -> Vec<&'static str> {
    CdfMethod::ALL.iter().map(|m| m.name()).collect()
}

/// Evaluates every applicable method at one point; returns a list of dicts
/// with keys method, value, terms, time_ns.
#[pyfunction]
fn compare<'py>(py: Python<'py>, nu: f64, lam: f64, x: f64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let params = Ncx2Params::new(nu, lam, x).map_err(to_py_err)?;
    let policy = EvalPolicy::default();
    let mut rows = Vec::new();
    for m in CdfMethod::ALL {
        if !m.applicable(&params) {
            continue;
        }
        let d = PyDict::new(py);
        d.set_item("method", m.name())?;
        match ncx2_cdf::cdf(&params, Some(m), &policy) {
            Ok(rep) => {
                d.set_item("value", rep.value)?;
                d.set_item("terms", rep.terms_or_panels)?;
                d.set_item("time_ns", rep.wall_time_ns)?;
            }
            Err(e) => {
                d.set_item("error", e.to_string())?;
            }
        }
        rows.push(d);
    }
    Ok(rows)
}

#[pymodule]
fn ncx2_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(cdf, m)?)?;
    m.add_function(wrap_pyfunction!(pdf, m)?)?;
    m.add_function(wrap_pyfunction!(marcum_q, m)?)?;
    m.add_function(wrap_pyfunction!(quad_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(mc_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(methods, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    Ok(())
}
