//! Python bindings: `import pyree2f4`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ree2f4::bounds::{corollary_pins, BoundSet};
use ree2f4::catalog::{self, PrimeCase};
use ree2f4::{cli, degrees, hecke, Error};

fn to_py(e: Error) -> PyErr {
    match cli::exit_code(&e) {
        3 => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_case(case: &str) -> PyResult<PrimeCase> {
    case.parse().map_err(to_py)
}

/// Smallest degree of a nontrivial ordinary character at q^2 = 2^(2n+1).
#[pyfunction]
fn d0(n: u32) -> BigInt {
    catalog::d0(n)
}

/// `(case, f)` for an odd prime `ell`, e.g. `("Phi8p", 1)`.
#[pyfunction]
fn classify(n: u32, ell: u64) -> PyResult<(String, u32)> {
    let c = catalog::classify_prime(n, ell).map_err(to_py)?;
    Ok((c.case.to_string(), c.f))
}

type Matrix = (Vec<String>, Vec<String>, Vec<Vec<u32>>);

/// Hecke algebra decomposition matrix as `(rows, cols, entries)`.
#[pyfunction]
fn hecke_matrix(n: u32, ell: u64) -> PyResult<Matrix> {
    let m = hecke::hecke_decomposition(n, ell).map_err(to_py)?;
    Ok((m.rows, m.cols, m.entries))
}

/// `{unknown: (lo, hi)}` at `(n, ell)`; `hi` is `None` when no upper bound is known.
#[pyfunction]
fn bounds(case: &str, n: u32, ell: u64) -> PyResult<BTreeMap<String, (i64, Option<BigInt>)>> {
    let set = BoundSet::cached(parse_case(case)?).map_err(to_py)?;
    set.evaluate(n, ell).map_err(to_py)
}

/// Unknowns whose value is forced at `(n, ell)`.
#[pyfunction]
fn pins(case: &str, n: u32, ell: u64) -> PyResult<BTreeMap<String, i64>> {
    corollary_pins(parse_case(case)?, n, ell).map_err(to_py)
}

/// `(verdict, {label: lower bound or exact degree as a string})`.
#[pyfunction]
fn verify_smallest_degree(
    case: &str,
    n: u32,
    ell: u64,
) -> PyResult<(String, BTreeMap<String, String>)> {
    let r = degrees::verify_theorem(parse_case(case)?, n, ell).map_err(to_py)?;
    let verdict = match &r.verdict {
        degrees::Verdict::Holds => "holds".to_string(),
        degrees::Verdict::Fails => "fails".to_string(),
        degrees::Verdict::Partial { unresolved } => format!("partial: {}", unresolved.join(" ")),
    };
    let values = r.entries.into_iter().map(|e| (e.label, e.value)).collect();
    Ok((verdict, values))
}

/// Runs the command-line tool with `args` (without the program name) and
/// returns `(exit code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("ree2f4".to_string()).chain(args),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

#[pymodule]
fn pyree2f4(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(d0, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(hecke_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(pins, m)?)?;
    m.add_function(wrap_pyfunction!(verify_smallest_degree, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
