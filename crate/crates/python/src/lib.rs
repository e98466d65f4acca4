//! Python bindings: presets, branch runs, the reference force and the
//! property checks. Configurations cross the boundary as TOML text.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fiberpeel::model::Branch;
use fiberpeel::scenario::{self, ScenarioConfig};
use fiberpeel::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Config { .. } | Error::Parse { .. } | Error::UnknownPreset(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_branch(name: &str) -> PyResult<Branch> {
    name.parse().map_err(|e: Error| PyValueError::new_err(e.to_string()))
}

/// Configuration of a named preset as TOML. Study presets return the first member.
#[pyfunction]
fn preset(name: &str) -> PyResult<String> {
    Ok(scenario::preset(name).map_err(to_py)?.to_toml())
}

/// All members of a preset as `(label, toml)` pairs.
#[pyfunction]
fn preset_members(name: &str) -> PyResult<Vec<(String, String)>> {
    Ok(scenario::preset_members(name)
        .map_err(to_py)?
        .into_iter()
        .map(|m| (m.label, m.config.to_toml()))
        .collect())
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    scenario::PRESET_NAMES.to_vec()
}

/// Traces one branch. Writes the artifacts when `out_dir` is given and
/// returns the summary and the curve columns.
#[pyfunction]
#[pyo3(signature = (config, branch = "contact", out_dir = None))]
fn run<'py>(py: Python<'py>, config: &str, branch: &str, out_dir: Option<PathBuf>) -> PyResult<Bound<'py, PyDict>> {
    let config = ScenarioConfig::from_toml(config).map_err(to_py)?;
    let branch = parse_branch(branch)?;
    let result = py
        .detach(|| match &out_dir {
            Some(dir) => scenario::run(&config, branch, dir),
            None => scenario::simulate(&config, branch),
        })
        .map_err(to_py)?;
    let s = &result.summary;
    let out = PyDict::new(py);
    out.set_item("F_ref", s.f_ref)?;
    out.set_item("F_ref_own", s.f_ref_own)?;
    out.set_item("u_at_max", s.u_at_max)?;
    out.set_item("F_max", s.f_max)?;
    out.set_item("u_at_min", s.u_at_min)?;
    out.set_item("F_min", s.f_min)?;
    out.set_item("branch_terminus_u", s.branch_terminus_u)?;
    out.set_item("mean_newton_iters", s.mean_newton_iters)?;
    out.set_item("min_gap_over_R", s.min_gap_over_r)?;
    out.set_item("branch", &s.branch)?;
    out.set_item("termination", s.termination.clone())?;
    let curve = &result.curve;
    out.set_item("u_x", curve.iter().map(|r| r.u_x).collect::<Vec<_>>())?;
    out.set_item("u_x_over_l", curve.iter().map(|r| r.u_x_over_l).collect::<Vec<_>>())?;
    out.set_item("F_x", curve.iter().map(|r| r.f_x).collect::<Vec<_>>())?;
    out.set_item("F_x_normalized", curve.iter().map(|r| r.f_x_normalized).collect::<Vec<_>>())?;
    out.set_item("newton_iters", curve.iter().map(|r| r.newton_iters).collect::<Vec<_>>())?;
    Ok(out)
}

/// Reference force of the configured fiber.
#[pyfunction]
fn reference_force(config: &str) -> PyResult<f64> {
    let config = ScenarioConfig::from_toml(config).map_err(to_py)?;
    let mesh = config.mesh().map_err(to_py)?;
    Ok(fiberpeel::solver::reference_force(&mesh, config.fiber.supports.into())
        .map_err(to_py)?
        .force)
}

/// Parallel-fiber equilibrium gap of the preset Lennard-Jones constants.
#[pyfunction]
fn lj_equilibrium_gap() -> f64 {
    scenario::presets::preset_lj_equilibrium_gap()
}

/// `(name, value, tolerance, passed)`
type CheckRow = (String, f64, Option<f64>, bool);

/// Property checks of the configured model.
#[pyfunction]
fn verify(py: Python<'_>, config: &str) -> PyResult<Vec<CheckRow>> {
    let config = ScenarioConfig::from_toml(config).map_err(to_py)?;
    let checks = py.detach(|| scenario::verify::verify(&config)).map_err(to_py)?;
    Ok(checks
        .into_iter()
        .map(|c| (c.name.to_string(), c.value, c.tolerance, c.passed()))
        .collect())
}

#[pymodule]
pub fn pyfiberpeel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(preset, m)?)?;
    m.add_function(wrap_pyfunction!(preset_members, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(reference_force, m)?)?;
    m.add_function(wrap_pyfunction!(lj_equilibrium_gap, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
