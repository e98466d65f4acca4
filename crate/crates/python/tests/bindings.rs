use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module<T>(f: impl FnOnce(&Bound<'_, PyModule>) -> PyResult<T>) -> T {
    Python::initialize();
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(pyfiberpeel::pyfiberpeel)(py);
        f(module.bind(py).cast::<PyModule>()?)
    })
    .unwrap()
}

#[test]
fn presets_round_trip_as_toml() {
    with_module(|m| {
        let names: Vec<String> = m.getattr("preset_names")?.call0()?.extract()?;
        assert_eq!(names.len(), 5);
        let text: String = m.getattr("preset")?.call1(("elstat-baseline-16",))?.extract()?;
        assert!(text.contains("n_elements = 16"));
        let members: Vec<(String, String)> = m.getattr("preset_members")?.call1(("elstat-meshstudy",))?.extract()?;
        assert_eq!(members.len(), 4);
        Ok(())
    });
}

#[test]
fn errors_map_to_python_exceptions() {
    with_module(|m| {
        let err = m.getattr("preset")?.call1(("nope",)).unwrap_err();
        Python::attach(|py| assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py)));
        let err = m.getattr("run")?.call1(("name = 1",)).unwrap_err();
        Python::attach(|py| assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py)));
        Ok(())
    });
}

#[test]
fn run_returns_summary_and_curve() {
    let mut config = fiberpeel::scenario::preset("elstat-baseline-16").unwrap();
    config.interaction = None;
    config.contact.enabled = false;
    config.fiber.n_elements = 4;
    config.sweep.u_end = 0.05;
    let text = config.to_toml();
    with_module(|m| {
        let out = m.getattr("run")?.call1((text.as_str(), "contact"))?;
        let out = out.cast::<PyDict>()?;
        let u: Vec<f64> = out.get_item("u_x")?.unwrap().extract()?;
        let f: Vec<f64> = out.get_item("F_x_normalized")?.unwrap().extract()?;
        assert_eq!(u.len(), f.len());
        assert_eq!(*u.last().unwrap(), 0.05);
        assert!(f.iter().all(|v| v.abs() < 1e-6));
        let f_ref: f64 = out.get_item("F_ref")?.unwrap().extract()?;
        let direct: f64 = m.getattr("reference_force")?.call1((text.as_str(),))?.extract()?;
        assert_eq!(f_ref, direct);
        Ok(())
    });
}

#[test]
fn lj_gap_matches_core() {
    with_module(|m| {
        let g: f64 = m.getattr("lj_equilibrium_gap")?.call0()?.extract()?;
        assert_eq!(g, fiberpeel::scenario::presets::preset_lj_equilibrium_gap());
        Ok(())
    });
}
