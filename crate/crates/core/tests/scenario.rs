use fiberpeel::model::Branch;
use fiberpeel::scenario::config::InteractionConfig;
use fiberpeel::scenario::output::{self, CURVE_HEADER};
use fiberpeel::scenario::presets::preset_lj_equilibrium_gap;
use fiberpeel::scenario::{self, preset, preset_members, snapshot_steps, ScenarioConfig, Summary, PRESET_NAMES};
use fiberpeel::Error;

/// Touching fibers with contact only, a handful of steps.
fn contact_only() -> ScenarioConfig {
    let mut c = preset("elstat-baseline-16").unwrap();
    c.name = "contact-only".into();
    c.interaction = None;
    c.sweep.u_end = 0.05;
    c.sweep.step_initial = 0.01;
    c.sweep.step_min = 0.01;
    c.sweep.step_max = 0.01;
    c.outputs.snapshots_every_n = 2;
    c
}

#[test]
fn every_preset_round_trips_through_toml() {
    for name in PRESET_NAMES {
        for member in preset_members(name).unwrap() {
            let text = member.config.to_toml();
            assert_eq!(ScenarioConfig::from_toml(&text).unwrap(), member.config, "{name} {}", member.label);
        }
    }
}

#[test]
fn unknown_keys_are_rejected() {
    let text = preset("elstat-baseline-16").unwrap().to_toml();
    let bad = text.replace("[fiber]\n", "[fiber]\nstiffness = 3.0\n");
    assert_ne!(bad, text);
    assert!(matches!(ScenarioConfig::from_toml(&bad), Err(Error::Parse { .. })));
}

#[test]
fn validation_errors_name_the_field() {
    let mut c = preset("elstat-baseline-16").unwrap();
    c.fiber.radius = -1.0;
    assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "fiber.radius"));

    let mut c = preset("elstat-baseline-16").unwrap();
    c.contact.enabled = false;
    assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "contact.enabled"));

    let mut c = preset("lj-baseline-64").unwrap();
    c.contact.enabled = true;
    assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "contact.enabled"));

    let mut c = preset("lj-baseline-64").unwrap();
    if let Some(InteractionConfig::LennardJones { g_reg, .. }) = &mut c.interaction {
        *g_reg = Some(1.2 * preset_lj_equilibrium_gap());
    }
    assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "interaction.g_reg"));
}

#[test]
fn unknown_preset_is_an_error() {
    assert!(matches!(preset("nope"), Err(Error::UnknownPreset(_))));
}

#[test]
fn preset_solver_settings() {
    assert_eq!(preset("elstat-baseline-16").unwrap().solver.du_max, 0.01);
    assert_eq!(preset("lj-baseline-64").unwrap().solver.du_max, 0.001);
    let members = preset_members("lj-regularization").unwrap();
    let labels: Vec<_> = members.iter().map(|m| m.label.as_str()).collect();
    assert_eq!(labels, ["greg0", "greg0.3", "greg0.6", "greg1", "greg1.2"]);
    for m in &members {
        let Some(InteractionConfig::LennardJones { g_reg, allow_large_g_reg, .. }) = m.config.interaction else {
            panic!("not Lennard-Jones");
        };
        assert_eq!(allow_large_g_reg, m.label == "greg1.2");
        assert_eq!(g_reg.is_none(), m.label == "greg0");
        assert!(m.config.validate().is_ok());
    }
    let study = preset_members("elstat-paramstudy-32").unwrap();
    assert!(study.iter().all(|m| m.config.normalization.youngs_modulus == Some(1e5)));
    assert_eq!(preset_members("elstat-meshstudy").unwrap().len(), 4);
}

#[test]
fn run_writes_consistent_artifacts() {
    let config = contact_only();
    let dir = tempfile::tempdir().unwrap();
    let result = scenario::run(&config, Branch::Contact, dir.path()).unwrap();
    assert_eq!(result.curve.len(), 6);

    let csv = std::fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), CURVE_HEADER.join(","));
    let curve = output::read_curve(&dir.path().join("curve.csv")).unwrap();
    assert_eq!(curve, result.curve);

    // the summary is a pure function of the CSV
    let summary = Summary::load(&dir.path().join("summary.toml")).unwrap();
    let (u_max, f_max, u_min, f_min, mean) = Summary::extrema(&curve).unwrap();
    assert_eq!((summary.u_at_max, summary.f_max), (u_max, f_max));
    assert_eq!((summary.u_at_min, summary.f_min), (u_min, f_min));
    assert_eq!(summary.mean_newton_iters, mean);
    assert!(summary.branch_terminus_u.is_nan());
    assert_eq!(summary.f_ref, summary.f_ref_own);
    for r in &curve {
        assert_eq!(r.f_x_normalized, r.f_x / summary.f_ref);
        assert_eq!(r.branch, "contact");
    }

    let steps = snapshot_steps(&curve, 2);
    assert!(steps.contains(&0) && steps.contains(&4) && steps.contains(&5));
    for &s in &steps {
        let fibers = std::fs::read_to_string(dir.path().join(format!("vtk/fibers_{s:05}.vtk"))).unwrap();
        assert!(fibers.starts_with("# vtk DataFile Version 4.2\n"));
        assert!(fibers.contains("POINTS 322 double"));
        assert!(fibers.contains("LINES 2 324"));
        assert!(fibers.contains("SCALARS fiber_id int 1"));
        let gaps = std::fs::read_to_string(dir.path().join(format!("vtk/gaps_{s:05}.vtk"))).unwrap();
        assert!(gaps.contains("SCALARS gap_over_R double 1"));
    }
    let gaps = std::fs::read_to_string(dir.path().join("gaps.csv")).unwrap();
    assert!(gaps.starts_with("step,u_x,slave_element,slave_xi,master_element,master_xi,gap,gap_over_R,x,y,fallback\n"));
}

#[test]
fn centerline_has_ten_points_per_element() {
    let config = preset("elstat-baseline-16").unwrap();
    let (model, state) = fiberpeel::model::build_two_fiber_model(&config.setup()).unwrap();
    let line = output::centerline(&model, &state.q, 0);
    assert_eq!(line.len(), 161);
    assert!((line[160].y - 5.0).abs() < 1e-15);
    assert!(line.windows(2).all(|w| w[1].y > w[0].y));
}

#[test]
fn empty_gap_set_gives_valid_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gaps.csv");
    output::write_gaps(&path, &[], 0.02).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 1);
    let vtk = output::gaps_vtk(&[], 0.02, "empty");
    assert!(vtk.contains("POINTS 0 double") && vtk.contains("VERTICES 0 0"));
}

#[test]
fn curve_with_foreign_header_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    std::fs::write(&path, "step,u,F\n0,0,0\n").unwrap();
    assert!(matches!(output::read_curve(&path), Err(Error::Parse { .. })));
}

#[test]
fn reals_round_trip_with_seventeen_digits() {
    for v in [0.1, 1.0 / 3.0, -5.4321e-17, 6.02e23, f64::MIN_POSITIVE] {
        let s = output::format_real(v);
        assert_eq!(s.parse::<f64>().unwrap(), v);
        let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
    }
}
