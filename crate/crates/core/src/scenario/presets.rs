//! Named configurations for the peeling studies. Study presets expand to
//! several member runs.

use crate::error::{Error, Result};
use crate::interaction::{lj_equilibrium_gap, LennardJonesLaw};

use super::config::*;

pub const PRESET_NAMES: [&str; 5] = [
    "elstat-baseline-16",
    "elstat-paramstudy-32",
    "elstat-meshstudy",
    "lj-baseline-64",
    "lj-regularization",
];

const LENGTH: f64 = 5.0;
const RADIUS: f64 = 0.02;
const K_VDW: f64 = -1e-7;
const K_REP: f64 = 5e-25;

/// One run of a preset; single-run presets have an empty label.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetMember {
    pub label: String,
    pub config: ScenarioConfig,
}

fn fiber(n_elements: usize) -> FiberConfig {
    FiberConfig {
        length: LENGTH,
        radius: RADIUS,
        youngs_modulus: 1e5,
        poisson_ratio: 0.3,
        n_elements,
        supports: SupportKind::PinRoller,
    }
}

fn electrostatic(name: &str, n_elements: usize) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        fiber: fiber(n_elements),
        geometry: GeometryConfig { separation: 2.0 * RADIUS },
        interaction: Some(InteractionConfig::Electrostatic {
            sigma1: 1.0,
            sigma2: -1.0,
            k: 0.1,
            quadrature: QuadratureConfig { n_segments: 2, n_gp: 10 },
        }),
        contact: ContactConfig {
            enabled: true,
            penalty: 100.0,
            gbar: RADIUS / 10.0,
            quadrature: QuadratureConfig { n_segments: 20, n_gp: 5 },
        },
        sweep: SweepConfig {
            u_start: 0.0,
            u_end: 1.2 * LENGTH,
            step_initial: 0.0025,
            step_min: 0.0025 / 8.0,
            step_max: 0.04,
            grow_iterations: 6,
            predictor: true,
        },
        solver: SolverConfig {
            tol_residual: None,
            tol_increment: None,
            max_iter: 50,
            du_max: RADIUS / 2.0,
        },
        relaxation: RelaxationConfig {
            u_values: vec![0.7 * LENGTH],
            ..RelaxationConfig::default()
        },
        normalization: NormalizationConfig::default(),
        outputs: OutputConfig::default(),
    }
}

fn lennard_jones(name: &str, g_reg: Option<f64>) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        fiber: fiber(64),
        geometry: GeometryConfig { separation: 2.0 * RADIUS },
        interaction: Some(InteractionConfig::LennardJones {
            rho1: 1.0,
            rho2: 1.0,
            k_vdw: K_VDW,
            k_rep: K_REP,
            g_reg,
            allow_large_g_reg: false,
            cutoff_radius: Some(5.0 * RADIUS),
            quadrature: QuadratureConfig { n_segments: 5, n_gp: 10 },
        }),
        contact: ContactConfig {
            enabled: false,
            penalty: 100.0,
            gbar: RADIUS / 10.0,
            quadrature: QuadratureConfig { n_segments: 20, n_gp: 5 },
        },
        sweep: SweepConfig {
            // the end gap starts slightly below the parallel-fiber equilibrium gap
            u_start: 1.6e-4 * LENGTH,
            u_end: 1.2 * LENGTH,
            step_initial: 0.0025,
            step_min: 0.0025 / 64.0,
            step_max: 0.02,
            grow_iterations: 10,
            predictor: true,
        },
        solver: SolverConfig {
            tol_residual: None,
            tol_increment: None,
            max_iter: 200,
            du_max: RADIUS / 20.0,
        },
        relaxation: RelaxationConfig::default(),
        normalization: NormalizationConfig::default(),
        outputs: OutputConfig::default(),
    }
}

/// Parallel-fiber equilibrium gap of the preset Lennard-Jones constants.
pub fn preset_lj_equilibrium_gap() -> f64 {
    let law = LennardJonesLaw {
        rho1: 1.0,
        rho2: 1.0,
        k_vdw: K_VDW,
        k_rep: K_REP,
        radius1: RADIUS,
        radius2: RADIUS,
        g_reg: None,
        r_cutoff: None,
    };
    lj_equilibrium_gap(&law).expect("preset constants are valid")
}

fn single(config: ScenarioConfig) -> Vec<PresetMember> {
    vec![PresetMember {
        label: String::new(),
        config,
    }]
}

/// All member runs of a preset.
pub fn preset_members(name: &str) -> Result<Vec<PresetMember>> {
    match name {
        "elstat-baseline-16" => Ok(single(electrostatic(name, 16))),
        "elstat-paramstudy-32" => Ok([1e4, 1e5, 1e6]
            .into_iter()
            .map(|e| {
                let mut config = electrostatic(name, 32);
                config.fiber.youngs_modulus = e;
                config.normalization.youngs_modulus = Some(1e5);
                PresetMember {
                    label: format!("E{e:e}"),
                    config,
                }
            })
            .collect()),
        "elstat-meshstudy" => {
            let mut members: Vec<PresetMember> = [8, 16, 32]
                .into_iter()
                .map(|n| PresetMember {
                    label: format!("n{n}"),
                    config: electrostatic(name, n),
                })
                .collect();
            let mut doubled = electrostatic(name, 8);
            if let Some(InteractionConfig::Electrostatic { quadrature, .. }) = &mut doubled.interaction {
                quadrature.n_gp *= 2;
            }
            doubled.contact.quadrature.n_gp *= 2;
            members.push(PresetMember {
                label: "n8-gp2x".into(),
                config: doubled,
            });
            Ok(members)
        }
        "lj-baseline-64" => Ok(single(lennard_jones(name, None))),
        "lj-regularization" => {
            let g_eq = preset_lj_equilibrium_gap();
            Ok([0.0, 0.3, 0.6, 1.0, 1.2]
                .into_iter()
                .map(|ratio| {
                    let mut config = lennard_jones(name, (ratio > 0.0).then_some(ratio * g_eq));
                    // plain warm-started Newton on a uniform grid, so that the
                    // iteration counts compare the laws and not the predictor
                    config.sweep.u_end = 0.25 * LENGTH;
                    config.sweep.step_max = config.sweep.step_initial;
                    config.sweep.predictor = false;
                    if ratio > 0.0 {
                        // the regularized law has no singularity to guard against
                        config.solver.du_max = RADIUS / 2.0;
                    }
                    if let Some(InteractionConfig::LennardJones { allow_large_g_reg, .. }) = &mut config.interaction {
                        *allow_large_g_reg = ratio > 1.0;
                    }
                    PresetMember {
                        label: format!("greg{ratio}"),
                        config,
                    }
                })
                .collect())
        }
        _ => Err(Error::UnknownPreset(name.into())),
    }
}

/// The configuration of a single-run preset, or the first member of a study.
pub fn preset(name: &str) -> Result<ScenarioConfig> {
    Ok(preset_members(name)?.remove(0).config)
}
