//! Scenario configuration file. Every section rejects unknown keys.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::contact::ContactLaw;
use crate::error::{Error, Result};
use crate::interaction::{lj_equilibrium_gap, ElectrostaticLaw, InteractionLaw, LennardJonesLaw};
use crate::model::{FiberMesh, Supports, TwoFiberSetup};
use crate::quadrature::GaussRule;
use crate::solver::{ContinuationSettings, NewtonSettings, RelaxationSettings};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub fiber: FiberConfig,
    pub geometry: GeometryConfig,
    /// Absent means non-interacting fibers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interaction: Option<InteractionConfig>,
    pub contact: ContactConfig,
    pub sweep: SweepConfig,
    pub solver: SolverConfig,
    #[serde(default)]
    pub relaxation: RelaxationConfig,
    #[serde(default)]
    pub normalization: NormalizationConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberConfig {
    pub length: f64,
    pub radius: f64,
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub n_elements: usize,
    #[serde(default)]
    pub supports: SupportKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    #[default]
    PinRoller,
    PinPin,
}

impl From<SupportKind> for Supports {
    fn from(kind: SupportKind) -> Self {
        match kind {
            SupportKind::PinRoller => Supports::PinRoller,
            SupportKind::PinPin => Supports::PinPin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// Initial inter-axis separation of the straight fibers.
    pub separation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub n_segments: usize,
    pub n_gp: usize,
}

impl QuadratureConfig {
    pub fn rule(&self) -> GaussRule {
        GaussRule::segmented(self.n_segments, self.n_gp)
    }

    fn validate(&self, field: &str) -> Result<()> {
        if self.n_segments == 0 || self.n_gp == 0 {
            return Err(Error::config(field, "segment and point counts must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InteractionConfig {
    Electrostatic {
        sigma1: f64,
        sigma2: f64,
        k: f64,
        quadrature: QuadratureConfig,
    },
    LennardJones {
        rho1: f64,
        rho2: f64,
        k_vdw: f64,
        k_rep: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        g_reg: Option<f64>,
        /// Accept `g_reg` above the parallel-fiber equilibrium gap.
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        allow_large_g_reg: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cutoff_radius: Option<f64>,
        quadrature: QuadratureConfig,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactConfig {
    pub enabled: bool,
    pub penalty: f64,
    pub gbar: f64,
    pub quadrature: QuadratureConfig,
}

/// Displacements are in length units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub u_start: f64,
    pub u_end: f64,
    pub step_initial: f64,
    pub step_min: f64,
    pub step_max: f64,
    #[serde(default = "default_grow_iterations")]
    pub grow_iterations: usize,
    /// Extrapolate the next initial guess from the last two converged steps.
    #[serde(default)]
    pub predictor: bool,
}

fn default_grow_iterations() -> usize {
    6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// Defaults to `1e-8 EA / l`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_residual: Option<f64>,
    /// Defaults to `1e-10 l`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_increment: Option<f64>,
    pub max_iter: usize,
    pub du_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxationConfig {
    pub drag: f64,
    pub dt_initial: f64,
    pub steady_tol: f64,
    pub step_budget: usize,
    /// Prescribed displacements relaxed by the `unstable` branch selector.
    #[serde(default)]
    pub u_values: Vec<f64>,
}

impl Default for RelaxationConfig {
    fn default() -> Self {
        let d = RelaxationSettings::default();
        RelaxationConfig {
            drag: d.drag,
            dt_initial: d.dt_initial,
            steady_tol: d.steady_tol,
            step_budget: d.step_budget,
            u_values: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalizationConfig {
    /// Normalize by the reference force of a fiber with this Young's
    /// modulus instead of the simulated one (shared normalization).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub youngs_modulus: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub curve_csv: String,
    pub gaps_csv: String,
    /// Periodic snapshot cadence in converged steps; 0 keeps only the
    /// forced snapshots at extrema and the last step.
    pub snapshots_every_n: usize,
    pub vtk_dir: String,
    pub summary: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            curve_csv: "curve.csv".into(),
            gaps_csv: "gaps.csv".into(),
            snapshots_every_n: 10,
            vtk_dir: "vtk".into(),
            summary: "summary.toml".into(),
        }
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(field, format!("must be positive and finite, got {v}")))
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Parse {
            what: "scenario configuration".into(),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always serializable")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml())?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let f = &self.fiber;
        positive("fiber.length", f.length)?;
        positive("fiber.radius", f.radius)?;
        positive("fiber.youngs_modulus", f.youngs_modulus)?;
        if !(f.poisson_ratio > -1.0 && f.poisson_ratio < 0.5) {
            return Err(Error::config("fiber.poisson_ratio", "must lie in (-1, 0.5)"));
        }
        if f.n_elements == 0 {
            return Err(Error::config("fiber.n_elements", "must be at least 1"));
        }
        positive("geometry.separation", self.geometry.separation)?;
        if let Some(e) = self.normalization.youngs_modulus {
            positive("normalization.youngs_modulus", e)?;
        }

        match &self.interaction {
            Some(InteractionConfig::Electrostatic { k, quadrature, .. }) => {
                positive("interaction.k", *k)?;
                quadrature.validate("interaction.quadrature")?;
                if !self.contact.enabled {
                    return Err(Error::config(
                        "contact.enabled",
                        "electrostatic attraction needs penalty contact",
                    ));
                }
            }
            Some(InteractionConfig::LennardJones {
                rho1,
                rho2,
                g_reg,
                allow_large_g_reg,
                cutoff_radius,
                quadrature,
                ..
            }) => {
                positive("interaction.rho1", *rho1)?;
                positive("interaction.rho2", *rho2)?;
                quadrature.validate("interaction.quadrature")?;
                if let Some(rc) = cutoff_radius {
                    positive("interaction.cutoff_radius", *rc)?;
                }
                let law = self.lennard_jones_law().expect("variant checked");
                let g_eq = lj_equilibrium_gap(&law).map_err(|_| {
                    Error::config("interaction", "Lennard-Jones constants need k_vdw < 0 and k_rep > 0")
                })?;
                if let Some(g) = g_reg {
                    positive("interaction.g_reg", *g)?;
                    if *g > g_eq {
                        if *allow_large_g_reg {
                            log::warn!("g_reg = {g:e} exceeds the parallel-fiber equilibrium gap {g_eq:e}");
                        } else {
                            return Err(Error::config(
                                "interaction.g_reg",
                                format!(
                                    "{g:e} exceeds the parallel-fiber equilibrium gap {g_eq:e}; set allow_large_g_reg to accept"
                                ),
                            ));
                        }
                    }
                }
                if self.contact.enabled {
                    return Err(Error::config(
                        "contact.enabled",
                        "penalty contact cannot be combined with Lennard-Jones adhesion",
                    ));
                }
            }
            None => {}
        }
        if self.contact.enabled {
            self.contact_law().validate()?;
            self.contact.quadrature.validate("contact.quadrature")?;
        }

        let s = &self.sweep;
        for (name, v) in [("sweep.u_start", s.u_start), ("sweep.u_end", s.u_end)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::config(name, "must be finite and non-negative"));
            }
        }
        self.continuation(false).validate()?;
        self.newton().validate()?;
        let r = &self.relaxation;
        positive("relaxation.drag", r.drag)?;
        positive("relaxation.dt_initial", r.dt_initial)?;
        positive("relaxation.steady_tol", r.steady_tol)?;
        if r.step_budget == 0 {
            return Err(Error::config("relaxation.step_budget", "must be positive"));
        }
        if r.u_values.iter().any(|u| !u.is_finite() || *u < 0.0) {
            return Err(Error::config("relaxation.u_values", "must be finite and non-negative"));
        }
        Ok(())
    }

    pub fn mesh(&self) -> Result<FiberMesh> {
        self.mesh_with_modulus(self.fiber.youngs_modulus)
    }

    pub fn mesh_with_modulus(&self, youngs_modulus: f64) -> Result<FiberMesh> {
        let f = &self.fiber;
        FiberMesh::straight(
            f.length,
            f.radius,
            youngs_modulus,
            f.poisson_ratio,
            f.n_elements,
            nalgebra::Vector2::zeros(),
        )
    }

    fn lennard_jones_law(&self) -> Option<LennardJonesLaw> {
        match &self.interaction {
            Some(InteractionConfig::LennardJones {
                rho1,
                rho2,
                k_vdw,
                k_rep,
                g_reg,
                cutoff_radius,
                ..
            }) => Some(LennardJonesLaw {
                rho1: *rho1,
                rho2: *rho2,
                k_vdw: *k_vdw,
                k_rep: *k_rep,
                radius1: self.fiber.radius,
                radius2: self.fiber.radius,
                g_reg: *g_reg,
                r_cutoff: *cutoff_radius,
            }),
            _ => None,
        }
    }

    pub fn interaction_law(&self) -> Option<(InteractionLaw, GaussRule)> {
        match &self.interaction {
            Some(InteractionConfig::Electrostatic {
                sigma1,
                sigma2,
                k,
                quadrature,
            }) => Some((
                InteractionLaw::Electrostatic(ElectrostaticLaw {
                    sigma1: *sigma1,
                    sigma2: *sigma2,
                    k: *k,
                    radius1: self.fiber.radius,
                    radius2: self.fiber.radius,
                }),
                quadrature.rule(),
            )),
            Some(InteractionConfig::LennardJones { quadrature, .. }) => Some((
                InteractionLaw::LennardJones(self.lennard_jones_law().expect("variant checked")),
                quadrature.rule(),
            )),
            None => None,
        }
    }

    pub fn interaction_quadrature(&self) -> Option<QuadratureConfig> {
        match &self.interaction {
            Some(InteractionConfig::Electrostatic { quadrature, .. })
            | Some(InteractionConfig::LennardJones { quadrature, .. }) => Some(*quadrature),
            None => None,
        }
    }

    pub fn contact_law(&self) -> ContactLaw {
        ContactLaw {
            penalty: self.contact.penalty,
            gap_reg: self.contact.gbar,
        }
    }

    pub fn setup(&self) -> TwoFiberSetup {
        let f = &self.fiber;
        TwoFiberSetup {
            length: f.length,
            radius: f.radius,
            youngs_modulus: f.youngs_modulus,
            poisson_ratio: f.poisson_ratio,
            n_elements: f.n_elements,
            separation: self.geometry.separation,
            supports: f.supports.into(),
            interaction: self.interaction_law(),
            contact: self
                .contact
                .enabled
                .then(|| (self.contact_law(), self.contact.quadrature.rule())),
        }
    }

    /// Rule used to report gaps: the contact rule when contact is active,
    /// otherwise the interaction rule.
    pub fn gap_rule(&self) -> GaussRule {
        if self.contact.enabled {
            return self.contact.quadrature.rule();
        }
        self.interaction_quadrature()
            .map_or_else(|| GaussRule::legendre(4), |quad| quad.rule())
    }

    pub fn newton(&self) -> NewtonSettings {
        let f = &self.fiber;
        let area = std::f64::consts::PI * f.radius * f.radius;
        NewtonSettings {
            tol_residual: self
                .solver
                .tol_residual
                .unwrap_or(1e-8 * f.youngs_modulus * area / f.length),
            tol_increment: self.solver.tol_increment.unwrap_or(1e-10 * f.length),
            max_iter: self.solver.max_iter,
            du_max: self.solver.du_max,
        }
    }

    /// Continuation settings; `reverse` sweeps from `u_end` back to `u_start`.
    pub fn continuation(&self, reverse: bool) -> ContinuationSettings {
        let s = &self.sweep;
        let (u_start, u_end) = if reverse { (s.u_end, s.u_start) } else { (s.u_start, s.u_end) };
        ContinuationSettings {
            u_start,
            u_end,
            step_initial: s.step_initial,
            step_min: s.step_min,
            step_max: s.step_max,
            grow_iterations: s.grow_iterations,
            predictor: s.predictor,
        }
    }

    pub fn relaxation_settings(&self) -> RelaxationSettings {
        let r = &self.relaxation;
        RelaxationSettings {
            drag: r.drag,
            dt_initial: r.dt_initial,
            steady_tol: r.steady_tol,
            step_budget: r.step_budget,
        }
    }
}
