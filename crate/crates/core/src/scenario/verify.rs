//! Property checks of a configured model at a perturbed state: consistent
//! linearization, invariance, force balance and quadrature accuracy.

use nalgebra::{DVector, Rotation2, Vector2};

use crate::error::Result;
use crate::interaction::{integrate_pair, interaction_pair_schedule, ElementSamples, InteractionLaw};
use crate::model::{build_two_fiber_model, Branch, Configuration, Model};
use crate::quadrature::GaussRule;

use super::config::ScenarioConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    /// `None` for informational values.
    pub tolerance: Option<f64>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.tolerance.is_none_or(|t| self.value < t)
    }
}

/// Deterministic pseudo-random numbers in `[-1, 1]`.
fn jitter(i: usize) -> f64 {
    let x = ((i as f64 + 1.0) * 12.9898).sin() * 43758.5453;
    2.0 * (x - x.floor()) - 1.0
}

/// Straight state at `sweep.u_start` with every free DOF perturbed by a
/// small fraction of the radius or of the initial gap.
pub fn perturbed_state(config: &ScenarioConfig, model: &Model) -> (DVector<f64>, f64) {
    let radius = config.fiber.radius;
    let gap = config.geometry.separation + config.sweep.u_start - 2.0 * radius;
    let amplitude = if gap > 0.0 { (0.1 * gap).min(0.01 * radius) } else { 0.01 * radius };
    let mut q = model.translated_state(config.sweep.u_start, Branch::Contact).q;
    for (k, &i) in model.dofs.free.iter().enumerate() {
        let scale = if model.dofs.is_translational(i) { amplitude } else { amplitude / config.fiber.length };
        q[i] += scale * jitter(k);
    }
    (q, amplitude)
}

fn gradient_error(model: &Model, q: &DVector<f64>, step: f64) -> Result<f64> {
    let base = model.assemble(q, false)?;
    let g = model.residual(&base);
    let scale = g.amax().max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    for (k, &i) in model.dofs.free.iter().enumerate() {
        let mut qp = q.clone();
        let mut qm = q.clone();
        qp[i] += step;
        qm[i] -= step;
        let fd = (model.assemble(&qp, false)?.energy - model.assemble(&qm, false)?.energy) / (2.0 * step);
        // residual is the negative gradient
        worst = worst.max((fd + g[k]).abs() / scale);
    }
    Ok(worst)
}

/// Rotates and translates every node position and tangent.
fn rigid_motion(model: &Model, q: &DVector<f64>, angle: f64, shift: Vector2<f64>) -> DVector<f64> {
    let rot = Rotation2::new(angle);
    let mut out = q.clone();
    for i in (0..q.len()).step_by(2) {
        let (_, _, c) = model.dofs.decompose(i);
        let v = rot * Vector2::new(q[i], q[i + 1]);
        let v = if c == 0 { v + shift } else { v };
        out[i] = v.x;
        out[i + 1] = v.y;
    }
    out
}

fn interaction_sums(
    law: &InteractionLaw,
    config: &Configuration<'_>,
    rule: &GaussRule,
    pairs: &[(usize, usize)],
) -> Result<(f64, DVector<f64>)> {
    let a = config.fiber_elements(0);
    let b = config.fiber_elements(1);
    let sa: Vec<_> = a.iter().map(|(e, q)| ElementSamples::new(e, q, rule)).collect();
    let sb: Vec<_> = b.iter().map(|(e, q)| ElementSamples::new(e, q, rule)).collect();
    let dofs = &config.model.dofs;
    let mut energy = 0.0;
    let mut gradient = DVector::zeros(dofs.len());
    for &(i, j) in pairs {
        let r = integrate_pair(law, &sa[i], &sb[j])?;
        energy += r.energy;
        for (k, &d) in dofs.element_dofs(0, i).iter().enumerate() {
            gradient[d] += r.force_a[k];
        }
        for (k, &d) in dofs.element_dofs(1, j).iter().enumerate() {
            gradient[d] += r.force_b[k];
        }
    }
    Ok((energy, gradient))
}

/// Runs all checks; the model tangent check costs two assemblies per free DOF.
pub fn verify(config: &ScenarioConfig) -> Result<Vec<Check>> {
    config.validate()?;
    let (model, _) = build_two_fiber_model(&config.setup())?;
    let (q, amplitude) = perturbed_state(config, &model);
    let step = 1e-3 * amplitude;
    let mut checks = Vec::new();

    let mesh = &model.fibers[1];
    let cfg = Configuration { model: &model, q: &q };
    let mut beam: f64 = 0.0;
    for e in 0..mesh.n_elements {
        beam = beam.max(crate::beam::verify_tangent(&mesh.element(e), &cfg.element_vector(1, e), step)?);
    }
    checks.push(Check {
        name: "beam element tangent vs finite differences",
        value: beam,
        tolerance: Some(1e-6),
    });
    checks.push(Check {
        name: "assembled gradient vs finite differences of the energy",
        value: gradient_error(&model, &q, step)?,
        tolerance: Some(1e-6),
    });
    checks.push(Check {
        name: "assembled tangent vs finite differences of the residual",
        value: model.verify_tangent(&q, step)?,
        tolerance: Some(1e-6),
    });

    let base = model.assemble(&q, false)?;
    let moved = model.assemble(&rigid_motion(&model, &q, 0.37, Vector2::new(0.3, -1.1)), false)?;
    checks.push(Check {
        name: "energy invariance under rigid motion",
        value: (moved.energy - base.energy).abs() / base.energy.abs().max(f64::MIN_POSITIVE),
        tolerance: Some(1e-10),
    });

    // internal forces of a closed system carry no net resultant
    let mut resultant = Vector2::<f64>::zeros();
    let mut largest: f64 = 0.0;
    for i in 0..base.gradient.len() {
        let (_, _, c) = model.dofs.decompose(i);
        if c < 2 {
            resultant[c] += base.gradient[i];
            largest = largest.max(base.gradient[i].abs());
        }
    }
    checks.push(Check {
        name: "force balance of all internal forces",
        value: resultant.amax() / largest.max(f64::MIN_POSITIVE),
        tolerance: Some(1e-10),
    });

    if let Some((law, rule)) = config.interaction_law() {
        let a = cfg.fiber_elements(0);
        let b = cfg.fiber_elements(1);
        let all: Vec<_> = (0..a.len()).flat_map(|i| (0..b.len()).map(move |j| (i, j))).collect();
        let scheduled = interaction_pair_schedule(&a, &b, &law);
        let (e_all, g_all) = interaction_sums(&law, &cfg, &rule, &all)?;
        let (e_sch, g_sch) = interaction_sums(&law, &cfg, &rule, &scheduled)?;
        let scale = g_all.amax().max(f64::MIN_POSITIVE);
        checks.push(Check {
            name: "cutoff schedule vs all element pairs",
            value: ((e_all - e_sch).abs() / e_all.abs().max(f64::MIN_POSITIVE)).max((g_all - g_sch).amax() / scale),
            tolerance: Some(1e-10),
        });
        let quad = config.interaction_quadrature().expect("interaction present");
        let fine = GaussRule::segmented(4 * quad.n_segments, quad.n_gp);
        let (e_fine, _) = interaction_sums(&law, &cfg, &fine, &scheduled)?;
        checks.push(Check {
            name: "interaction quadrature vs refined rule (relative energy change)",
            value: (e_fine - e_sch).abs() / e_fine.abs().max(f64::MIN_POSITIVE),
            tolerance: None,
        });
    }
    Ok(checks)
}
