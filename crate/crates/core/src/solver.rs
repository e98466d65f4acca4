//! Quasi-static solution procedures: Newton's method with displacement
//! increment control, displacement-driven continuation with adaptive step
//! halving, overdamped relaxation, and the reference-force experiment.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{build_single_fiber_model, Assembly, FiberMesh, Model, PointLoad, ReactionSet, Supports, SystemState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonSettings {
    /// Scaled infinity norm of the residual (force).
    pub tol_residual: f64,
    /// Scaled infinity norm of the last increment (length).
    pub tol_increment: f64,
    pub max_iter: usize,
    /// Largest nodal translation applied in one iteration.
    pub du_max: f64,
}

impl NewtonSettings {
    /// Defaults tied to the fiber: `1e-8 EA / l` and `1e-10 l`.
    pub fn for_fiber(mesh: &FiberMesh, du_max: f64, max_iter: usize) -> Self {
        NewtonSettings {
            tol_residual: 1e-8 * mesh.youngs_modulus * mesh.area() / mesh.length,
            tol_increment: 1e-10 * mesh.length,
            max_iter,
            du_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("solver.tol_residual", self.tol_residual),
            ("solver.tol_increment", self.tol_increment),
            ("solver.du_max", self.du_max),
        ] {
            if !(v > 0.0) {
                return Err(Error::config(name, "must be positive"));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::config("solver.max_iter", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOutcome {
    pub iterations: usize,
    pub residual: f64,
    /// Largest factor by which an update was shortened (1 when never capped).
    pub min_scale: f64,
}

/// Length used to make tangent-vector DOFs comparable with positions.
fn tangent_length_scale(model: &Model) -> f64 {
    model.fibers[0].element_length()
}

fn scaled_residual_norm(model: &Model, r: &DVector<f64>) -> f64 {
    let h = tangent_length_scale(model);
    model
        .dofs
        .free
        .iter()
        .zip(r.iter())
        .map(|(&i, v)| if model.dofs.is_translational(i) { v.abs() } else { v.abs() / h })
        .fold(0.0, f64::max)
}

fn scaled_increment_norm(model: &Model, dq: &DVector<f64>) -> f64 {
    let h = tangent_length_scale(model);
    model
        .dofs
        .free
        .iter()
        .zip(dq.iter())
        .map(|(&i, v)| if model.dofs.is_translational(i) { v.abs() } else { v.abs() * h })
        .fold(0.0, f64::max)
}

/// Largest Euclidean nodal translation in a free-DOF increment.
pub fn max_nodal_translation(model: &Model, dq: &DVector<f64>) -> f64 {
    let mut per_node = std::collections::HashMap::new();
    for (k, &i) in model.dofs.free.iter().enumerate() {
        if model.dofs.is_translational(i) {
            *per_node.entry(i / 4).or_insert(0.0) += dq[k] * dq[k];
        }
    }
    per_node.values().fold(0.0f64, |m, v: &f64| m.max(v.sqrt()))
}

/// Factor applied to a Newton update so that no node translates more than `du_max`.
pub fn increment_scale(model: &Model, dq: &DVector<f64>, du_max: f64) -> f64 {
    let m = max_nodal_translation(model, dq);
    if m > du_max {
        du_max / m
    } else {
        1.0
    }
}

fn apply_free(model: &Model, q: &mut DVector<f64>, dq: &DVector<f64>, factor: f64) {
    for (k, &i) in model.dofs.free.iter().enumerate() {
        q[i] += factor * dq[k];
    }
}

fn check_finite(dq: &DVector<f64>) -> Result<()> {
    if dq.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite {
            provider: "linear solve".into(),
            detail: "Newton increment".into(),
        })
    }
}

/// Newton's method on the free DOFs of `q`, with the driven and fixed DOFs
/// held at their current values. On success `q` holds the converged state.
pub fn newton_solve(model: &Model, q: &mut DVector<f64>, settings: &NewtonSettings) -> Result<NewtonOutcome> {
    newton_with_shift(model, q, settings, None)
}

/// Newton's method for `shift(q) + gradient(q) = 0` where the optional
/// shift is `D (q - q_old)` with a diagonal `D` over free DOFs.
fn newton_with_shift(
    model: &Model,
    q: &mut DVector<f64>,
    settings: &NewtonSettings,
    shift: Option<(&DVector<f64>, &DVector<f64>)>,
) -> Result<NewtonOutcome> {
    let mut last_increment = f64::INFINITY;
    let mut min_scale: f64 = 1.0;
    let mut residual = f64::INFINITY;
    for it in 0..=settings.max_iter {
        let asm = model.assemble(q, true)?;
        let mut r = model.residual(&asm);
        let mut k = model.tangent(&asm);
        if let Some((diag, q_old)) = shift {
            for (a, &i) in model.dofs.free.iter().enumerate() {
                r[a] -= diag[a] * (q[i] - q_old[i]);
                k[(a, a)] += diag[a];
            }
        }
        residual = scaled_residual_norm(model, &r);
        if !residual.is_finite() {
            return Err(Error::NonFinite {
                provider: "assembly".into(),
                detail: "residual".into(),
            });
        }
        log::trace!("newton iteration {it}: residual {residual:e}, increment {last_increment:e}");
        let increment_ok = last_increment < settings.tol_increment;
        if residual < settings.tol_residual && (increment_ok || (it == 0 && residual == 0.0)) {
            return Ok(NewtonOutcome {
                iterations: it,
                residual,
                min_scale,
            });
        }
        if it == settings.max_iter {
            break;
        }
        let dq = linalg::solve(k, &r)?;
        check_finite(&dq)?;
        let factor = increment_scale(model, &dq, settings.du_max);
        min_scale = min_scale.min(factor);
        apply_free(model, q, &dq, factor);
        last_increment = factor * scaled_increment_norm(model, &dq);
    }
    Err(Error::NonConvergence {
        iterations: settings.max_iter,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationSettings {
    pub u_start: f64,
    pub u_end: f64,
    pub step_initial: f64,
    pub step_min: f64,
    pub step_max: f64,
    /// Steps converging in at most this many iterations may double the step.
    pub grow_iterations: usize,
    /// Extrapolate the free DOFs from the last two converged states.
    pub predictor: bool,
}

impl ContinuationSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_min > 0.0) {
            return Err(Error::config("sweep.step_min", "must be positive"));
        }
        if !(self.step_initial >= self.step_min) {
            return Err(Error::config("sweep.step_initial", "must be at least step_min"));
        }
        if !(self.step_max >= self.step_initial) {
            return Err(Error::config("sweep.step_max", "must be at least step_initial"));
        }
        if self.u_start == self.u_end || !self.u_start.is_finite() || !self.u_end.is_finite() {
            return Err(Error::config("sweep.u_end", "must differ from u_start"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub u_x: f64,
    pub reactions: ReactionSet,
    pub iterations: usize,
    pub gap_samples: Vec<crate::contact::GapSample>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub records: Vec<StepRecord>,
    /// Last converged displacement when the sweep ended before `u_end`.
    pub terminus: Option<f64>,
    pub final_state: SystemState,
    /// Error that ended the branch, if any.
    pub termination: Option<String>,
}

fn record(model: &Model, q: &DVector<f64>, u_x: f64, iterations: usize) -> Result<StepRecord> {
    let asm: Assembly = model.assemble(q, false)?;
    Ok(StepRecord {
        u_x,
        reactions: model.extract_reactions(&asm),
        iterations,
        gap_samples: asm.gap_samples,
    })
}

/// Traces one equilibrium branch in the prescribed displacement.
///
/// `start` provides the initial guess at `settings.u_start`. Steps live on a
/// dyadic grid of multiples of `step_min`; a failed step is halved and
/// retried, and when a `step_min` step fails the branch ends. `on_step` is
/// called with every converged state.
pub fn continuation_sweep(
    model: &Model,
    start: &SystemState,
    newton: &NewtonSettings,
    settings: &ContinuationSettings,
    mut on_step: impl FnMut(&SystemState, &StepRecord),
) -> Result<SweepResult> {
    settings.validate()?;
    let dir = (settings.u_end - settings.u_start).signum();
    let span = (settings.u_end - settings.u_start).abs();
    let end_index = (span / settings.step_min).round() as u64;
    let u_at = |idx: u64| {
        if idx >= end_index {
            settings.u_end
        } else {
            settings.u_start + dir * idx as f64 * settings.step_min
        }
    };
    let max_level = (settings.step_max / settings.step_min).log2().floor().max(0.0) as u32;
    let mut level = ((settings.step_initial / settings.step_min).log2().floor().max(0.0) as u32).min(max_level);

    let mut q = start.q.clone();
    model.set_driven(&mut q, settings.u_start);
    let first = newton_solve(model, &mut q, newton)?;
    let mut state = SystemState {
        q,
        u_x: settings.u_start,
        branch: start.branch,
    };
    let rec = record(model, &state.q, state.u_x, first.iterations)?;
    on_step(&state, &rec);
    let mut records = vec![rec];
    let mut previous: Option<(DVector<f64>, f64)> = None;
    let mut idx: u64 = 0;
    let mut terminus = None;
    let mut termination = None;

    while idx < end_index {
        let n = 1u64 << level;
        let next = (idx + n).min(end_index);
        let u_next = u_at(next);
        let mut q = state.q.clone();
        if settings.predictor {
            if let Some((q_prev, u_prev)) = &previous {
                let ratio = (u_next - state.u_x) / (state.u_x - u_prev);
                let delta = (&state.q - q_prev) * ratio;
                let free_delta = DVector::from_iterator(model.dofs.free.len(), model.dofs.free.iter().map(|&i| delta[i]));
                // nodes in the detached part follow the supports, so the
                // extrapolation may move them about as far as the driven step
                let limit = newton.du_max.max(2.0 * (u_next - state.u_x).abs());
                let cap = increment_scale(model, &free_delta, limit);
                apply_free(model, &mut q, &free_delta, cap);
            }
        }
        model.set_driven(&mut q, u_next);
        match newton_solve(model, &mut q, newton) {
            Ok(outcome) => {
                previous = Some((state.q.clone(), state.u_x));
                state = SystemState {
                    q,
                    u_x: u_next,
                    branch: state.branch,
                };
                let rec = record(model, &state.q, u_next, outcome.iterations)?;
                on_step(&state, &rec);
                records.push(rec);
                idx = next;
                if outcome.iterations <= settings.grow_iterations && level < max_level && idx.is_multiple_of(2 * n) {
                    level += 1;
                }
            }
            Err(e) if e.is_recoverable() => {
                log::debug!("step to u = {u_next} failed at level {level}: {e}");
                if level == 0 {
                    terminus = Some(state.u_x);
                    termination = Some(e.to_string());
                    break;
                }
                level -= 1;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SweepResult {
        records,
        terminus,
        final_state: state,
        termination,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationSettings {
    /// Drag per unit length on translational DOFs.
    pub drag: f64,
    pub dt_initial: f64,
    /// Threshold on the largest scaled DOF velocity.
    pub steady_tol: f64,
    pub step_budget: usize,
}

impl Default for RelaxationSettings {
    fn default() -> Self {
        RelaxationSettings {
            drag: 1e-4,
            dt_initial: 0.1,
            steady_tol: 1e-10,
            step_budget: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationOutcome {
    pub steps: usize,
    pub time: f64,
    pub final_iterations: usize,
}

/// Diagonal drag over the free DOFs from tributary lengths.
fn drag_diagonal(model: &Model, drag: f64) -> DVector<f64> {
    let d = &model.dofs;
    DVector::from_iterator(
        d.free.len(),
        d.free.iter().map(|&i| {
            let (fiber, node, c) = d.decompose(i);
            let mesh = &model.fibers[fiber];
            let h = mesh.element_length();
            let trib = if node == 0 || node == mesh.n_elements { 0.5 * h } else { h };
            if c < 2 {
                drag * trib
            } else {
                drag * trib * mesh.radius * mesh.radius
            }
        }),
    )
}

/// Overdamped flow `C dq/dt = -gradient(q)` by backward Euler until the
/// velocities vanish, followed by a plain Newton solve.
pub fn relax_to_steady_state(
    model: &Model,
    q: &mut DVector<f64>,
    newton: &NewtonSettings,
    settings: &RelaxationSettings,
) -> Result<RelaxationOutcome> {
    if !(settings.drag > 0.0) {
        return Err(Error::config("relaxation.drag", "must be positive"));
    }
    if !(settings.dt_initial > 0.0) {
        return Err(Error::config("relaxation.dt_initial", "must be positive"));
    }
    let c = drag_diagonal(model, settings.drag);
    let h = tangent_length_scale(model);
    let mut dt = settings.dt_initial;
    let mut time = 0.0;
    let inner = NewtonSettings {
        max_iter: newton.max_iter.min(30),
        ..*newton
    };
    for step in 0..settings.step_budget {
        let asm = model.assemble(q, false)?;
        let static_residual = scaled_residual_norm(model, &model.residual(&asm));
        let q_old = q.clone();
        let diag = &c / dt;
        match newton_with_shift(model, q, &inner, Some((&diag, &q_old))) {
            Ok(outcome) => {
                time += dt;
                let velocity = model
                    .dofs
                    .free
                    .iter()
                    .map(|&i| {
                        let v = (q[i] - q_old[i]) / dt;
                        if model.dofs.is_translational(i) {
                            v.abs()
                        } else {
                            v.abs() * h
                        }
                    })
                    .fold(0.0, f64::max);
                if velocity < settings.steady_tol && static_residual < newton.tol_residual {
                    let fin = newton_solve(model, q, newton)?;
                    return Ok(RelaxationOutcome {
                        steps: step + 1,
                        time,
                        final_iterations: fin.iterations,
                    });
                }
                if outcome.iterations <= 5 {
                    dt *= 2.0;
                }
            }
            Err(e) if e.is_recoverable() => {
                *q = q_old;
                dt *= 0.5;
                if dt < 1e-12 * settings.dt_initial {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::MaxTimeExceeded {
        steps: settings.step_budget,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceForce {
    pub force: f64,
    pub deflection: f64,
    pub secant_iterations: usize,
}

/// Midpoint deflection of a single supported fiber under a transverse
/// midpoint point load, solved by load stepping from `q` (updated in place).
fn deflection_under_load(
    model: &mut Model,
    load_dof: usize,
    q: &mut DVector<f64>,
    from: f64,
    to: f64,
    newton: &NewtonSettings,
) -> Result<f64> {
    let mut level = 0u32;
    let mut f = from;
    let mut attempts = 0;
    while f != to {
        let n_sub = 1u64 << level;
        let step = (to - f) / n_sub as f64;
        let target = if n_sub == 1 { to } else { f + step };
        // the load is always the most recently added provider
        model.providers.pop();
        model.add_provider(PointLoad {
            dof: load_dof,
            value: target,
        });
        let mut trial = q.clone();
        match newton_solve(model, &mut trial, newton) {
            Ok(_) => {
                *q = trial;
                f = target;
                level = level.saturating_sub(1);
            }
            Err(e) if e.is_recoverable() && level < 20 => {
                level += 1;
                attempts += 1;
                if attempts > 200 {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(q[load_dof] - model.reference[load_dof])
}

fn reference_newton(mesh: &FiberMesh) -> NewtonSettings {
    NewtonSettings::for_fiber(mesh, mesh.length / 20.0, 100)
}

/// Point load at the fiber midpoint that deflects the midpoint by `l/4`.
/// The load is found by a secant iteration on the nonlinear response.
pub fn reference_force(mesh: &FiberMesh, supports: Supports) -> Result<ReferenceForce> {
    let target = mesh.length / 4.0;
    let (mut model, dof) = build_single_fiber_model(mesh.clone(), supports, false)?;
    model.add_provider(PointLoad { dof, value: 0.0 });
    let newton = reference_newton(mesh);
    let mut q = model.reference.clone();
    let ei = mesh.youngs_modulus * mesh.second_moment();
    let linear = 48.0 * ei * target / mesh.length.powi(3);

    let mut f0 = 0.0;
    let mut d0 = 0.0;
    let mut f1 = linear;
    let mut d1 = deflection_under_load(&mut model, dof, &mut q, 0.0, f1, &newton)?;
    for it in 0..100 {
        if (d1 - target).abs() < 1e-8 * mesh.length {
            return Ok(ReferenceForce {
                force: f1,
                deflection: d1,
                secant_iterations: it,
            });
        }
        if d1 == d0 {
            return Err(Error::RootBracket("deflection does not respond to the load".into()));
        }
        let mut f2 = f1 + (target - d1) * (f1 - f0) / (d1 - d0);
        if !(f2 > 0.0) || !f2.is_finite() {
            f2 = 0.5 * f1;
        }
        // limit the growth per iteration so the inner load stepping stays short
        f2 = f2.min(4.0 * f1);
        let d2 = deflection_under_load(&mut model, dof, &mut q, f1, f2, &newton)?;
        f0 = f1;
        d0 = d1;
        f1 = f2;
        d1 = d2;
    }
    Err(Error::RootBracket(format!(
        "secant iteration did not reach the target deflection (last {d1} for load {f1})"
    )))
}

/// Same experiment with the midpoint deflection prescribed; returns the
/// midpoint reaction.
pub fn reference_force_displacement_controlled(mesh: &FiberMesh, supports: Supports, n_steps: usize) -> Result<f64> {
    let target = mesh.length / 4.0;
    let (model, dof) = build_single_fiber_model(mesh.clone(), supports, true)?;
    let newton = reference_newton(mesh);
    let mut q = model.reference.clone();
    for k in 1..=n_steps {
        let u = target * k as f64 / n_steps as f64;
        for &i in &model.dofs.driven {
            q[i] = model.reference[i] + u;
        }
        newton_solve(&model, &mut q, &newton)?;
    }
    let asm = model.assemble(&q, false)?;
    Ok(asm.gradient[dof])
}

/// Tangent matrix of the free system at `q`.
pub fn free_tangent(model: &Model, q: &DVector<f64>) -> Result<DMatrix<f64>> {
    Ok(model.tangent(&model.assemble(q, true)?))
}

/// Scaled residual infinity norm at `q`, independent of any solver path.
pub fn residual_norm(model: &Model, q: &DVector<f64>) -> Result<f64> {
    Ok(scaled_residual_norm(model, &model.residual(&model.assemble(q, false)?)))
}

/// Convenience for callers that only need the state at one displacement.
pub fn solve_at(model: &Model, guess: &SystemState, u_x: f64, newton: &NewtonSettings) -> Result<(SystemState, NewtonOutcome)> {
    let mut q = guess.q.clone();
    model.set_driven(&mut q, u_x);
    let out = newton_solve(model, &mut q, newton)?;
    Ok((
        SystemState {
            q,
            u_x,
            branch: guess.branch,
        },
        out,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_two_fiber_model, Branch, TwoFiberSetup};
    use nalgebra::Vector2;

    fn mesh(n: usize, e: f64) -> FiberMesh {
        FiberMesh::straight(5.0, 0.02, e, 0.3, n, Vector2::zeros()).unwrap()
    }

    fn free_pair(n: usize) -> Model {
        let setup = TwoFiberSetup {
            length: 5.0,
            radius: 0.02,
            youngs_modulus: 1e5,
            poisson_ratio: 0.3,
            n_elements: n,
            separation: 0.04,
            supports: Supports::PinRoller,
            interaction: None,
            contact: None,
        };
        build_two_fiber_model(&setup).unwrap().0
    }

    #[test]
    fn increment_cap_scales_largest_node() {
        let model = free_pair(4);
        let mut dq = DVector::zeros(model.dofs.free.len());
        let (k, _) = model
            .dofs
            .free
            .iter()
            .enumerate()
            .find(|(_, &i)| model.dofs.decompose(i) == (0, 2, 0))
            .unwrap();
        dq[k] = 0.03;
        assert_eq!(max_nodal_translation(&model, &dq), 0.03);
        assert!((increment_scale(&model, &dq, 0.01) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(increment_scale(&model, &dq, 0.05), 1.0);
    }

    #[test]
    fn non_interacting_fibers_carry_no_force() {
        let model = free_pair(4);
        let newton = NewtonSettings::for_fiber(&model.fibers[0], 0.01, 50);
        let settings = ContinuationSettings {
            u_start: 0.0,
            u_end: 0.5,
            step_initial: 0.05,
            step_min: 0.05 / 4.0,
            step_max: 0.2,
            grow_iterations: 6,
            predictor: true,
        };
        let start = model.reference_state(0.0, Branch::Contact);
        let sweep = continuation_sweep(&model, &start, &newton, &settings, |_, _| {}).unwrap();
        assert!(sweep.terminus.is_none());
        assert_eq!(sweep.records.last().unwrap().u_x, 0.5);
        for rec in &sweep.records {
            assert!(rec.reactions.f_x.abs() < 10.0 * newton.tol_residual, "{}", rec.reactions.f_x);
        }
        // the driven fiber ends up rigidly translated
        let q = &sweep.final_state.q;
        for p in model.positions(q, 1) {
            assert!((p.x - 0.54).abs() < 1e-9);
        }
    }

    #[test]
    fn sweep_grid_is_monotone_in_both_directions() {
        let model = free_pair(4);
        let newton = NewtonSettings::for_fiber(&model.fibers[0], 0.01, 50);
        for (a, b) in [(0.0, 0.3), (0.3, 0.0)] {
            let settings = ContinuationSettings {
                u_start: a,
                u_end: b,
                step_initial: 0.01,
                step_min: 0.01,
                step_max: 0.08,
                grow_iterations: 6,
                predictor: false,
            };
            let start = model.translated_state(a, Branch::Separated);
            let sweep = continuation_sweep(&model, &start, &newton, &settings, |_, _| {}).unwrap();
            let us: Vec<f64> = sweep.records.iter().map(|r| r.u_x).collect();
            assert!(us.windows(2).all(|w| (w[1] - w[0]) * (b - a) > 0.0));
            assert_eq!(*us.last().unwrap(), b);
        }
    }

    #[test]
    fn relaxation_of_an_equilibrium_stops_at_once() {
        let model = free_pair(4);
        let newton = NewtonSettings::for_fiber(&model.fibers[0], 0.01, 50);
        let mut q = model.translated_state(0.2, Branch::Unstable).q;
        let before = q.clone();
        let out = relax_to_steady_state(&model, &mut q, &newton, &RelaxationSettings::default()).unwrap();
        assert_eq!(out.steps, 1);
        assert!(out.final_iterations <= 1);
        assert!((q - before).amax() < 1e-14);
    }

    #[test]
    fn relaxed_state_does_not_depend_on_drag() {
        let model = free_pair(4);
        let newton = NewtonSettings::for_fiber(&model.fibers[0], 0.01, 50);
        let start = model.reference_state(0.2, Branch::Unstable).q;
        let mut results = Vec::new();
        for drag in [1e-4, 1e-2] {
            let mut q = start.clone();
            let settings = RelaxationSettings {
                drag,
                ..RelaxationSettings::default()
            };
            relax_to_steady_state(&model, &mut q, &newton, &settings).unwrap();
            results.push(q);
        }
        assert!((&results[0] - &results[1]).amax() < 1e-8);
    }

    #[test]
    fn reference_force_stiffens_beyond_linear_theory() {
        let m = mesh(16, 1e5);
        let linear = 48.0 * m.youngs_modulus * m.second_moment() * (m.length / 4.0) / m.length.powi(3);
        let rf = reference_force(&m, Supports::PinRoller).unwrap();
        assert!((rf.deflection - m.length / 4.0).abs() < 1e-7 * m.length);
        assert!(rf.force > linear, "{} vs {}", rf.force, linear);
    }

    #[test]
    fn reference_force_is_linear_in_modulus() {
        let a = reference_force(&mesh(8, 1e5), Supports::PinRoller).unwrap().force;
        let b = reference_force(&mesh(8, 1e4), Supports::PinRoller).unwrap().force;
        assert!((a / b - 10.0).abs() < 1e-6, "{}", a / b);
    }

    #[test]
    fn reference_force_routes_agree() {
        let m = mesh(8, 1e5);
        let secant = reference_force(&m, Supports::PinRoller).unwrap().force;
        let controlled = reference_force_displacement_controlled(&m, Supports::PinRoller, 20).unwrap();
        assert!((secant - controlled).abs() < 1e-6 * secant);
    }

    #[test]
    fn invalid_settings_rejected() {
        let m = mesh(4, 1e5);
        let mut s = NewtonSettings::for_fiber(&m, 0.01, 10);
        s.du_max = 0.0;
        assert!(matches!(s.validate(), Err(Error::Config { .. })));
        let c = ContinuationSettings {
            u_start: 0.0,
            u_end: 1.0,
            step_initial: 0.1,
            step_min: 0.2,
            step_max: 0.4,
            grow_iterations: 6,
            predictor: false,
        };
        assert!(matches!(c.validate(), Err(Error::Config { .. })));
    }
}
