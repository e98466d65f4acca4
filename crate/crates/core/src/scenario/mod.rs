//! Configured experiments: reference force, branch sweeps and relaxation,
//! and the files they produce.

pub mod config;
pub mod output;
pub mod presets;
pub mod verify;

use std::collections::BTreeSet;
use std::path::Path;

pub use config::ScenarioConfig;
pub use output::{CurveRecord, Summary};
pub use presets::{preset, preset_members, PresetMember, PRESET_NAMES};

use crate::contact::GapSample;
use crate::error::{Error, Result};
use crate::model::{build_two_fiber_model, Branch, Model, SystemState};
use crate::solver::{continuation_sweep, reference_force, relax_to_steady_state};

/// Normalizing force and the reference force of the simulated fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub f_ref: f64,
    pub f_ref_own: f64,
}

pub fn normalization(config: &ScenarioConfig) -> Result<Normalization> {
    let supports = config.fiber.supports.into();
    let own = reference_force(&config.mesh()?, supports)?.force;
    let f_ref = match config.normalization.youngs_modulus {
        Some(e) if e != config.fiber.youngs_modulus => reference_force(&config.mesh_with_modulus(e)?, supports)?.force,
        _ => own,
    };
    Ok(Normalization { f_ref, f_ref_own: own })
}

/// Everything a run computed, before it is written to disk.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub curve: Vec<CurveRecord>,
    pub summary: Summary,
    pub states: Vec<SystemState>,
    pub gaps: Vec<Vec<GapSample>>,
}

struct Collector<'a> {
    config: &'a ScenarioConfig,
    model: &'a Model,
    norm: Normalization,
    branch: Branch,
    curve: Vec<CurveRecord>,
    states: Vec<SystemState>,
    gaps: Vec<Vec<GapSample>>,
}

impl Collector<'_> {
    fn push(&mut self, state: &SystemState, f_x: f64, iterations: usize, contact_gaps: &[GapSample]) {
        let gaps = if self.config.contact.enabled {
            contact_gaps.to_vec()
        } else {
            self.model.gap_field(&state.q, &self.config.gap_rule())
        };
        self.curve.push(CurveRecord {
            step: self.curve.len(),
            u_x: state.u_x,
            u_x_over_l: state.u_x / self.config.fiber.length,
            f_x,
            f_x_normalized: f_x / self.norm.f_ref,
            newton_iters: iterations,
            branch: self.branch.label().into(),
        });
        self.states.push(SystemState {
            branch: self.branch,
            ..state.clone()
        });
        self.gaps.push(gaps);
    }

    fn finish(self, terminus: Option<f64>, termination: Option<String>) -> Result<RunResult> {
        let Some((u_at_max, f_max, u_at_min, f_min, mean)) = Summary::extrema(&self.curve) else {
            return Err(Error::NoConvergedStep(
                termination.unwrap_or_else(|| "nothing to solve".into()),
            ));
        };
        let radius = self.config.fiber.radius;
        let (mut min_gap, mut u_at_min_gap) = (f64::INFINITY, f64::NAN);
        for (rec, gaps) in self.curve.iter().zip(&self.gaps) {
            for g in gaps {
                if g.gap < min_gap {
                    min_gap = g.gap;
                    u_at_min_gap = rec.u_x;
                }
            }
        }
        let summary = Summary {
            f_ref: self.norm.f_ref,
            f_ref_own: self.norm.f_ref_own,
            u_at_max,
            f_max,
            u_at_min,
            f_min,
            branch_terminus_u: terminus.unwrap_or(f64::NAN),
            mean_newton_iters: mean,
            min_gap_over_r: min_gap / radius,
            u_at_min_gap,
            branch: self.branch.label().into(),
            steps: self.curve.len(),
            termination,
        };
        Ok(RunResult {
            curve: self.curve,
            summary,
            states: self.states,
            gaps: self.gaps,
        })
    }
}

/// Runs one branch of a scenario in memory.
///
/// `Contact` sweeps from `u_start` up, starting from straight fibers at
/// `u_start`. `Separated` sweeps from `u_end` down. `Unstable` relaxes
/// straight fibers at each of `relaxation.u_values`.
pub fn simulate(config: &ScenarioConfig, branch: Branch) -> Result<RunResult> {
    config.validate()?;
    let (model, _) = build_two_fiber_model(&config.setup())?;
    let norm = normalization(config)?;
    let newton = config.newton();
    let mut collector = Collector {
        config,
        model: &model,
        norm,
        branch,
        curve: Vec::new(),
        states: Vec::new(),
        gaps: Vec::new(),
    };

    match branch {
        Branch::Contact | Branch::Separated => {
            let reverse = branch == Branch::Separated;
            let settings = config.continuation(reverse);
            let start = model.translated_state(settings.u_start, branch);
            let result = continuation_sweep(&model, &start, &newton, &settings, |state, rec| {
                collector.push(state, rec.reactions.f_x, rec.iterations, &rec.gap_samples)
            });
            match result {
                Ok(sweep) => collector.finish(sweep.terminus, sweep.termination),
                Err(e) if e.is_recoverable() => Err(Error::NoConvergedStep(e.to_string())),
                Err(e) => Err(e),
            }
        }
        Branch::Unstable => {
            let relax = config.relaxation_settings();
            let mut failures = Vec::new();
            for &u in &config.relaxation.u_values {
                let mut state = model.translated_state(u, branch);
                match relax_to_steady_state(&model, &mut state.q, &newton, &relax) {
                    Ok(outcome) => {
                        let asm = model.assemble(&state.q, false)?;
                        let f_x = model.extract_reactions(&asm).f_x;
                        collector.push(&state, f_x, outcome.final_iterations, &asm.gap_samples);
                    }
                    Err(e) if e.is_recoverable() => {
                        log::warn!("relaxation at u_x = {u} failed: {e}");
                        failures.push(format!("u_x = {u}: {e}"));
                    }
                    Err(e) => return Err(e),
                }
            }
            let termination = (!failures.is_empty()).then(|| failures.join("; "));
            collector.finish(None, termination)
        }
    }
}

/// Steps that get a VTK snapshot: every `n`-th step, the force extrema and
/// the last step.
pub fn snapshot_steps(curve: &[CurveRecord], every_n: usize) -> BTreeSet<usize> {
    let mut steps = BTreeSet::new();
    if curve.is_empty() {
        return steps;
    }
    if every_n > 0 {
        steps.extend((0..curve.len()).step_by(every_n));
    }
    let by_force = |a: &&CurveRecord, b: &&CurveRecord| a.f_x_normalized.total_cmp(&b.f_x_normalized);
    steps.insert(curve.iter().max_by(by_force).unwrap().step);
    steps.insert(curve.iter().min_by(by_force).unwrap().step);
    steps.insert(curve.len() - 1);
    steps
}

/// Writes the artifacts of a finished run into `out_dir`.
pub fn write_artifacts(config: &ScenarioConfig, result: &RunResult, out_dir: &Path) -> Result<()> {
    let out = &config.outputs;
    std::fs::create_dir_all(out_dir)?;
    output::write_curve(&out_dir.join(&out.curve_csv), &result.curve)?;
    std::fs::write(out_dir.join(&out.summary), result.summary.to_toml())?;

    let (model, _) = build_two_fiber_model(&config.setup())?;
    let vtk_dir = out_dir.join(&out.vtk_dir);
    std::fs::create_dir_all(&vtk_dir)?;
    let steps = snapshot_steps(&result.curve, out.snapshots_every_n);
    let radius = config.fiber.radius;
    let mut gap_rows = Vec::new();
    for &step in &steps {
        let rec = &result.curve[step];
        let title = format!("{} {} step {} u_x {}", config.name, rec.branch, step, rec.u_x);
        std::fs::write(
            vtk_dir.join(format!("fibers_{step:05}.vtk")),
            output::fibers_vtk(&model, &result.states[step].q, &title),
        )?;
        std::fs::write(
            vtk_dir.join(format!("gaps_{step:05}.vtk")),
            output::gaps_vtk(&result.gaps[step], radius, &title),
        )?;
        gap_rows.push((step, rec.u_x, result.gaps[step].as_slice()));
    }
    output::write_gaps(&out_dir.join(&out.gaps_csv), &gap_rows, radius)?;
    Ok(())
}

/// Runs one branch and writes its artifacts.
pub fn run(config: &ScenarioConfig, branch: Branch, out_dir: &Path) -> Result<RunResult> {
    let result = simulate(config, branch)?;
    write_artifacts(config, &result, out_dir)?;
    Ok(result)
}
