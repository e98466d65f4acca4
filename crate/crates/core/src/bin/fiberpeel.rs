use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fiberpeel::model::Branch;
use fiberpeel::scenario::{self, preset_members, verify::verify, ScenarioConfig, PRESET_NAMES};
use fiberpeel::solver::{reference_force, reference_force_displacement_controlled};
use fiberpeel::Error;

#[derive(Parser)]
#[command(name = "fiberpeel", version, about = "Peeling and pull-off of two adhesive elastic fibers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace one equilibrium branch and write its artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "contact")]
        branch: BranchArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a named configuration. Study presets write one file per member.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(PRESET_NAMES))]
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the reference force of the configured fiber.
    Refforce {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check linearization, invariance and quadrature at a perturbed state.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Contact,
    Separated,
    Unstable,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Contact => Branch::Contact,
            BranchArg::Separated => Branch::Separated,
            BranchArg::Unstable => Branch::Unstable,
        }
    }
}

/// File name of one member of a multi-member preset, e.g. `study-n8.toml`.
fn member_path(out: &Path, label: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "toml".into());
    out.with_file_name(format!("{stem}-{label}.{ext}"))
}

fn execute(command: Command) -> fiberpeel::Result<bool> {
    match command {
        Command::Run { config, branch, out } => {
            let config = ScenarioConfig::load(&config)?;
            let result = scenario::run(&config, branch.into(), &out)?;
            let s = &result.summary;
            println!("steps              {}", s.steps);
            println!("F_ref              {:e}", s.f_ref);
            println!("F_max              {} at u_x {}", s.f_max, s.u_at_max);
            println!("F_min              {} at u_x {}", s.f_min, s.u_at_min);
            println!("branch_terminus_u  {}", s.branch_terminus_u);
            println!("min_gap_over_R     {}", s.min_gap_over_r);
            if let Some(t) = &s.termination {
                println!("termination        {t}");
            }
            Ok(true)
        }
        Command::Preset { name, out } => {
            let members = preset_members(&name)?;
            if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            if members.len() == 1 {
                members[0].config.save(&out)?;
                println!("{}", out.display());
            } else {
                for m in &members {
                    let path = member_path(&out, &m.label);
                    m.config.save(&path)?;
                    println!("{}", path.display());
                }
            }
            Ok(true)
        }
        Command::Refforce { config } => {
            let config = ScenarioConfig::load(&config)?;
            let mesh = config.mesh()?;
            let supports = config.fiber.supports.into();
            let secant = reference_force(&mesh, supports)?;
            let controlled = reference_force_displacement_controlled(&mesh, supports, 40)?;
            println!("F_ref                    {:.16e}", secant.force);
            println!("midpoint deflection      {:.16e}", secant.deflection);
            println!("secant iterations        {}", secant.secant_iterations);
            println!("displacement-controlled  {:.16e}", controlled);
            println!("relative difference      {:e}", (secant.force - controlled).abs() / secant.force);
            Ok(true)
        }
        Command::Verify { config } => {
            let config = ScenarioConfig::load(&config)?;
            let mut all = true;
            for check in verify(&config)? {
                let status = match check.tolerance {
                    None => "INFO",
                    Some(_) if check.passed() => "PASS",
                    Some(_) => "FAIL",
                };
                let bound = check.tolerance.map_or(String::new(), |t| format!(" (< {t:e})"));
                println!("{status} {}: {:e}{bound}", check.name, check.value);
                all &= check.passed();
            }
            Ok(all)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config { .. } | Error::Parse { .. } | Error::UnknownPreset(_) => 2,
                Error::NoConvergedStep(_) => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
