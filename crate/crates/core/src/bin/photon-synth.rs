use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use photon_synth::evolve::{Frame, Trajectory};
use photon_synth::report::{
    cmd_simulate, cmd_stepcount, cmd_sweep, cmd_synth, cmd_validate, exit, exit_code, step_table, RunConfig, SimMode,
};
use photon_synth::synth::{PlanKind, PulseSequence};
use photon_synth::Result;

#[derive(Parser)]
#[command(name = "photon-synth", version, about = "Two-mode photon-state pulse synthesis and simulation")]
struct Cli {
    /// More log output (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FrameArg {
    Displaced,
    Lab,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ideal,
    Full,
    Lindblad,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlanArg {
    General,
    Noon,
}

#[derive(Subcommand)]
enum Command {
    /// Compile the configured target into a pulse sequence.
    Synth {
        #[arg(long)]
        config: PathBuf,
        /// Sequence JSON to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sequence and report the fidelity.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Sequence JSON; compiled from the config when omitted.
        #[arg(long)]
        sequence: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "full")]
        mode: ModeArg,
        #[arg(long, value_enum)]
        frame: Option<FrameArg>,
        /// Result JSON to write.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Population trajectory CSV to write.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        /// Trajectory sampling interval in ns.
        #[arg(long, default_value_t = 0.01)]
        sample_ns: f64,
    },
    /// Fidelity over the configured (x, eta) grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV to write.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "full")]
        mode: ModeArg,
        #[arg(long, value_enum)]
        frame: Option<FrameArg>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Check the parameter-selection conditions.
    Validate {
        #[arg(long)]
        config: PathBuf,
        /// Report JSON to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Number of pulses for a photon budget.
    Stepcount {
        #[arg(long)]
        n_max: u32,
        #[arg(long, value_enum, default_value = "general")]
        plan: PlanArg,
    },
}

fn mode(m: ModeArg) -> SimMode {
    match m {
        ModeArg::Ideal => SimMode::Ideal,
        ModeArg::Full => SimMode::Full,
        ModeArg::Lindblad => SimMode::Lindblad,
    }
}

fn load(path: &Path, frame: Option<FrameArg>) -> Result<RunConfig> {
    let mut cfg = RunConfig::from_path(path)?;
    match frame {
        Some(FrameArg::Displaced) => cfg.simulation.frame = Frame::DisplacedDrive,
        Some(FrameArg::Lab) => cfg.simulation.frame = Frame::Lab,
        None => {}
    }
    Ok(cfg)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Synth { config, out } => {
            let seq = cmd_synth(&load(&config, None)?)?;
            println!("{}", step_table(&seq));
            if let Some(p) = out {
                std::fs::write(p, seq.to_json()?)?;
            }
        }
        Command::Simulate { config, sequence, mode: m, frame, out, trajectory, sample_ns } => {
            let cfg = load(&config, frame)?;
            let seq = match sequence {
                Some(p) => PulseSequence::from_json(&std::fs::read_to_string(p)?)?,
                None => cmd_synth(&cfg)?,
            };
            let mut tr = Trajectory::new(cfg.integrator_options()?.space(), sample_ns * 1e-9);
            let result = cmd_simulate(&cfg, &seq, mode(m), trajectory.as_ref().map(|_| &mut tr))?;
            if let Some(p) = trajectory {
                tr.save(&p)?;
            }
            write_or_print(out.as_deref(), &serde_json::to_string_pretty(&result)?)?;
        }
        Command::Sweep { config, out, mode: m, frame, workers } => {
            let result = cmd_sweep(&load(&config, frame)?, mode(m), workers)?;
            write_or_print(out.as_deref(), result.to_csv().trim_end())?;
        }
        Command::Validate { config, out } => {
            let report = cmd_validate(&load(&config, None)?)?;
            println!("{report}");
            if let Some(p) = out {
                std::fs::write(p, report.to_json()?)?;
            }
            if !report.pass {
                return Ok(exit::VALIDATION_FAILED);
            }
        }
        Command::Stepcount { n_max, plan } => {
            let kind = match plan {
                PlanArg::General => PlanKind::General,
                PlanArg::Noon => PlanKind::Noon,
            };
            println!("{}", cmd_stepcount(n_max, kind));
        }
    }
    Ok(exit::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the configuration exit code
            return ExitCode::from(if e.use_stderr() { exit::CONFIG as u8 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
