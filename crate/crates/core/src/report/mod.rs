//! Command layer behind the binary: configuration files, step tables,
//! simulation summaries, parameter sweeps and validation reports.

mod config;

pub use config::{
    AmplitudeEntry, DecayBlock, DriveBlock, RunConfig, SimulationBlock, SweepBlock, SynthesisBlock, TargetBlock,
    TargetKind, ValidationBlock,
};

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{
    ideal_replay, lindblad_evolve_observed, mixed_fidelity, schrodinger_evolve_observed, target_fidelity, Trajectory,
};
use crate::fock::{DensityMatrix, StateVector};
use crate::synth::{step_count, synthesize_with, PlanKind, PulseSequence};
use crate::units::{rad_per_s_to_ghz, s_to_ns};
use crate::validate::{validate, ValidationReport};

/// Header of sweep CSV files.
pub const SWEEP_HEADER: &str = "x,eta,fidelity,total_time_ns,steps";

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG: i32 = 1;
    pub const SYNTHESIS: i32 = 2;
    pub const SIMULATION: i32 = 3;
    /// Validation ran but at least one condition failed.
    pub const VALIDATION_FAILED: i32 = 4;
}

/// Exit code for an error escaping a command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ZeroRabiAmplitude { .. }
        | Error::PhaseNotFound { .. }
        | Error::SynthesisResidual { .. }
        | Error::UnsupportedTransition { .. } => exit::SYNTHESIS,
        Error::Integrator { .. } | Error::SpaceMismatch { .. } => exit::SIMULATION,
        Error::Incommensurate { .. } | Error::VanishingMainAmplitude { .. } => exit::VALIDATION_FAILED,
        _ => exit::CONFIG,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    Ideal,
    #[default]
    Full,
    Lindblad,
}

impl std::str::FromStr for SimMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(SimMode::Ideal),
            "full" => Ok(SimMode::Full),
            "lindblad" => Ok(SimMode::Lindblad),
            other => Err(Error::Config(format!("unknown mode {other:?} (ideal|full|lindblad)"))),
        }
    }
}

/// Compiles the configured target at the configured device and drive.
pub fn cmd_synth(config: &RunConfig) -> Result<PulseSequence> {
    let target = config.target()?;
    synthesize_with(&target, &config.params()?, config.drive.x, config.synth_options())
}

/// One row per pulse: `ν, type, direction, ω̃/2π (GHz), t (ns), φ (rad)`.
pub fn step_table(sequence: &PulseSequence) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>3}  {:>6}  {:>4}  {:>7}  {:>12}  {:>10}  {:>9}", "nu", "type", "dir", "pair", "drive GHz", "t ns", "phi rad");
    for s in sequence.steps() {
        let _ = writeln!(
            out,
            "{:>3}  {:>6}  {:>4}  {:>7}  {:>12.6}  {:>10.6}  {:>9.6}",
            s.nu,
            s.transition.to_string(),
            s.direction.to_string(),
            format!("({},{})", s.n1, s.n2),
            rad_per_s_to_ghz(s.omega_drive),
            s_to_ns(s.duration),
            s.phase
        );
    }
    let _ = write!(out, "total {:.4} ns over {} steps", s_to_ns(sequence.total_duration()), sequence.steps().len());
    out
}

/// Outcome of [`cmd_simulate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub mode: SimMode,
    pub fidelity: f64,
    pub total_time_ns: f64,
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_drift: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_drift: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_population: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_eigenvalue: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator_steps: Option<usize>,
}

/// Runs `sequence` from `|0,0,g⟩` on the configured device and scores it against
/// the configured target, optionally sampling populations into `trajectory`.
pub fn cmd_simulate(
    config: &RunConfig,
    sequence: &PulseSequence,
    mode: SimMode,
    trajectory: Option<&mut Trajectory>,
) -> Result<SimulationResult> {
    let params = config.params()?;
    if params != *sequence.params() {
        log::warn!("device in the config differs from the one the sequence was compiled for");
    }
    let target = config.target()?;
    let opts = config.integrator_options()?;
    let space = opts.space();
    let initial = StateVector::vacuum(space);
    let base = SimulationResult {
        mode,
        fidelity: f64::NAN,
        total_time_ns: s_to_ns(sequence.total_duration()),
        steps: sequence.steps().len(),
        norm_drift: None,
        trace_drift: None,
        edge_population: None,
        min_eigenvalue: None,
        integrator_steps: None,
    };
    match mode {
        SimMode::Ideal => {
            let out = ideal_replay(sequence, &initial)?;
            if let Some(tr) = trajectory {
                tr.record_state(sequence.total_duration(), &out);
            }
            Ok(SimulationResult {
                fidelity: target_fidelity(&out, &target)?,
                norm_drift: Some((out.norm() - 1.0).abs()),
                ..base
            })
        }
        SimMode::Full => {
            let (out, rep) = match trajectory {
                Some(tr) => {
                    let mut obs = |t: f64, s: &StateVector| tr.record_state(t, s);
                    schrodinger_evolve_observed(&initial, sequence, &params, &opts, Some(&mut obs))?
                }
                None => schrodinger_evolve_observed(&initial, sequence, &params, &opts, None)?,
            };
            Ok(SimulationResult {
                fidelity: target_fidelity(&out, &target)?,
                norm_drift: Some(rep.drift),
                edge_population: Some(rep.edge_population),
                integrator_steps: Some(rep.accepted_steps),
                ..base
            })
        }
        SimMode::Lindblad => {
            let rates = config.rates()?;
            let rho0 = DensityMatrix::from_pure(&initial);
            let (rho, rep) = match trajectory {
                Some(tr) => {
                    let mut obs = |t: f64, r: &DensityMatrix| tr.record_density(t, r);
                    lindblad_evolve_observed(&rho0, sequence, &params, &rates, &opts, Some(&mut obs))?
                }
                None => lindblad_evolve_observed(&rho0, sequence, &params, &rates, &opts, None)?,
            };
            Ok(SimulationResult {
                fidelity: mixed_fidelity(&rho, &target.to_state(space)?)?,
                trace_drift: Some(rep.drift),
                edge_population: Some(rep.edge_population),
                min_eigenvalue: Some(rep.min_eigenvalue),
                integrator_steps: Some(rep.accepted_steps),
                ..base
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub x: f64,
    pub eta: f64,
    pub fidelity: f64,
    pub total_time_ns: f64,
    pub steps: usize,
}

/// Grid results in x-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub mode: SimMode,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{:.6},{:.4},{}", r.x, r.eta, r.fidelity, r.total_time_ns, r.steps);
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn get(&self, x: f64, eta: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.x == x && r.eta == eta)
    }
}

fn sweep_point(config: &RunConfig, x: f64, eta: f64, mode: SimMode) -> Result<SimulationResult> {
    let params = config.params_with_eta(eta)?;
    let target = config.target()?;
    let sequence = synthesize_with(&target, &params, x, config.synth_options())?;
    let mut point = config.clone();
    point.system = params.to_config();
    point.drive.x = x;
    cmd_simulate(&point, &sequence, mode, None)
}

/// Evaluates every `(x, η)` grid point with `workers` threads. Failed points
/// become NaN rows.
pub fn cmd_sweep(config: &RunConfig, mode: SimMode, workers: usize) -> Result<SweepResult> {
    let grid = config.sweep.as_ref().ok_or_else(|| Error::Config("config has no sweep block".into()))?;
    let points: Vec<(f64, f64)> =
        grid.x_values.iter().flat_map(|&x| grid.eta_values.iter().map(move |&e| (x, e))).collect();
    let run = |&(x, eta): &(f64, f64)| match sweep_point(config, x, eta, mode) {
        Ok(r) => {
            log::info!("x = {x}, eta = {eta}: fidelity {:.4}", r.fidelity);
            SweepRow { x, eta, fidelity: r.fidelity, total_time_ns: r.total_time_ns, steps: r.steps }
        }
        Err(e) => {
            log::error!("x = {x}, eta = {eta}: {e}");
            SweepRow { x, eta, fidelity: f64::NAN, total_time_ns: f64::NAN, steps: 0 }
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let rows = pool.install(|| points.par_iter().map(run).collect());
    Ok(SweepResult { mode, rows })
}

pub fn cmd_validate(config: &RunConfig) -> Result<ValidationReport> {
    validate(&config.params()?, config.drive.x, config.target.n_max, &config.validation_options())
}

pub fn cmd_stepcount(n_max: u32, kind: PlanKind) -> u64 {
    step_count(n_max, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(kind: &str, n_max: u32) -> RunConfig {
        RunConfig::from_json(&format!(
            r#"{{ "drive": {{ "x": 1.7571 }}, "target": {{ "kind": "{kind}", "n_max": {n_max} }},
                 "simulation": {{ "fock_cutoff": {n_max} }} }}"#
        ))
        .unwrap()
    }

    #[test]
    fn synth_row_counts() {
        assert_eq!(cmd_synth(&config("even", 2)).unwrap().steps().len(), 8);
        assert_eq!(cmd_synth(&config("noon", 2)).unwrap().steps().len(), 7);
        let mut c = config("noon", 5);
        c.simulation.fock_cutoff = 5;
        assert_eq!(cmd_synth(&c).unwrap().steps().len(), 19);
        let table = step_table(&cmd_synth(&config("even", 2)).unwrap());
        assert_eq!(table.lines().count(), 1 + 8 + 1);
    }

    #[test]
    fn ideal_mode_is_exact() {
        let c = config("noon", 2);
        let seq = cmd_synth(&c).unwrap();
        let r = cmd_simulate(&c, &seq, SimMode::Ideal, None).unwrap();
        assert!(r.fidelity > 1.0 - 1e-9);
        assert!((r.total_time_ns - 10.4451).abs() < 0.1);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"norm_drift\"") && !json.contains("trace_drift"));
    }

    #[test]
    fn sweep_order_and_failures() {
        let mut c = config("even", 1);
        c.simulation.fock_cutoff = 2;
        // η = 0 leaves the red sidebands without amplitude: that point fails
        c.sweep = Some(SweepBlock { x_values: vec![1.0, 2.0], eta_values: vec![0.0, 0.3] });
        let a = cmd_sweep(&c, SimMode::Ideal, 2).unwrap();
        let b = cmd_sweep(&c, SimMode::Ideal, 1).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        let order: Vec<_> = a.rows.iter().map(|r| (r.x, r.eta)).collect();
        assert_eq!(order, vec![(1.0, 0.0), (1.0, 0.3), (2.0, 0.0), (2.0, 0.3)]);
        assert!(a.rows[0].fidelity.is_nan());
        assert!(a.rows[1].fidelity > 1.0 - 1e-9);
        let csv = a.to_csv();
        assert_eq!(csv.lines().next().unwrap(), SWEEP_HEADER);
        assert!(csv.lines().nth(1).unwrap().contains("NaN"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Config("x".into())), exit::CONFIG);
        assert_eq!(exit_code(&Error::SynthesisResidual { residual: 1.0 }), exit::SYNTHESIS);
        assert_eq!(exit_code(&Error::Integrator { t: 0.0, reason: String::new() }), exit::SIMULATION);
    }

    #[test]
    fn mode_names() {
        assert_eq!("lindblad".parse::<SimMode>().unwrap(), SimMode::Lindblad);
        assert!("exact".parse::<SimMode>().is_err());
        assert_eq!(cmd_stepcount(2, PlanKind::General), 8);
    }
}
