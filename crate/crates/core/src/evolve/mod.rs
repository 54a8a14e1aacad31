//! Dynamics engines: ideal sideband replay, full Schrödinger evolution and
//! Lindblad master-equation evolution, plus fidelity measures.

pub mod dop853;
pub mod ideal;
mod lindblad;
mod model;
mod schrodinger;
mod trajectory;

pub use ideal::{apply_sideband, frame_phases, ideal_propagator, ideal_replay, sideband_hamiltonian, sideband_pairs};
pub use lindblad::{lindblad_evolve, lindblad_evolve_observed};
pub use model::{displacement_elements, Frame};
pub use schrodinger::{schrodinger_evolve, schrodinger_evolve_observed};
pub use trajectory::Trajectory;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, SpaceDescriptor, StateVector};
use crate::synth::{PulseSequence, TargetState};
use crate::units::mhz_to_rad_per_s;

/// Edge population above which a truncation warning is raised.
pub const EDGE_WARNING: f64 = 1e-6;

/// Lindblad rates in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DecayRates {
    pub gamma_eg: f64,
    pub gamma_ee: f64,
    pub gamma_gg: f64,
    pub kappa_1: f64,
    pub kappa_2: f64,
}

impl DecayRates {
    pub fn new(gamma_eg: f64, gamma_ee: f64, gamma_gg: f64, kappa_1: f64, kappa_2: f64) -> Result<Self> {
        let r = Self { gamma_eg, gamma_ee, gamma_gg, kappa_1, kappa_2 };
        r.validate()?;
        Ok(r)
    }

    /// `γ_ee/2π = 2 MHz`, `γ_eg/2π = κ_1/2π = κ_2/2π = 1 MHz`, `γ_gg = 0`.
    pub fn reference() -> Self {
        Self {
            gamma_eg: mhz_to_rad_per_s(1.0),
            gamma_ee: mhz_to_rad_per_s(2.0),
            gamma_gg: 0.0,
            kappa_1: mhz_to_rad_per_s(1.0),
            kappa_2: mhz_to_rad_per_s(1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_eg", self.gamma_eg),
            ("gamma_ee", self.gamma_ee),
            ("gamma_gg", self.gamma_gg),
            ("kappa_1", self.kappa_1),
            ("kappa_2", self.kappa_2),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Largest step in s. `None` uses `1/(50 f_max)` with `f_max` the fastest
    /// frequency `(ω_z + ω̃)/2π` of the sequence.
    pub max_step: Option<f64>,
    pub cutoff1: usize,
    pub cutoff2: usize,
    pub frame: Frame,
    pub guard_band: usize,
    /// Map the jump operators through the displacement in displaced frames.
    pub transform_jumps: bool,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            max_step: None,
            cutoff1: 7,
            cutoff2: 7,
            frame: Frame::DisplacedDrive,
            guard_band: 2,
            transform_jumps: false,
        }
    }
}

impl IntegratorOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::InvalidParams("tolerances must be > 0".into()));
        }
        if let Some(h) = self.max_step {
            if !(h > 0.0) {
                return Err(Error::InvalidParams("max step must be > 0".into()));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> SpaceDescriptor {
        SpaceDescriptor::new(self.cutoff1, self.cutoff2)
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff1 = cutoff;
        self.cutoff2 = cutoff;
        self
    }

    pub fn with_tolerances(mut self, rtol: f64, atol: f64) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    pub(crate) fn resolved_max_step(&self, sequence: &PulseSequence) -> f64 {
        self.max_step.unwrap_or_else(|| {
            let fastest = (sequence.params().omega_z + sequence.max_drive_frequency()) / TAU;
            1.0 / (50.0 * fastest)
        })
    }

    pub(crate) fn dop853(&self, sequence: &PulseSequence) -> dop853::Dop853Options {
        dop853::Dop853Options {
            rtol: self.rtol,
            atol: self.atol,
            max_step: self.resolved_max_step(sequence),
            ..Default::default()
        }
    }
}

/// Diagnostics of one evolution run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct EvolutionReport {
    /// `|‖ψ‖ − 1|` (pure) or `max |tr ρ − 1|` (mixed) at step boundaries.
    pub drift: f64,
    /// Largest population on the top Fock level seen at step boundaries.
    pub edge_population: f64,
    /// Max-norm of `ρ − ρ†` at the end (mixed runs only).
    pub hermiticity: f64,
    /// Smallest eigenvalue of the final state (mixed runs only).
    pub min_eigenvalue: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub evaluations: usize,
}

impl EvolutionReport {
    fn absorb(&mut self, s: dop853::Dop853Stats) {
        self.accepted_steps += s.accepted;
        self.rejected_steps += s.rejected;
        self.evaluations += s.evaluations;
    }
}

/// `|⟨target|a⟩|`
pub fn fidelity(a: &StateVector, target: &StateVector) -> Result<f64> {
    Ok(target.inner(a)?.norm())
}

pub fn target_fidelity(a: &StateVector, target: &TargetState) -> Result<f64> {
    fidelity(a, &target.to_state(*a.space())?)
}

/// `√⟨target|ρ|target⟩`
pub fn mixed_fidelity(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    Ok(rho.expectation(target)?.max(0.0).sqrt())
}

pub fn total_generation_time(sequence: &PulseSequence) -> f64 {
    sequence.total_duration()
}

fn check_space(space: &SpaceDescriptor, sequence: &PulseSequence) -> Result<()> {
    let need = sequence.n_max() as usize;
    if space.cutoff1() < need || space.cutoff2() < need {
        return Err(Error::SpaceMismatch {
            expected: sequence.space().dimension(),
            actual: space.dimension(),
        });
    }
    Ok(())
}

fn warn_edge(edge: f64) {
    if edge > EDGE_WARNING {
        log::warn!("population {edge:.3e} reached the Fock cutoff; raise the cutoff");
    }
}
