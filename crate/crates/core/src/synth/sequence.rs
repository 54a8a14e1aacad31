use serde::{Deserialize, Serialize};

use super::plan::{Direction, PlanKind};
use crate::couplings::{rabi_amplitude, DriveConfig, SystemConfig, SystemParams, TransitionType, MAIN_ORDER};
use crate::error::Result;
use crate::fock::SpaceDescriptor;
use crate::linalg::C64;
use crate::units::{ghz_to_rad_per_s, ns_to_s, rad_per_s_to_ghz, s_to_ns};

/// One square-windowed drive pulse. Frequencies in rad/s, times in s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseStep {
    /// Forward position, starting at 1.
    pub nu: usize,
    pub transition: TransitionType,
    pub direction: Direction,
    /// Ground-side Fock labels of the acting pair.
    pub n1: u32,
    pub n2: u32,
    pub omega_drive: f64,
    pub duration: f64,
    pub phase: f64,
}

/// Forward-ordered pulse program and the device it was compiled for.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    params: SystemParams,
    x: f64,
    n_max: u32,
    plan_kind: PlanKind,
    steps: Vec<PulseStep>,
}

impl PulseSequence {
    pub fn new(params: SystemParams, x: f64, n_max: u32, plan_kind: PlanKind, steps: Vec<PulseStep>) -> Self {
        Self { params, x, n_max, plan_kind, steps }
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn plan_kind(&self) -> PlanKind {
        self.plan_kind
    }

    pub fn steps(&self) -> &[PulseStep] {
        &self.steps
    }

    /// Smallest space holding the working space.
    pub fn space(&self) -> SpaceDescriptor {
        SpaceDescriptor::new(self.n_max as usize, self.n_max as usize)
    }

    pub fn total_duration(&self) -> f64 {
        self.steps.iter().map(|s| s.duration).sum()
    }

    pub fn drive(&self, step: &PulseStep) -> DriveConfig {
        DriveConfig { x: self.x, omega_drive: step.omega_drive, phi: step.phase }
    }

    /// Rabi amplitude of the step's targeted pair.
    pub fn rabi_frequency(&self, step: &PulseStep) -> C64 {
        let (k1, k2) = step.transition.k();
        let m1 = (step.n1 as i32 + k1) as u32;
        let m2 = (step.n2 as i32 + k2) as u32;
        rabi_amplitude(
            &self.params,
            &self.drive(step),
            MAIN_ORDER,
            k1,
            k2,
            step.n1.min(m1),
            step.n2.min(m2),
        )
    }

    /// Largest drive frequency of any non-empty step.
    pub fn max_drive_frequency(&self) -> f64 {
        self.steps
            .iter()
            .filter(|s| s.duration > 0.0)
            .map(|s| s.omega_drive)
            .fold(0.0, f64::max)
    }

    pub fn to_file(&self) -> SequenceFile {
        SequenceFile {
            params: self.params.to_config(),
            x: self.x,
            n_max: self.n_max,
            plan: self.plan_kind,
            steps: self
                .steps
                .iter()
                .map(|s| StepRecord {
                    nu: s.nu,
                    k1: s.transition.k1(),
                    k2: s.transition.k2(),
                    direction: s.direction,
                    n1: s.n1,
                    n2: s.n2,
                    omega_drive_ghz: rad_per_s_to_ghz(s.omega_drive),
                    duration_ns: s_to_ns(s.duration),
                    phase_rad: s.phase,
                })
                .collect(),
            total_ns: s_to_ns(self.total_duration()),
        }
    }

    pub fn from_file(file: &SequenceFile) -> Result<Self> {
        let params = file.params.to_params()?;
        let steps = file
            .steps
            .iter()
            .map(|r| {
                Ok(PulseStep {
                    nu: r.nu,
                    transition: TransitionType::from_k(r.k1, r.k2)?,
                    direction: r.direction,
                    n1: r.n1,
                    n2: r.n2,
                    omega_drive: ghz_to_rad_per_s(r.omega_drive_ghz),
                    duration: ns_to_s(r.duration_ns),
                    phase: r.phase_rad,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(params, file.x, file.n_max, file.plan, steps))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}

/// On-disk sequence document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceFile {
    pub params: SystemConfig,
    pub x: f64,
    pub n_max: u32,
    pub plan: PlanKind,
    pub steps: Vec<StepRecord>,
    pub total_ns: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub nu: usize,
    pub k1: i32,
    pub k2: i32,
    pub direction: Direction,
    pub n1: u32,
    pub n2: u32,
    pub omega_drive_ghz: f64,
    pub duration_ns: f64,
    pub phase_rad: f64,
}
