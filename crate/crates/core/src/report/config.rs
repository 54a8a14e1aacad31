use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::couplings::{SystemConfig, SystemParams, TransitionType};
use crate::error::{Error, Result};
use crate::evolve::{DecayRates, Frame, IntegratorOptions};
use crate::linalg::C64;
use crate::synth::{PhaseBranch, PlanKind, SynthOptions, TargetState};
use crate::units::{mhz_to_rad_per_s, ns_to_s};
use crate::validate::ValidationOptions;

/// Custom targets may be this far from unit norm and still be rescaled.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;

/// One JSON document describing a device, a target and how to simulate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub system: SystemConfig,
    pub drive: DriveBlock,
    #[serde(default)]
    pub decay: DecayBlock,
    #[serde(default)]
    pub simulation: SimulationBlock,
    pub target: TargetBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepBlock>,
    #[serde(default)]
    pub synthesis: SynthesisBlock,
    #[serde(default)]
    pub validation: ValidationBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveBlock {
    pub x: f64,
}

/// `γ/2π` and `κ/2π` in MHz.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecayBlock {
    pub gamma_eg_mhz: f64,
    pub gamma_ee_mhz: f64,
    pub gamma_gg_mhz: f64,
    pub kappa_1_mhz: f64,
    pub kappa_2_mhz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationBlock {
    pub fock_cutoff: usize,
    pub rtol: f64,
    pub atol: f64,
    pub frame: Frame,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_step_ns: Option<f64>,
    pub guard_band: usize,
    pub transform_jumps: bool,
}

impl Default for SimulationBlock {
    fn default() -> Self {
        let o = IntegratorOptions::default();
        Self {
            fock_cutoff: o.cutoff1,
            rtol: o.rtol,
            atol: o.atol,
            frame: o.frame,
            max_step_ns: None,
            guard_band: o.guard_band,
            transform_jumps: o.transform_jumps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Even,
    Noon,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeEntry {
    pub n1: u32,
    pub n2: u32,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetBlock {
    pub kind: TargetKind,
    pub n_max: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub amplitudes: Vec<AmplitudeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub x_values: Vec<f64>,
    pub eta_values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthesisBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<PlanKind>,
    pub branch: PhaseBranch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidationBlock {
    pub rational_tolerance: f64,
    pub r_margin: f64,
    pub stark_fraction: f64,
    pub lamb_dicke_threshold: f64,
    /// Transitions whose Stark conditions are checked.
    pub stark_transitions: Vec<TransitionType>,
}

impl Default for ValidationBlock {
    fn default() -> Self {
        let o = ValidationOptions::default();
        Self {
            rational_tolerance: o.rational_tolerance,
            r_margin: o.r_margin,
            stark_fraction: o.stark_fraction,
            lamb_dicke_threshold: o.lamb_dicke_threshold,
            stark_transitions: o.transitions,
        }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.system;
        for (name, v) in [
            ("omega_x_ghz", s.omega_x_ghz),
            ("omega_z_ghz", s.omega_z_ghz),
            ("omega_1_ghz", s.omega_1_ghz),
            ("omega_2_ghz", s.omega_2_ghz),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(config_err(format!("system.{name} must be positive, got {v}")));
            }
        }
        self.params()?;
        if !(self.drive.x > 0.0 && self.drive.x.is_finite()) {
            return Err(config_err(format!("drive.x must be positive, got {}", self.drive.x)));
        }
        self.rates()?;
        self.integrator_options()?;
        if self.target.n_max == 0 {
            return Err(config_err("target.n_max must be >= 1"));
        }
        if self.simulation.fock_cutoff < self.target.n_max as usize {
            return Err(config_err("simulation.fock_cutoff must be >= target.n_max"));
        }
        match self.target.kind {
            TargetKind::Custom if self.target.amplitudes.is_empty() => {
                return Err(config_err("custom target needs amplitudes"));
            }
            TargetKind::Even | TargetKind::Noon if !self.target.amplitudes.is_empty() => {
                return Err(config_err("amplitudes are only allowed for custom targets"));
            }
            _ => {}
        }
        self.target()?;
        if let Some(sw) = &self.sweep {
            if sw.x_values.is_empty() || sw.eta_values.is_empty() {
                return Err(config_err("sweep grid must be non-empty"));
            }
            if sw.x_values.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                return Err(config_err("sweep x values must be positive"));
            }
            if sw.eta_values.iter().any(|e| !(*e >= 0.0 && e.is_finite())) {
                return Err(config_err("sweep eta values must be >= 0"));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> Result<SystemParams> {
        self.system.to_params().map_err(|e| config_err(e.to_string()))
    }

    /// Device with both Lamb-Dicke parameters set to `eta`.
    pub fn params_with_eta(&self, eta: f64) -> Result<SystemParams> {
        Ok(self.params()?.with_etas(eta, eta))
    }

    pub fn rates(&self) -> Result<DecayRates> {
        let d = &self.decay;
        DecayRates::new(
            mhz_to_rad_per_s(d.gamma_eg_mhz),
            mhz_to_rad_per_s(d.gamma_ee_mhz),
            mhz_to_rad_per_s(d.gamma_gg_mhz),
            mhz_to_rad_per_s(d.kappa_1_mhz),
            mhz_to_rad_per_s(d.kappa_2_mhz),
        )
        .map_err(|e| config_err(e.to_string()))
    }

    pub fn integrator_options(&self) -> Result<IntegratorOptions> {
        let s = &self.simulation;
        let o = IntegratorOptions {
            rtol: s.rtol,
            atol: s.atol,
            max_step: s.max_step_ns.map(ns_to_s),
            cutoff1: s.fock_cutoff,
            cutoff2: s.fock_cutoff,
            frame: s.frame,
            guard_band: s.guard_band,
            transform_jumps: s.transform_jumps,
        };
        o.validate().map_err(|e| config_err(e.to_string()))?;
        Ok(o)
    }

    pub fn synth_options(&self) -> SynthOptions {
        SynthOptions { plan: self.synthesis.plan, branch: self.synthesis.branch }
    }

    pub fn validation_options(&self) -> ValidationOptions {
        let v = &self.validation;
        ValidationOptions {
            rational_tolerance: v.rational_tolerance,
            r_margin: v.r_margin,
            stark_fraction: v.stark_fraction,
            lamb_dicke_threshold: v.lamb_dicke_threshold,
            transitions: v.stark_transitions.clone(),
        }
    }

    pub fn target(&self) -> Result<TargetState> {
        let t = &self.target;
        match t.kind {
            TargetKind::Even => Ok(TargetState::even(t.n_max)),
            TargetKind::Noon => Ok(TargetState::noon(t.n_max)),
            TargetKind::Custom => {
                let amps = t.amplitudes.iter().map(|a| ((a.n1, a.n2), C64::new(a.re, a.im)));
                let (target, norm_sq) = TargetState::normalized(t.n_max, amps)?;
                let off = (norm_sq.sqrt() - 1.0).abs();
                if off > RENORMALIZE_TOLERANCE {
                    return Err(config_err(format!("custom target norm is {:.9}, not 1", norm_sq.sqrt())));
                }
                if off > 0.0 {
                    log::warn!("custom target renormalized (norm was {:.12})", norm_sq.sqrt());
                }
                Ok(target)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{ "drive": { "x": 1.7571 }, "target": { "kind": "even", "n_max": 2 } }"#;

    #[test]
    fn defaults_fill_in() {
        let c = RunConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.system, SystemConfig::default());
        assert_eq!(c.simulation.fock_cutoff, 7);
        assert_eq!(c.simulation.frame, Frame::DisplacedDrive);
        assert_eq!(c.rates().unwrap(), DecayRates::default());
        assert_eq!(c.target().unwrap(), TargetState::even(2));
    }

    #[test]
    fn round_trip_is_idempotent() {
        let mut c = RunConfig::from_json(MINIMAL).unwrap();
        c.sweep = Some(SweepBlock { x_values: vec![0.3, 2.0], eta_values: vec![0.2] });
        let once = c.to_json().unwrap();
        let back = RunConfig::from_json(&once).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json().unwrap(), once);
    }

    #[test]
    fn rejects_bad_documents() {
        let unknown = r#"{ "drive": { "x": 1.0 }, "target": { "kind": "even", "n_max": 2 }, "extra": 1 }"#;
        assert!(matches!(RunConfig::from_json(unknown), Err(Error::Config(_))));
        let negative = r#"{ "system": { "omega_x_ghz": 1.2, "omega_z_ghz": -19.5, "omega_1_ghz": 6, "omega_2_ghz": 8, "eta_1": 0.3, "eta_2": 0.3 },
            "drive": { "x": 1.0 }, "target": { "kind": "even", "n_max": 2 } }"#;
        assert!(RunConfig::from_json(negative).is_err());
        let empty_sweep = r#"{ "drive": { "x": 1.0 }, "target": { "kind": "noon", "n_max": 2 }, "sweep": { "x_values": [], "eta_values": [0.2] } }"#;
        assert!(RunConfig::from_json(empty_sweep).is_err());
    }

    #[test]
    fn custom_targets() {
        let near = r#"{ "drive": { "x": 1.0 }, "target": { "kind": "custom", "n_max": 1,
            "amplitudes": [ { "n1": 1, "n2": 0, "re": 0.6 }, { "n1": 0, "n2": 1, "re": 0.0, "im": 0.8000001 } ] } }"#;
        let t = RunConfig::from_json(near).unwrap().target().unwrap();
        assert!((t.norm_sq() - 1.0).abs() < 1e-12);
        let far = near.replace("0.8000001", "0.81");
        assert!(RunConfig::from_json(&far).is_err());
    }

    #[test]
    fn frame_names() {
        let c = r#"{ "drive": { "x": 1.0 }, "target": { "kind": "even", "n_max": 1 }, "simulation": { "frame": "lab" } }"#;
        assert_eq!(RunConfig::from_json(c).unwrap().simulation.frame, Frame::Lab);
        let c = c.replace("\"lab\"", "\"displaced-drive\"");
        assert_eq!(RunConfig::from_json(&c).unwrap().simulation.frame, Frame::DisplacedDrive);
    }
}
