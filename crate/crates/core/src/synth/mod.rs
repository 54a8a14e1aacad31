//! Backward-recursion compiler from a target two-mode state to a pulse sequence.
//!
//! Starting from the target, each planned step picks the duration and phase
//! that empty one amplitude of its acting pair, then the inverse of the ideal
//! step is applied. After the whole plan the state is `|0,0,g⟩`; reversing
//! the recorded steps gives the forward pulse sequence.

mod phase;
mod plan;
mod sequence;
mod target;

pub use phase::{phase_residual, phase_roots, solve_phase, PhaseBranch};
pub use plan::{plan, plan_noon, plan_procedures, step_count, Direction, PlanKind, PlanStep};
pub use sequence::{PulseSequence, PulseStep};
pub use target::TargetState;

use std::f64::consts::FRAC_PI_2;

use crate::couplings::{rabi_amplitude, resonant_drive_frequency, DriveConfig, SystemParams, MAIN_ORDER};
use crate::error::{Error, Result};
use crate::evolve::ideal::{apply_sideband, frame_phases, sideband_pairs};
use crate::fock::{BasisLabel, Qubit, SpaceDescriptor};
use crate::linalg::C64;

/// Amplitudes below this modulus count as empty.
pub const EMPTY_AMPLITUDE: f64 = 1e-12;

/// Required overlap of the fully reduced state with `|0,0,g⟩`.
pub const GROUND_OVERLAP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SynthOptions {
    /// `None` selects the NOON plan for targets on the top diagonal and the
    /// general plan otherwise.
    pub plan: Option<PlanKind>,
    pub branch: PhaseBranch,
}

/// Compiles `target` with the default options.
pub fn synthesize(target: &TargetState, params: &SystemParams, x: f64) -> Result<PulseSequence> {
    synthesize_with(target, params, x, SynthOptions::default())
}

pub fn synthesize_with(
    target: &TargetState,
    params: &SystemParams,
    x: f64,
    options: SynthOptions,
) -> Result<PulseSequence> {
    params.validate()?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidDrive(format!("x must be > 0, got {x}")));
    }
    let n_max = target.n_max().max(1);
    let kind = options.plan.unwrap_or(if target.on_top_diagonal() {
        PlanKind::Noon
    } else {
        PlanKind::General
    });
    let recipe = plan(n_max, kind)?;
    let space = SpaceDescriptor::new(n_max as usize, n_max as usize);
    let mut psi = target.to_state(space)?.into_amplitudes();

    let mut steps = Vec::with_capacity(recipe.len());
    for (i, st) in recipe.iter().enumerate() {
        let (k1, k2) = st.transition.k();
        let (m1, m2) = st.partner();
        let omega_drive = resonant_drive_frequency(params, k1, k2)?;
        let flat = DriveConfig { x, omega_drive, phi: 0.0 };
        let omega0 = rabi_amplitude(
            params,
            &flat,
            MAIN_ORDER,
            k1,
            k2,
            st.n1.min(m1),
            st.n2.min(m2),
        );
        let c = psi[space.index(BasisLabel::new(st.n1 as usize, st.n2 as usize, Qubit::Ground))];
        let d = psi[space.index(BasisLabel::new(m1 as usize, m2 as usize, Qubit::Excited))];
        let (num, den, offset) = match st.direction {
            Direction::GroundToExcited => (c.norm(), d.norm(), -FRAC_PI_2),
            Direction::ExcitedToGround => (d.norm(), c.norm(), FRAC_PI_2),
        };
        let nu = recipe.len() - i;

        let (duration, phi) = if num < EMPTY_AMPLITUDE {
            (0.0, 0.0)
        } else {
            if omega0.norm() == 0.0 {
                return Err(Error::ZeroRabiAmplitude { step: nu, k1, k2, n1: st.n1, n2: st.n2 });
            }
            let t = num.atan2(den) / omega0.norm();
            let rhs = arg_or_zero(c) - arg_or_zero(d);
            let s = u8::from(omega0.re < 0.0);
            let phi = solve_phase(rhs, x, omega_drive * t, offset, s, options.branch)?;
            (t, phi)
        };

        if duration > 0.0 {
            // ψ_{ν−1} = Ū(0)† U(t)† Ū(t) ψ_ν
            let pairs = sideband_pairs(&space, params, x, st.transition);
            psi *= &frame_phases(&space, params, x, omega_drive, phi, duration);
            apply_sideband(&mut psi, &pairs, phi, duration, true);
            psi *= &frame_phases(&space, params, x, omega_drive, phi, 0.0).mapv(|z| z.conj());
        }

        steps.push(PulseStep {
            nu,
            transition: st.transition,
            direction: st.direction,
            n1: st.n1,
            n2: st.n2,
            omega_drive,
            duration,
            phase: phi,
        });
    }

    let overlap = psi[space.index(BasisLabel::new(0, 0, Qubit::Ground))].norm();
    if (1.0 - overlap).abs() > GROUND_OVERLAP_TOLERANCE {
        return Err(Error::SynthesisResidual { residual: 1.0 - overlap });
    }
    steps.reverse();
    Ok(PulseSequence::new(*params, x, n_max, kind, steps))
}

/// `arg z`, with `arg 0 = 0` for amplitudes below [`EMPTY_AMPLITUDE`].
fn arg_or_zero(z: C64) -> f64 {
    if z.norm() < EMPTY_AMPLITUDE {
        0.0
    } else {
        z.arg()
    }
}
