use super::model::{Frame, FullModel};
use super::{check_space, dop853, warn_edge, EvolutionReport, IntegratorOptions};
use crate::couplings::SystemParams;
use crate::error::Result;
use crate::fock::{displacement_unitary, free_rotation_phases, StateVector};
use crate::linalg::{dagger, CVector, C64};
use crate::synth::PulseSequence;

/// Entry and exit diagonal factors of one pulse in `frame`.
pub(super) fn step_frames(
    frame: Frame,
    space: &crate::fock::SpaceDescriptor,
    params: &SystemParams,
    x: f64,
    omega_drive: f64,
    phi: f64,
    t: f64,
) -> (Option<CVector>, CVector) {
    match frame {
        Frame::DisplacedDrive => (
            Some(super::frame_phases(space, params, x, omega_drive, phi, 0.0)),
            super::frame_phases(space, params, x, omega_drive, phi, t).mapv(|z| z.conj()),
        ),
        Frame::Displaced | Frame::Lab => (None, free_rotation_phases(space, params, t).mapv(|z| z.conj())),
    }
}

/// Evolves `initial` (displaced picture) through the pulses under the full model.
pub fn schrodinger_evolve(
    initial: &StateVector,
    sequence: &PulseSequence,
    params: &SystemParams,
    options: &IntegratorOptions,
) -> Result<(StateVector, EvolutionReport)> {
    schrodinger_evolve_observed(initial, sequence, params, options, None)
}

/// As [`schrodinger_evolve`], calling `observer(global_time, state)` after every
/// accepted integrator step. Observed states are in the simulated frame.
pub fn schrodinger_evolve_observed(
    initial: &StateVector,
    sequence: &PulseSequence,
    params: &SystemParams,
    options: &IntegratorOptions,
    mut observer: Option<&mut dyn FnMut(f64, &StateVector)>,
) -> Result<(StateVector, EvolutionReport)> {
    options.validate()?;
    params.validate()?;
    let space = *initial.space();
    check_space(&space, sequence)?;
    let model = FullModel::new(&space, params, sequence.x(), options.frame);
    let ode = options.dop853(sequence);
    let mut report = EvolutionReport::default();

    let start_norm = initial.norm();
    let disp = if options.frame == Frame::Lab {
        Some(displacement_unitary(&space, params.eta_1, params.eta_2)?)
    } else {
        None
    };
    let mut psi = match &disp {
        Some(d) => dagger(d).dot(initial.amplitudes()),
        None => initial.amplitudes().clone(),
    };

    let mut elapsed = 0.0;
    for step in sequence.steps() {
        if step.duration == 0.0 {
            continue;
        }
        let (wd, phi, t) = (step.omega_drive, step.phase, step.duration);
        let (entry, exit) = step_frames(options.frame, &space, params, sequence.x(), wd, phi, t);
        if let Some(e) = entry {
            psi *= &e;
        }
        let rhs = |tau: f64, y: &CVector, dy: &mut CVector| {
            model.hamiltonian(wd, phi, tau).apply(y, dy);
            dy.mapv_inplace(|z| C64::new(z.im, -z.re));
        };
        let (out, stats) = match observer.as_mut() {
            Some(obs) => {
                let mut wrapped = |tau: f64, y: &CVector| {
                    if let Ok(s) = StateVector::from_amplitudes(space, y.clone()) {
                        obs(elapsed + tau, &s);
                    }
                };
                dop853::integrate(rhs, 0.0, t, psi, &ode, Some(&mut wrapped))?
            }
            None => dop853::integrate(rhs, 0.0, t, psi, &ode, None)?,
        };
        report.absorb(stats);
        psi = out * &exit;
        elapsed += t;
        let s = StateVector::from_amplitudes(space, psi.clone())?;
        report.edge_population = report.edge_population.max(s.edge_population());
    }

    if let Some(d) = &disp {
        psi = d.dot(&psi);
    }
    let out = StateVector::from_amplitudes(space, psi)?;
    report.drift = (out.norm() - start_norm).abs();
    warn_edge(report.edge_population);
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{ideal_replay, target_fidelity, Frame};
    use crate::fock::{BasisLabel, Qubit, SpaceDescriptor};
    use crate::synth::{synthesize, TargetState};

    #[test]
    fn no_transverse_coupling_keeps_qubit() {
        let p = SystemParams::reference_device(0.3714);
        let seq = synthesize(&TargetState::even(1), &p, 1.0).unwrap();
        let mut off = p;
        off.omega_x = 0.0;
        let opts = IntegratorOptions::default().with_cutoff(3);
        let init = StateVector::vacuum(opts.space());
        let (out, rep) = schrodinger_evolve(&init, &seq, &off, &opts).unwrap();
        assert!((out.amplitude(BasisLabel::new(0, 0, Qubit::Ground)).norm() - 1.0).abs() < 1e-9);
        assert!(rep.drift < 1e-9);
    }

    #[test]
    fn small_eta_carrier_matches_ideal() {
        // a lone carrier pulse; weak ω_x keeps the off-resonant orders negligible
        let mut p = SystemParams::reference_device(1e-4);
        p.omega_x = crate::units::ghz_to_rad_per_s(0.05);
        let seq = synthesize(&TargetState::basis(1, 0, 0).unwrap(), &p, 1.0).unwrap();
        let mut steps = seq.steps().to_vec();
        let carrier = steps.iter_mut().find(|s| s.transition == crate::couplings::TransitionType::Carrier).unwrap();
        carrier.duration = 7.2e-9;
        carrier.phase = 0.9;
        let seq = PulseSequence::new(p, 1.0, 1, seq.plan_kind(), steps);
        let opts = IntegratorOptions::default().with_cutoff(2).with_tolerances(1e-10, 1e-12);
        let init = StateVector::vacuum(opts.space());
        let (full, _) = schrodinger_evolve(&init, &seq, &p, &opts).unwrap();
        let ideal = ideal_replay(&seq, &init).unwrap();
        let f = crate::evolve::fidelity(&full, &ideal).unwrap();
        assert!(1.0 - f < 1e-5, "fidelity {f}");
        assert!(full.population(BasisLabel::new(0, 0, Qubit::Excited)) > 0.1);
    }

    #[test]
    fn frames_agree() {
        let p = SystemParams::reference_device(0.4571);
        let target = TargetState::even(1);
        let seq = synthesize(&target, &p, 1.0286).unwrap();
        let base = IntegratorOptions::default().with_cutoff(4).with_tolerances(1e-10, 1e-12);
        let init = StateVector::vacuum(SpaceDescriptor::new(4, 4));
        let (a, _) = schrodinger_evolve(&init, &seq, &p, &base).unwrap();
        let (b, _) = schrodinger_evolve(&init, &seq, &p, &base.with_frame(Frame::Displaced)).unwrap();
        let fa = target_fidelity(&a, &target).unwrap();
        let fb = target_fidelity(&b, &target).unwrap();
        assert!((fa - fb).abs() < 1e-6, "{fa} vs {fb}");
        assert!(crate::evolve::fidelity(&a, &b).unwrap() > 1.0 - 1e-6);
    }
}
