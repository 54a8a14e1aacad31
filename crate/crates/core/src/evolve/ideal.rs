//! Resonant-sideband model: each transition acts as independent two-level
//! rotations on the pairs `|n, g⟩ ↔ |n + k, e⟩`.

use crate::couplings::{rabi_amplitude, DriveConfig, SystemParams, TransitionType, MAIN_ORDER};
use crate::error::{Error, Result};
use crate::fock::{drive_frame_phases, free_rotation_phases, BasisLabel, Qubit, SpaceDescriptor, StateVector};
use crate::linalg::{CMatrix, CVector, C64};
use crate::synth::PulseSequence;

/// Coupled pair `(ground index, excited index, Ω at φ = 0)`.
pub type SidebandPair = (usize, usize, C64);

/// All pairs of `transition` that fit in `space`, with their amplitudes at zero
/// drive phase. The amplitude at phase `φ` is `Ω₀ e^{−iφ}`.
pub fn sideband_pairs(
    space: &SpaceDescriptor,
    params: &SystemParams,
    x: f64,
    transition: TransitionType,
) -> Vec<SidebandPair> {
    let (k1, k2) = transition.k();
    let drive = DriveConfig { x, omega_drive: 0.0, phi: 0.0 };
    let mut out = Vec::new();
    for n1 in 0..=space.cutoff1() {
        for n2 in 0..=space.cutoff2() {
            let m1 = n1 as i64 + i64::from(k1);
            let m2 = n2 as i64 + i64::from(k2);
            if m1 < 0 || m2 < 0 {
                continue;
            }
            let Some(e) = space.try_index(m1 as usize, m2 as usize, Qubit::Excited) else {
                continue;
            };
            let g = space.index(BasisLabel::new(n1, n2, Qubit::Ground));
            let z1 = n1.min(m1 as usize) as u32;
            let z2 = n2.min(m2 as usize) as u32;
            out.push((g, e, rabi_amplitude(params, &drive, MAIN_ORDER, k1, k2, z1, z2)));
        }
    }
    out
}

/// Applies `U(t)` (or `U(t)†`) of the transition to `amps` in place. Unpaired
/// labels are left untouched.
pub fn apply_sideband(amps: &mut CVector, pairs: &[SidebandPair], phi: f64, t: f64, adjoint: bool) {
    let rot = C64::from_polar(1.0, -phi);
    for &(g, e, omega0) in pairs {
        let (c, s) = block(omega0 * rot, t);
        let (a, b) = (amps[g], amps[e]);
        let i = C64::new(0.0, 1.0);
        if adjoint {
            amps[g] = c * a + i * s.conj() * b;
            amps[e] = i * s * a + c * b;
        } else {
            amps[g] = c * a - i * s.conj() * b;
            amps[e] = -i * s * a + c * b;
        }
    }
}

/// `(cos |Ω|t, e^{i arg Ω} sin |Ω|t)`
fn block(omega: C64, t: f64) -> (C64, C64) {
    let a = omega.norm();
    let c = C64::new((a * t).cos(), 0.0);
    let s = if a == 0.0 { C64::new(0.0, 0.0) } else { omega / a * (a * t).sin() };
    (c, s)
}

/// Diagonal of `Ū(t) = e^{iH₀t} U_d(t)` for a pulse with drive `(x, ω̃, φ)`.
pub fn frame_phases(
    space: &SpaceDescriptor,
    params: &SystemParams,
    x: f64,
    omega_drive: f64,
    phi: f64,
    t: f64,
) -> CVector {
    free_rotation_phases(space, params, t) * drive_frame_phases(space, x, omega_drive, phi, t)
}

/// `Σ Ω σ₊ ⊗ (shift by k) + h.c.` over every pair that fits in the space.
pub fn sideband_hamiltonian(
    space: &SpaceDescriptor,
    params: &SystemParams,
    x: f64,
    transition: TransitionType,
    phi: f64,
) -> CMatrix {
    let dim = space.dimension();
    let mut h = CMatrix::zeros((dim, dim));
    let rot = C64::from_polar(1.0, -phi);
    for (g, e, omega0) in sideband_pairs(space, params, x, transition) {
        h[[e, g]] = omega0 * rot;
        h[[g, e]] = (omega0 * rot).conj();
    }
    h
}

/// Closed-form `exp(−i H t)` of [`sideband_hamiltonian`].
pub fn ideal_propagator(
    space: &SpaceDescriptor,
    params: &SystemParams,
    x: f64,
    transition: TransitionType,
    phi: f64,
    t: f64,
) -> CMatrix {
    let mut u = crate::linalg::identity(space.dimension());
    let rot = C64::from_polar(1.0, -phi);
    let i = C64::new(0.0, 1.0);
    for (g, e, omega0) in sideband_pairs(space, params, x, transition) {
        let (c, s) = block(omega0 * rot, t);
        u[[g, g]] = c;
        u[[e, e]] = c;
        u[[e, g]] = -i * s;
        u[[g, e]] = -i * s.conj();
    }
    u
}

/// Applies every pulse as `Ū†(t_ν) U(t_ν) Ū(0)` in forward order.
pub fn ideal_replay(sequence: &PulseSequence, initial: &StateVector) -> Result<StateVector> {
    let space = *initial.space();
    let need = sequence.n_max() as usize;
    if space.cutoff1() < need || space.cutoff2() < need {
        return Err(Error::SpaceMismatch {
            expected: sequence.space().dimension(),
            actual: space.dimension(),
        });
    }
    let params = sequence.params();
    let x = sequence.x();
    let mut psi = initial.amplitudes().clone();
    for step in sequence.steps() {
        if step.duration == 0.0 {
            continue;
        }
        let pairs = sideband_pairs(&space, params, x, step.transition);
        psi *= &frame_phases(&space, params, x, step.omega_drive, step.phase, 0.0);
        apply_sideband(&mut psi, &pairs, step.phase, step.duration, false);
        psi *= &frame_phases(&space, params, x, step.omega_drive, step.phase, step.duration)
            .mapv(|z| z.conj());
    }
    StateVector::from_amplitudes(space, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dagger, expm, identity, max_abs_diff};
    use crate::synth::{synthesize, TargetState};

    fn setup() -> (SpaceDescriptor, SystemParams) {
        (SpaceDescriptor::new(5, 5), SystemParams::reference_device(0.4571))
    }

    #[test]
    fn hamiltonian_structure() {
        let (space, p) = setup();
        for t in TransitionType::ALL {
            let h = sideband_hamiltonian(&space, &p, 1.3, t, 0.8);
            assert!(max_abs_diff(&h, &dagger(&h)) < 1e-12 * p.omega_x);
        }
        let h = sideband_hamiltonian(&space, &p, 1.3, TransitionType::Carrier, 0.8);
        for (i, li) in space.labels().enumerate() {
            for (j, lj) in space.labels().enumerate() {
                if h[[i, j]].norm() > 0.0 {
                    assert_eq!((li.n1, li.n2), (lj.n1, lj.n2));
                    assert_ne!(li.qubit, lj.qubit);
                }
            }
        }
    }

    #[test]
    fn hamiltonian_element_matches_rabi() {
        let (space, p) = setup();
        let h = sideband_hamiltonian(&space, &p, 1.7571, TransitionType::RedOne, 0.4);
        let e = space.index(BasisLabel::new(0, 0, Qubit::Excited));
        let g = space.index(BasisLabel::new(1, 0, Qubit::Ground));
        let d = DriveConfig { x: 1.7571, omega_drive: 1.0, phi: 0.4 };
        let expected = rabi_amplitude(&p, &d, -1, -1, 0, 0, 0);
        assert!((h[[e, g]] - expected).norm() < 1e-9 * expected.norm());
    }

    #[test]
    fn propagator_matches_exponential() {
        let (space, p) = setup();
        for t in TransitionType::ALL {
            for &tau in &[0.0, 0.37e-9, 2.1e-9] {
                let h = sideband_hamiltonian(&space, &p, 1.0286, t, 2.2);
                let oracle = expm(&h.mapv(|z| z * C64::new(0.0, -tau)));
                let u = ideal_propagator(&space, &p, 1.0286, t, 2.2, tau);
                assert!(max_abs_diff(&u, &oracle) < 1e-9, "{t} {tau}");
            }
        }
        let u0 = ideal_propagator(&space, &p, 1.0286, TransitionType::Swap, 1.0, 0.0);
        assert!(max_abs_diff(&u0, &identity(space.dimension())) < 1e-15);
    }

    #[test]
    fn half_flop_transfers() {
        let (space, p) = setup();
        let pairs = sideband_pairs(&space, &p, 1.7571, TransitionType::RedTwo);
        let (g, e, om) = pairs[3];
        let t = std::f64::consts::FRAC_PI_2 / om.norm();
        let u = ideal_propagator(&space, &p, 1.7571, TransitionType::RedTwo, 0.3, t);
        assert!(u[[g, g]].norm() < 1e-12);
        assert!((u[[e, g]].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn apply_matches_matrix() {
        let (space, p) = setup();
        let mut v = CVector::from_iter((0..space.dimension()).map(|i| C64::new((i as f64).sin(), (i as f64 * 0.3).cos())));
        let u = ideal_propagator(&space, &p, 0.7857, TransitionType::Swap, 5.0, 1.3e-9);
        let expect = u.dot(&v);
        let expect_adj = dagger(&u).dot(&v);
        let pairs = sideband_pairs(&space, &p, 0.7857, TransitionType::Swap);
        let mut w = v.clone();
        apply_sideband(&mut v, &pairs, 5.0, 1.3e-9, false);
        apply_sideband(&mut w, &pairs, 5.0, 1.3e-9, true);
        assert!((&v - &expect).iter().all(|z| z.norm() < 1e-13));
        assert!((&w - &expect_adj).iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn replay_of_empty_sequence_is_identity() {
        let p = SystemParams::reference_device(0.3714);
        let seq = synthesize(&TargetState::basis(1, 0, 0).unwrap(), &p, 1.0).unwrap();
        let space = SpaceDescriptor::new(3, 3);
        let init = StateVector::basis(space, BasisLabel::new(1, 1, Qubit::Excited));
        assert_eq!(ideal_replay(&seq, &init).unwrap(), init);
    }

    #[test]
    fn noon_replay_in_larger_space() {
        let p = SystemParams::reference_device(0.3714);
        let target = TargetState::noon(2);
        let seq = synthesize(&target, &p, 1.7571).unwrap();
        let space = SpaceDescriptor::new(7, 7);
        let out = ideal_replay(&seq, &StateVector::vacuum(space)).unwrap();
        let f = target.to_state(space).unwrap().inner(&out).unwrap().norm();
        assert!(f >= 1.0 - 1e-9);
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }
}
