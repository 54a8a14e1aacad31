// Compile an arbitrary complex target and replay it with the ideal sideband
// propagators. The replayed state reproduces the target to machine precision.

use photon_synth::couplings::SystemParams;
use photon_synth::evolve::{ideal_replay, target_fidelity};
use photon_synth::fock::StateVector;
use photon_synth::linalg::C64;
use photon_synth::synth::{synthesize, TargetState};

pub fn run_example() -> Result<f64, Box<dyn std::error::Error>> {
    let amplitudes = [
        ((0, 0), C64::new(0.2, 0.1)),
        ((1, 0), C64::new(-0.3, 0.4)),
        ((0, 1), C64::new(0.0, -0.5)),
        ((2, 1), C64::new(0.6, 0.2)),
        ((0, 3), C64::new(0.1, -0.7)),
    ];
    let (target, _) = TargetState::normalized(3, amplitudes)?;
    let params = SystemParams::reference_device(0.4571);
    let sequence = synthesize(&target, &params, 1.2714)?;
    let state = ideal_replay(&sequence, &StateVector::vacuum(sequence.space()))?;
    Ok(target_fidelity(&state, &target)?)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("ideal replay fidelity: {:.15}", run_example()?);
    Ok(())
}
