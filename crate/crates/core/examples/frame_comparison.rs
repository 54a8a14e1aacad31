// The same sequence simulated in the resummed displaced frame, the displaced
// frame with an explicit drive term, and the lab frame.

use photon_synth::couplings::SystemParams;
use photon_synth::evolve::{schrodinger_evolve, target_fidelity, Frame, IntegratorOptions};
use photon_synth::fock::StateVector;
use photon_synth::synth::{synthesize, TargetState};

pub fn run_example(cutoff: usize) -> Result<Vec<(Frame, f64)>, Box<dyn std::error::Error>> {
    let params = SystemParams::reference_device(0.4571);
    let target = TargetState::even(1);
    let sequence = synthesize(&target, &params, 1.0286)?;
    let mut out = Vec::new();
    for frame in [Frame::DisplacedDrive, Frame::Displaced, Frame::Lab] {
        let options = IntegratorOptions::default().with_cutoff(cutoff).with_frame(frame);
        let (state, _) = schrodinger_evolve(&StateVector::vacuum(options.space()), &sequence, &params, &options)?;
        out.push((frame, target_fidelity(&state, &target)?));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (frame, f) in run_example(6)? {
        println!("{frame:?}: {f:.6}");
    }
    Ok(())
}
