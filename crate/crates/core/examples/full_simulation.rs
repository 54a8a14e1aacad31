// Evolve a compiled sequence under the full Hamiltonian, where the off-resonant
// drive orders and unwanted multiphoton terms lower the fidelity.

use photon_synth::couplings::SystemParams;
use photon_synth::evolve::{schrodinger_evolve, target_fidelity, IntegratorOptions};
use photon_synth::fock::StateVector;
use photon_synth::synth::{synthesize, TargetState};

pub fn run_example(cutoff: usize) -> Result<(f64, f64), Box<dyn std::error::Error>> {
    let params = SystemParams::reference_device(0.3714);
    let target = TargetState::even(2);
    let sequence = synthesize(&target, &params, 1.7571)?;
    let options = IntegratorOptions::default().with_cutoff(cutoff);
    let (state, report) = schrodinger_evolve(&StateVector::vacuum(options.space()), &sequence, &params, &options)?;
    Ok((target_fidelity(&state, &target)?, report.drift))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cutoff = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(7);
    let (fidelity, drift) = run_example(cutoff)?;
    println!("fidelity {fidelity:.4} (norm drift {drift:.1e})");
    Ok(())
}
