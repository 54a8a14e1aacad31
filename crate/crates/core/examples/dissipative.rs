// Master-equation run with qubit relaxation, dephasing and cavity loss. The
// default is a one-photon target on a small space so it finishes quickly;
// pass `2 7` for the two-photon state at the full cutoff.

use photon_synth::couplings::SystemParams;
use photon_synth::evolve::{lindblad_evolve, mixed_fidelity, DecayRates, IntegratorOptions};
use photon_synth::fock::{DensityMatrix, StateVector};
use photon_synth::synth::{synthesize, TargetState};

pub fn run_example(n_max: u32, cutoff: usize) -> Result<(f64, f64), Box<dyn std::error::Error>> {
    let params = SystemParams::reference_device(0.3714);
    let target = TargetState::even(n_max);
    let sequence = synthesize(&target, &params, 1.7571)?;
    let options = IntegratorOptions::default().with_cutoff(cutoff);
    let rho0 = DensityMatrix::from_pure(&StateVector::vacuum(options.space()));
    let (rho, report) = lindblad_evolve(&rho0, &sequence, &params, &DecayRates::reference(), &options)?;
    Ok((mixed_fidelity(&rho, &target.to_state(options.space())?)?, report.drift))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n_max = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let cutoff = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);
    let (fidelity, drift) = run_example(n_max, cutoff)?;
    println!("dissipative fidelity {fidelity:.4} (trace drift {drift:.1e})");
    Ok(())
}
