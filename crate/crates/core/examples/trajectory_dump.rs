// Sample populations along a full-model run and write them as CSV.

use photon_synth::couplings::SystemParams;
use photon_synth::evolve::{schrodinger_evolve_observed, IntegratorOptions, Trajectory};
use photon_synth::fock::StateVector;
use photon_synth::synth::{synthesize, TargetState};

pub fn run_example(path: &std::path::Path) -> Result<usize, Box<dyn std::error::Error>> {
    let params = SystemParams::reference_device(0.3714);
    let sequence = synthesize(&TargetState::noon(1), &params, 1.7571)?;
    let options = IntegratorOptions::default().with_cutoff(3);
    let mut trajectory = Trajectory::new(options.space(), 0.05e-9);
    let mut observe = |t: f64, s: &StateVector| trajectory.record_state(t, s);
    schrodinger_evolve_observed(&StateVector::vacuum(options.space()), &sequence, &params, &options, Some(&mut observe))?;
    trajectory.save(path)?;
    Ok(trajectory.len())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "trajectory.csv".into());
    let rows = run_example(path.as_ref())?;
    println!("wrote {rows} rows to {path}");
    Ok(())
}
