// Compile the evenly populated two-photon state into a pulse sequence and
// print the step table and the sequence file.

use photon_synth::couplings::SystemParams;
use photon_synth::report::step_table;
use photon_synth::synth::{synthesize, TargetState};

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let params = SystemParams::reference_device(0.3714);
    let sequence = synthesize(&TargetState::even(2), &params, 1.7571)?;
    let mut out = step_table(&sequence);
    out.push('\n');
    out.push_str(&sequence.to_json()?);
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{}", run_example()?);
    Ok(())
}
