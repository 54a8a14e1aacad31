// Check a device against the parameter-selection conditions, then move the
// qubit onto an excluded frequency.

use photon_synth::couplings::SystemParams;
use photon_synth::units::ghz_to_rad_per_s;
use photon_synth::validate::{validate, ValidationOptions, ValidationReport};

pub fn run_example() -> Result<(ValidationReport, ValidationReport), Box<dyn std::error::Error>> {
    let params = SystemParams::reference_device(0.3714);
    let reference = validate(&params, 1.7571, 2, &ValidationOptions::default())?;
    let mut half = params;
    half.omega_z = ghz_to_rad_per_s(19.0);
    let excluded = validate(&half, 1.7571, 2, &ValidationOptions::default())?;
    Ok((reference, excluded))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (reference, excluded) = run_example()?;
    println!("{reference}\n\n{excluded}");
    Ok(())
}
