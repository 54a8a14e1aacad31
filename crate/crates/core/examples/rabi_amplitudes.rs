// Rabi amplitudes of the four sideband types over the lowest Fock pairs.

use photon_synth::couplings::{rabi_amplitude, resonant_drive_frequency, DriveConfig, SystemParams, TransitionType, MAIN_ORDER};
use photon_synth::units::rad_per_s_to_ghz;

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let params = SystemParams::reference_device(0.3714);
    let mut out = String::from("type    drive GHz   n1 n2   |Omega|/2pi MHz\n");
    for t in TransitionType::ALL {
        let (k1, k2) = t.k();
        let wd = resonant_drive_frequency(&params, k1, k2)?;
        let drive = DriveConfig::new(1.7571, wd, 0.0)?;
        for (n1, n2) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let omega = rabi_amplitude(&params, &drive, MAIN_ORDER, k1, k2, n1, n2);
            out.push_str(&format!(
                "{:<6} {:>10.3}   {n1:>2} {n2:>2}   {:>12.3}\n",
                t.to_string(),
                rad_per_s_to_ghz(wd),
                rad_per_s_to_ghz(omega.norm()) * 1e3
            ));
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example()?);
    Ok(())
}
