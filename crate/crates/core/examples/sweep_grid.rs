// A small fidelity grid over drive strength and Lamb-Dicke parameter, run on
// several threads with deterministic row order.

use photon_synth::report::{cmd_sweep, RunConfig, SimMode, SweepBlock};

pub fn run_example(workers: usize) -> Result<String, Box<dyn std::error::Error>> {
    let mut config = RunConfig::from_json(
        r#"{ "drive": { "x": 1.0 }, "target": { "kind": "noon", "n_max": 2 },
             "simulation": { "fock_cutoff": 4 } }"#,
    )?;
    config.sweep = Some(SweepBlock { x_values: vec![1.0286, 2.0], eta_values: vec![0.3714, 0.5429] });
    Ok(cmd_sweep(&config, SimMode::Ideal, workers)?.to_csv())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", run_example(2)?);
    Ok(())
}
