// NOON targets use the short plan: 4N − 1 pulses against 2N² − N + 2 for a
// general state of the same photon budget.

use photon_synth::couplings::SystemParams;
use photon_synth::report::step_table;
use photon_synth::synth::{step_count, synthesize, PlanKind, TargetState};

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let mut out = String::from(" N  general  noon\n");
    for n in 1..=5 {
        out.push_str(&format!("{n:>2}  {:>7}  {:>4}\n", step_count(n, PlanKind::General), step_count(n, PlanKind::Noon)));
    }
    let params = SystemParams::reference_device(0.5429);
    let sequence = synthesize(&TargetState::noon(2), &params, 2.0)?;
    out.push_str(&step_table(&sequence));
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{}", run_example()?);
    Ok(())
}
