// Bessel functions, generalized Laguerre polynomials and the displacement
// matrix elements built from them.

use photon_synth::couplings::{bessel_first_kind, laguerre, matrix_element_m};

pub fn run_example() -> String {
    let mut out = String::new();
    for x in [0.3, 1.0286, 1.7571, 2.0] {
        let j: Vec<String> = (-2..=2).map(|n| format!("{:+.6}", bessel_first_kind(n, x))).collect();
        out.push_str(&format!("J_(-2..2)({x}) = {}\n", j.join(" ")));
    }
    out.push_str(&format!("L_3^(2)(0.5) = {:.10}\n", laguerre(3, 2, 0.5)));
    for (n, k) in [(0, 1), (1, -1), (2, 1), (1, 0)] {
        out.push_str(&format!("M_{n}^{k}(0.3714) = {:+.10}\n", matrix_element_m(n, k, 0.3714)));
    }
    out
}

#[allow(dead_code)]
fn main() {
    print!("{}", run_example());
}
