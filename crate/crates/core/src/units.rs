//! Conversions between the human units used in files (GHz, MHz, ns) and the
//! SI angular units used internally (rad/s, s).

use std::f64::consts::TAU;

/// `ω/2π` in GHz to angular frequency in rad/s.
pub fn ghz_to_rad_per_s(ghz: f64) -> f64 {
    ghz * 1e9 * TAU
}

pub fn rad_per_s_to_ghz(omega: f64) -> f64 {
    omega / (1e9 * TAU)
}

/// `γ/2π` in MHz to angular rate in rad/s.
pub fn mhz_to_rad_per_s(mhz: f64) -> f64 {
    mhz * 1e6 * TAU
}

pub fn rad_per_s_to_mhz(omega: f64) -> f64 {
    omega / (1e6 * TAU)
}

pub fn ns_to_s(ns: f64) -> f64 {
    ns * 1e-9
}

pub fn s_to_ns(s: f64) -> f64 {
    s * 1e9
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}
