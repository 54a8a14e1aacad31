//! Drive-phase equation `rhs ≡ x sin(ω̃t + φ) + ω̃t + φ − sπ + offset (mod 2π)`.
//!
//! `arg Ω(φ) = −φ + sπ` for the `N = −1` sideband, so the unknown appears both
//! linearly and inside the sine. For `x ≤ 1` the map is monotone and the root is
//! unique; for larger `x` there can be several.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SCAN_POINTS: usize = 4096;

/// Which root to keep when the phase equation has several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseBranch {
    /// Smallest root in `[0, 2π)`.
    #[default]
    Smallest,
    /// Largest root in `[0, 2π)`.
    Largest,
}

/// Wrapped residual in `(−π, π]`.
pub fn phase_residual(phi: f64, rhs: f64, x: f64, omega_t: f64, offset: f64, s: u8) -> f64 {
    let wt = omega_t.rem_euclid(TAU);
    let raw = x * (wt + phi).sin() + wt + phi - f64::from(s) * PI + offset - rhs;
    let r = raw.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// All roots in `[0, 2π)`, ascending.
pub fn phase_roots(rhs: f64, x: f64, omega_t: f64, offset: f64, s: u8) -> Vec<f64> {
    let f = |p: f64| phase_residual(p, rhs, x, omega_t, offset, s);
    let h = TAU / SCAN_POINTS as f64;
    let mut roots = Vec::new();
    let mut prev = f(0.0);
    for i in 0..SCAN_POINTS {
        let (lo0, hi0) = (h * i as f64, h * (i + 1) as f64);
        let next = f(hi0);
        if prev == 0.0 {
            roots.push(lo0);
        } else if prev.signum() != next.signum() && next != 0.0 && (next - prev).abs() < PI {
            let (mut lo, mut hi) = (lo0, hi0);
            let neg_low = prev < 0.0;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if (f(mid) < 0.0) == neg_low {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= f64::EPSILON * 4.0 {
                    break;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = next;
    }
    roots
}

/// Solves for the drive phase, returning a value in `[0, 2π)`.
///
/// `offset` is `−π/2` when the step empties the ground component and `+π/2`
/// when it empties the excited one; `s = 1` when `Ω` at `φ = 0` is negative.
pub fn solve_phase(
    rhs: f64,
    x: f64,
    omega_t: f64,
    offset: f64,
    s: u8,
    branch: PhaseBranch,
) -> Result<f64> {
    let roots = phase_roots(rhs, x, omega_t, offset, s);
    let pick = match branch {
        PhaseBranch::Smallest => roots.first(),
        PhaseBranch::Largest => roots.last(),
    };
    pick.copied().map(|p| p.rem_euclid(TAU)).ok_or(Error::PhaseNotFound { rhs, x })
}
