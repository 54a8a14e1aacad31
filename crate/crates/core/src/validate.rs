//! Parameter-selection checks that keep the unwanted drive terms off resonance
//! and weak: commensurate cavity frequencies, the allowed fractional part of
//! `ω_z/ω_gcd`, Stark-shift bounds and multiphoton suppression.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::couplings::{bessel_first_kind, matrix_element_m, SystemParams, TransitionType, MAIN_ORDER};
use crate::error::{Error, Result};

/// Largest continued-fraction denominator accepted as commensurate.
pub const MAX_DENOMINATOR: u64 = 64;

/// Bessel orders of the unwanted, off-resonant drive terms.
pub const STARK_ORDERS: [i32; 4] = [0, 1, 2, -2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    /// rad/s
    pub omega_gcd: f64,
    pub l1: u64,
    pub l2: u64,
    pub p: u64,
    /// In `[0, 1)`.
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationOptions {
    pub rational_tolerance: f64,
    pub r_margin: f64,
    /// Allowed ratio of Stark shift to its detuning bound.
    pub stark_fraction: f64,
    pub lamb_dicke_threshold: f64,
    pub transitions: Vec<TransitionType>,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            rational_tolerance: 1e-9,
            r_margin: 0.05,
            stark_fraction: 0.1,
            lamb_dicke_threshold: 0.1,
            transitions: TransitionType::ALL.to_vec(),
        }
    }
}

/// One checked condition. `margin > 0` means it holds with room to spare,
/// except for the `r` check where `margin` is the distance itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub threshold: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub lattice: LatticeParams,
    pub entries: Vec<ReportEntry>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn new(lattice: LatticeParams, entries: Vec<ReportEntry>) -> Self {
        let pass = entries.iter().all(|e| e.pass);
        Self { lattice, entries, pass }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = &self.lattice;
        writeln!(
            f,
            "lattice: omega_gcd/2pi = {:.6} GHz, l1 = {}, l2 = {}, p = {}, r = {:.6}",
            crate::units::rad_per_s_to_ghz(l.omega_gcd),
            l.l1,
            l.l2,
            l.p,
            l.r
        )?;
        writeln!(f, "{:<28} {:>6} {:>13} {:>13} {:>13}", "condition", "result", "value", "threshold", "margin")?;
        for e in &self.entries {
            writeln!(
                f,
                "{:<28} {:>6} {:>13.4e} {:>13.4e} {:>13.4e}",
                e.name,
                if e.pass { "pass" } else { "FAIL" },
                e.value,
                e.threshold,
                e.margin
            )?;
        }
        write!(f, "overall: {}", if self.pass { "pass" } else { "FAIL" })
    }
}

/// Convergents `(p, q)` of `value > 0` with `q ≤ max_den`.
fn convergents(value: f64, max_den: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (1u64, value.floor() as u64);
    let (mut k0, mut k1) = (0u64, 1u64);
    out.push((h1, k1));
    let mut frac = value - value.floor();
    for _ in 0..64 {
        if frac < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor() as u64;
        frac = inv - inv.floor();
        let (h2, k2) = (a.saturating_mul(h1).saturating_add(h0), a.saturating_mul(k1).saturating_add(k0));
        if k2 > max_den {
            break;
        }
        out.push((h2, k2));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    out
}

/// Finds `ω_l = l_l ω_gcd` with coprime `l_l` and splits `ω_z/ω_gcd = p + r`.
pub fn derive_lattice(params: &SystemParams, rational_tolerance: f64) -> Result<LatticeParams> {
    let (w1, w2) = (params.omega_1, params.omega_2);
    if !(w1 > 0.0 && w2 > 0.0) {
        return Err(Error::InvalidParams("cavity frequencies must be > 0".into()));
    }
    let incommensurate = Error::Incommensurate { max_denominator: MAX_DENOMINATOR, tolerance: rational_tolerance };
    let (l1, l2) = convergents(w1 / w2, MAX_DENOMINATOR)
        .into_iter()
        .filter(|&(p, _)| p > 0)
        .find(|&(p, q)| {
            let gcd = w2 / q as f64;
            (w1 - p as f64 * gcd).abs() <= rational_tolerance * w1
        })
        .ok_or(incommensurate)?;
    let omega_gcd = w2 / l2 as f64;
    let ratio = params.omega_z / omega_gcd;
    let mut p = ratio.floor();
    let mut r = ratio - p;
    // a fractional part within rounding of 1 is an integer ratio
    if 1.0 - r < 1e-9 * ratio.max(1.0) {
        p += 1.0;
        r = 0.0;
    }
    Ok(LatticeParams { omega_gcd, l1, l2, p: p.max(0.0) as u64, r })
}

/// `r` must stay `margin` away from every multiple of 1/6.
pub fn check_r_exclusions(lattice: &LatticeParams, margin: f64) -> ReportEntry {
    let distance = (0..=6).map(|k| (lattice.r - k as f64 / 6.0).abs()).fold(f64::INFINITY, f64::min);
    ReportEntry { name: "r exclusion".into(), pass: distance > margin, value: distance, threshold: margin, margin: distance }
}

/// Lower bound on `|Δ_{N'}|` in units of `ω_gcd` for the off-resonant orders.
pub fn detuning_bound(order: i32, r: f64) -> f64 {
    let frac_bound = |m: f64| {
        let v = m * r;
        (v - v.floor()).min(v.ceil() - v)
    };
    match order {
        0 | -2 => r.min(1.0 - r),
        1 => frac_bound(2.0),
        2 => frac_bound(3.0),
        _ => f64::NAN,
    }
}

fn abs_rabi(params: &SystemParams, x: f64, order: i32, k: (i32, i32), n: (u32, u32)) -> f64 {
    (params.omega_x / 2.0
        * bessel_first_kind(order, x)
        * matrix_element_m(n.0, k.0, params.eta_1)
        * matrix_element_m(n.1, k.1, params.eta_2))
    .abs()
}

/// Weakest main amplitude of `transition` over pairs inside the working space.
fn weakest_main(params: &SystemParams, x: f64, n_max: u32, transition: TransitionType) -> Result<f64> {
    let (k1, k2) = transition.k();
    let mut weakest = f64::INFINITY;
    for n1 in 0..=n_max {
        for n2 in 0..=n_max - n1 {
            let (m1, m2) = (n1 as i32 + k1, n2 as i32 + k2);
            if m1 < 0 || m2 < 0 || (m1 + m2) as u32 + 1 > n_max {
                continue;
            }
            let lower = (n1.min(m1 as u32), n2.min(m2 as u32));
            weakest = weakest.min(abs_rabi(params, x, MAIN_ORDER, (k1, k2), lower));
        }
    }
    if !(weakest > 0.0) || !weakest.is_finite() {
        return Err(Error::VanishingMainAmplitude { k1, k2 });
    }
    Ok(weakest)
}

/// `max |Ω_{N'n'}^{k'}|² / min |Ω_{1̄n}^{k}|` against `fraction · bound(N') ω_gcd`
/// for every enabled transition and `N' ∈ {0, 1, 2, −2}`.
pub fn check_stark_conditions(
    params: &SystemParams,
    lattice: &LatticeParams,
    x: f64,
    n_max: u32,
    transitions: &[TransitionType],
    fraction: f64,
) -> Result<Vec<ReportEntry>> {
    let mut entries = Vec::new();
    for &transition in transitions {
        let main = weakest_main(params, x, n_max, transition)?;
        for order in STARK_ORDERS {
            let mut strongest: f64 = 0.0;
            for n1 in 0..=n_max {
                for n2 in 0..=n_max - n1 {
                    for k1 in -1..=1 {
                        for k2 in -1..=1 {
                            strongest = strongest.max(abs_rabi(params, x, order, (k1, k2), (n1, n2)));
                        }
                    }
                }
            }
            let ratio = strongest * strongest / main;
            let threshold = fraction * detuning_bound(order, lattice.r) * lattice.omega_gcd;
            entries.push(ReportEntry {
                name: format!("stark J{order} on {transition}"),
                pass: ratio <= threshold,
                value: ratio,
                threshold,
                margin: threshold - ratio,
            });
        }
    }
    Ok(entries)
}

/// `η1^{l2} η2^{l1}` must not exceed `threshold`.
pub fn check_lamb_dicke_suppression(params: &SystemParams, lattice: &LatticeParams, threshold: f64) -> ReportEntry {
    let value = params.eta_1.abs().powf(lattice.l2 as f64) * params.eta_2.abs().powf(lattice.l1 as f64);
    ReportEntry {
        name: "lamb-dicke suppression".into(),
        pass: value <= threshold,
        value,
        threshold,
        margin: threshold - value,
    }
}

/// Runs every check for a device, drive amplitude and photon budget.
pub fn validate(params: &SystemParams, x: f64, n_max: u32, options: &ValidationOptions) -> Result<ValidationReport> {
    params.validate()?;
    if n_max == 0 {
        return Err(Error::InvalidPhotonNumber(0));
    }
    let lattice = derive_lattice(params, options.rational_tolerance)?;
    let mut entries = vec![check_r_exclusions(&lattice, options.r_margin)];
    entries.extend(check_stark_conditions(params, &lattice, x, n_max, &options.transitions, options.stark_fraction)?);
    entries.push(check_lamb_dicke_suppression(params, &lattice, options.lamb_dicke_threshold));
    Ok(ValidationReport::new(lattice, entries))
}
