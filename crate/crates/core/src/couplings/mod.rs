//! Device parameters, drive settings and sideband transition amplitudes.

mod special;

pub use special::{bessel_first_kind, laguerre, matrix_element_m};

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::units::{ghz_to_rad_per_s, rad_per_s_to_ghz, wrap_angle};

/// Bessel order of every sideband the synthesis uses.
pub const MAIN_ORDER: i32 = -1;

/// Static device parameters. Frequencies are angular, in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega_x: f64,
    pub omega_z: f64,
    pub omega_1: f64,
    pub omega_2: f64,
    pub eta_1: f64,
    pub eta_2: f64,
}

impl SystemParams {
    pub fn new(
        omega_x: f64,
        omega_z: f64,
        omega_1: f64,
        omega_2: f64,
        eta_1: f64,
        eta_2: f64,
    ) -> Result<Self> {
        let p = Self { omega_x, omega_z, omega_1, omega_2, eta_1, eta_2 };
        p.validate()?;
        Ok(p)
    }

    /// Device with ω_x/2π = 1.2, ω_z/2π = 19.5, ω_1/2π = 6, ω_2/2π = 8 GHz and
    /// equal Lamb-Dicke parameters.
    pub fn reference_device(eta: f64) -> Self {
        Self {
            omega_x: ghz_to_rad_per_s(1.2),
            omega_z: ghz_to_rad_per_s(19.5),
            omega_1: ghz_to_rad_per_s(6.0),
            omega_2: ghz_to_rad_per_s(8.0),
            eta_1: eta,
            eta_2: eta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        // ω_x = 0 is allowed: it switches the qubit drive off entirely.
        if !(self.omega_x >= 0.0 && self.omega_x.is_finite()) {
            return Err(Error::InvalidParams(format!("omega_x must be >= 0, got {}", self.omega_x)));
        }
        for (name, w) in [("omega_z", self.omega_z), ("omega_1", self.omega_1), ("omega_2", self.omega_2)] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {w}")));
            }
        }
        if self.omega_1 == self.omega_2 {
            return Err(Error::InvalidParams("cavity frequencies must differ".into()));
        }
        for (name, e) in [("eta_1", self.eta_1), ("eta_2", self.eta_2)] {
            if !(e >= 0.0 && e.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be >= 0, got {e}")));
            }
        }
        Ok(())
    }

    pub fn with_etas(mut self, eta_1: f64, eta_2: f64) -> Self {
        self.eta_1 = eta_1;
        self.eta_2 = eta_2;
        self
    }

    /// `g_l = η_l ω_l / 2`
    pub fn g1(&self) -> f64 {
        self.eta_1 * self.omega_1 / 2.0
    }

    pub fn g2(&self) -> f64 {
        self.eta_2 * self.omega_2 / 2.0
    }

    /// Mixing angle `arctan(ω_x/ω_z)`.
    pub fn theta(&self) -> f64 {
        (self.omega_x / self.omega_z).atan()
    }

    pub fn omega_q(&self) -> f64 {
        self.omega_x.hypot(self.omega_z)
    }

    pub fn to_config(&self) -> SystemConfig {
        SystemConfig {
            omega_x_ghz: rad_per_s_to_ghz(self.omega_x),
            omega_z_ghz: rad_per_s_to_ghz(self.omega_z),
            omega_1_ghz: rad_per_s_to_ghz(self.omega_1),
            omega_2_ghz: rad_per_s_to_ghz(self.omega_2),
            eta_1: self.eta_1,
            eta_2: self.eta_2,
        }
    }
}

/// [`SystemParams`] in file units (ω/2π in GHz).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub omega_x_ghz: f64,
    pub omega_z_ghz: f64,
    pub omega_1_ghz: f64,
    pub omega_2_ghz: f64,
    pub eta_1: f64,
    pub eta_2: f64,
}

impl SystemConfig {
    pub fn to_params(&self) -> Result<SystemParams> {
        SystemParams::new(
            ghz_to_rad_per_s(self.omega_x_ghz),
            ghz_to_rad_per_s(self.omega_z_ghz),
            ghz_to_rad_per_s(self.omega_1_ghz),
            ghz_to_rad_per_s(self.omega_2_ghz),
            self.eta_1,
            self.eta_2,
        )
    }
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemParams::reference_device(0.3714).to_config()
    }
}

/// Classical drive `Ω σ_z cos(ω̃ t + φ)` expressed through `x = 2Ω/ω̃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveConfig {
    pub x: f64,
    pub omega_drive: f64,
    pub phi: f64,
}

impl DriveConfig {
    /// Validates `x ≥ 0` and wraps `φ` into `[0, 2π)`.
    pub fn new(x: f64, omega_drive: f64, phi: f64) -> Result<Self> {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::InvalidDrive(format!("x must be >= 0, got {x}")));
        }
        if !omega_drive.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidDrive("drive frequency and phase must be finite".into()));
        }
        Ok(Self { x, omega_drive, phi: wrap_angle(phi) })
    }

    /// Drive amplitude `Ω = x ω̃ / 2`.
    pub fn amplitude(&self) -> f64 {
        self.x * self.omega_drive / 2.0
    }
}

/// The four sideband types the synthesis uses, labelled by `(k1, k2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransitionType {
    /// `(−1, 0)`: flip with one photon of mode 1.
    RedOne,
    /// `(0, −1)`: flip with one photon of mode 2.
    RedTwo,
    /// `(+1, −1)`: flip while swapping a photon from mode 2 into mode 1.
    Swap,
    /// `(0, 0)`: carrier.
    Carrier,
}

impl TransitionType {
    pub const ALL: [TransitionType; 4] =
        [TransitionType::RedOne, TransitionType::RedTwo, TransitionType::Swap, TransitionType::Carrier];

    pub fn from_k(k1: i32, k2: i32) -> Result<Self> {
        match (k1, k2) {
            (-1, 0) => Ok(Self::RedOne),
            (0, -1) => Ok(Self::RedTwo),
            (1, -1) => Ok(Self::Swap),
            (0, 0) => Ok(Self::Carrier),
            _ => Err(Error::UnsupportedTransition { k1, k2 }),
        }
    }

    pub fn k(self) -> (i32, i32) {
        match self {
            Self::RedOne => (-1, 0),
            Self::RedTwo => (0, -1),
            Self::Swap => (1, -1),
            Self::Carrier => (0, 0),
        }
    }

    pub fn k1(self) -> i32 {
        self.k().0
    }

    pub fn k2(self) -> i32 {
        self.k().1
    }
}

impl fmt::Display for TransitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::RedOne => "-1,0",
            Self::RedTwo => "0,-1",
            Self::Swap => "1,-1",
            Self::Carrier => "0,0",
        };
        f.write_str(s)
    }
}

/// `Ω_{N n1 n2}^{k1 k2} = (ω_x/2) J_N(x) M_{n1}^{k1}(η1) M_{n2}^{k2}(η2) e^{iNφ}`.
///
/// `n1`, `n2` are the lower Fock indices of each ladder pair.
pub fn rabi_amplitude(
    params: &SystemParams,
    drive: &DriveConfig,
    order: i32,
    k1: i32,
    k2: i32,
    n1: u32,
    n2: u32,
) -> C64 {
    let mag = params.omega_x / 2.0
        * bessel_first_kind(order, drive.x)
        * matrix_element_m(n1, k1, params.eta_1)
        * matrix_element_m(n2, k2, params.eta_2);
    C64::from_polar(1.0, f64::from(order) * drive.phi) * mag
}

/// `Δ = N ω̃ + ω_z + k1 ω1 + k2 ω2`
pub fn detuning(params: &SystemParams, omega_drive: f64, order: i32, k1: i32, k2: i32) -> f64 {
    f64::from(order) * omega_drive
        + params.omega_z
        + f64::from(k1) * params.omega_1
        + f64::from(k2) * params.omega_2
}

/// Drive frequency that makes the `N = −1` sideband `(k1, k2)` resonant.
pub fn resonant_drive_frequency(params: &SystemParams, k1: i32, k2: i32) -> Result<f64> {
    let w = params.omega_z + f64::from(k1) * params.omega_1 + f64::from(k2) * params.omega_2;
    if w <= 0.0 {
        return Err(Error::InvalidDrive(format!(
            "sideband ({k1},{k2}) needs a non-positive drive frequency {:.6} GHz",
            w / TAU * 1e-9
        )));
    }
    Ok(w)
}

/// Single-mode coefficient `J_N^{mn}(t)` of the normally ordered expansion.
pub fn j_mode_factor(
    params: &SystemParams,
    drive: &DriveConfig,
    order: i32,
    mode: crate::fock::Mode,
    m: u32,
    n: u32,
    t: f64,
) -> C64 {
    let (eta, omega) = match mode {
        crate::fock::Mode::One => (params.eta_1, params.omega_1),
        crate::fock::Mode::Two => (params.eta_2, params.omega_2),
    };
    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
    let mag = sign * bessel_first_kind(order, drive.x) * eta.powi((m + n) as i32)
        / (factorial(m) * factorial(n))
        * (-eta * eta / 2.0).exp();
    let phase = (f64::from(order) * drive.omega_drive
        + params.omega_z
        + (f64::from(m) - f64::from(n)) * omega)
        * t
        + f64::from(order) * drive.phi;
    C64::from_polar(1.0, phase) * mag
}

/// Two-mode coefficient `J_{N m1 n1}^{m2 n2}(t)` of the term
/// `a1†^{m1} a1^{n1} a2†^{m2} a2^{n2} σ_+` in the interaction picture.
#[allow(clippy::too_many_arguments)]
pub fn j_coupling_diagnostic(
    params: &SystemParams,
    drive: &DriveConfig,
    order: i32,
    m1: u32,
    n1: u32,
    m2: u32,
    n2: u32,
    t: f64,
) -> C64 {
    let sign = if (n1 + n2) % 2 == 1 { -1.0 } else { 1.0 };
    let mag = sign
        * (-(params.eta_1.powi(2) + params.eta_2.powi(2)) / 2.0).exp()
        * bessel_first_kind(order, drive.x)
        * params.eta_1.powi((m1 + n1) as i32)
        * params.eta_2.powi((m2 + n2) as i32)
        / (factorial(m1) * factorial(n1) * factorial(m2) * factorial(n2));
    let phase = (f64::from(order) * drive.omega_drive
        + params.omega_z
        + (f64::from(m1) - f64::from(n1)) * params.omega_1
        + (f64::from(m2) - f64::from(n2)) * params.omega_2)
        * t
        + f64::from(order) * drive.phi;
    C64::from_polar(1.0, phase) * mag
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Mode;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn drive(x: f64, phi: f64) -> DriveConfig {
        DriveConfig::new(x, ghz_to_rad_per_s(13.5), phi).unwrap()
    }

    #[test]
    fn params_validation() {
        let p = SystemParams::reference_device(0.3714);
        assert!(p.validate().is_ok());
        assert!(SystemParams::new(1.0, -1.0, 2.0, 3.0, 0.1, 0.1).is_err());
        assert!(SystemParams::new(1.0, 1.0, 2.0, 2.0, 0.1, 0.1).is_err());
        assert!(SystemParams::new(1.0, 1.0, 2.0, 3.0, -0.1, 0.1).is_err());
        assert_abs_diff_eq!(p.g1(), 0.3714 * p.omega_1 / 2.0);
        assert_abs_diff_eq!(p.omega_q(), (p.omega_x.powi(2) + p.omega_z.powi(2)).sqrt());
    }

    #[test]
    fn config_round_trip() {
        let p = SystemParams::reference_device(0.5);
        let q = p.to_config().to_params().unwrap();
        assert!((p.omega_z - q.omega_z).abs() < 1e-3);
        assert_eq!(p.eta_1, q.eta_1);
    }

    #[test]
    fn drive_phase_is_wrapped() {
        let d = DriveConfig::new(1.0, 1.0, -0.5).unwrap();
        assert!((d.phi - (TAU - 0.5)).abs() < 1e-15);
        assert!(DriveConfig::new(-1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn transition_set() {
        for t in TransitionType::ALL {
            assert_eq!(TransitionType::from_k(t.k1(), t.k2()).unwrap(), t);
        }
        assert!(TransitionType::from_k(1, 1).is_err());
        assert!(TransitionType::from_k(-1, -1).is_err());
    }

    #[test]
    fn detuning_arithmetic() {
        let p = SystemParams::reference_device(0.3714);
        let w = ghz_to_rad_per_s(13.5);
        assert_eq!(detuning(&p, w, 0, 0, 0), p.omega_z);
        assert!(detuning(&p, w, -1, -1, 0).abs() < 1e-3);
        assert_abs_diff_eq!(detuning(&p, w, 1, 1, -1), ghz_to_rad_per_s(31.0), epsilon = 1e-3);
    }

    #[test]
    fn resonant_frequencies() {
        let p = SystemParams::reference_device(0.3714);
        let cases = [((0, 0), 19.5), ((-1, 0), 13.5), ((1, -1), 17.5), ((0, -1), 11.5)];
        for ((k1, k2), ghz) in cases {
            let w = resonant_drive_frequency(&p, k1, k2).unwrap();
            assert_abs_diff_eq!(w, ghz_to_rad_per_s(ghz), epsilon = 1e-3);
            assert_abs_diff_eq!(detuning(&p, w, -1, k1, k2), 0.0, epsilon = 1e-3);
        }
        assert!(resonant_drive_frequency(&p, -4, 0).is_err());
    }

    #[test]
    fn rabi_vanishes_without_coupling() {
        let p = SystemParams::reference_device(0.0);
        let d = drive(1.7571, 0.3);
        for t in [TransitionType::RedOne, TransitionType::RedTwo, TransitionType::Swap] {
            assert_eq!(rabi_amplitude(&p, &d, -1, t.k1(), t.k2(), 0, 0).norm(), 0.0);
        }
        assert!(rabi_amplitude(&p, &d, -1, 0, 0, 0, 0).norm() > 0.0);
    }

    #[test]
    fn rabi_oracle_point() {
        let p = SystemParams::reference_device(0.3714);
        let d = drive(1.7571, 0.0);
        let omega = rabi_amplitude(&p, &d, -1, -1, 0, 0, 0);
        // J_1 from its series, M_0^{1}(η) = η e^{−η²/2}, M_0^0 = e^{−η²/2}
        let half: f64 = 1.7571 / 2.0;
        let mut j1 = 0.0;
        let mut term = half;
        for m in 0..40 {
            j1 += term;
            term *= -half * half / (f64::from(m + 1) * f64::from(m + 2));
        }
        let eta: f64 = 0.3714;
        let expected = p.omega_x / 2.0 * j1 * eta * (-eta * eta).exp();
        assert_abs_diff_eq!(omega.norm(), expected, epsilon = 1e-12 * expected);
    }

    proptest! {
        #[test]
        fn rabi_phase_behaviour(phi in 0.0f64..std::f64::consts::TAU, dphi in 0.0f64..3.0, n1 in 0u32..4, n2 in 0u32..4) {
            let p = SystemParams::reference_device(0.4571);
            let a = rabi_amplitude(&p, &drive(1.2, phi), -1, 1, -1, n1, n2);
            let b = rabi_amplitude(&p, &drive(1.2, phi + dphi), -1, 1, -1, n1, n2);
            prop_assert!((a.norm() - b.norm()).abs() < 1e-9 * a.norm().max(1.0));
            if a.norm() > 1e-3 {
                prop_assert!((b - a * C64::from_polar(1.0, -dphi)).norm() < 1e-6 * a.norm());
            }
        }

        #[test]
        fn rabi_linear_in_omega_x(scale in 0.1f64..10.0) {
            let p = SystemParams::reference_device(0.3714);
            let mut q = p;
            q.omega_x *= scale;
            let d = drive(0.7857, 0.4);
            let a = rabi_amplitude(&p, &d, -1, 0, -1, 1, 1).norm();
            let b = rabi_amplitude(&q, &d, -1, 0, -1, 1, 1).norm();
            prop_assert!((b - scale * a).abs() <= 1e-12 * b);
        }

        #[test]
        fn j_coupling_magnitude_is_time_independent(t in 0.0f64..1e-8, u in 0.0f64..1e-8) {
            let p = SystemParams::reference_device(0.5);
            let d = drive(1.0, 0.2);
            let a = j_coupling_diagnostic(&p, &d, -1, 2, 1, 0, 3, t).norm();
            let b = j_coupling_diagnostic(&p, &d, -1, 2, 1, 0, 3, u).norm();
            prop_assert!((a - b).abs() <= 1e-13 * a);
        }
    }

    #[test]
    fn j_coupling_ground_term() {
        let p = SystemParams::reference_device(0.3714).with_etas(0.3, 0.6);
        let d = drive(1.7571, 1.0);
        let v = j_coupling_diagnostic(&p, &d, -1, 0, 0, 0, 0, 2e-10).norm();
        let expected = bessel_first_kind(-1, 1.7571).abs() * (-(0.09 + 0.36) / 2.0f64).exp();
        assert_abs_diff_eq!(v, expected, epsilon = 1e-14);
    }

    #[test]
    fn j_coupling_factorizes() {
        let p = SystemParams::reference_device(0.3714).with_etas(0.45, 0.62);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let order = rng.gen_range(-3..=3);
            let x = rng.gen_range(0.1..2.5);
            let d = drive(x, rng.gen_range(0.0..TAU));
            let (m1, n1, m2, n2) = (rng.gen_range(0..5), rng.gen_range(0..5), rng.gen_range(0..5), rng.gen_range(0..5));
            let t = rng.gen_range(0.0..5e-9);
            let jn = bessel_first_kind(order, x).abs();
            if jn < 1e-6 {
                continue;
            }
            let direct = j_coupling_diagnostic(&p, &d, order, m1, n1, m2, n2, t).norm();
            let f1 = j_mode_factor(&p, &d, order, Mode::One, m1, n1, t).norm();
            let f2 = j_mode_factor(&p, &d, order, Mode::Two, m2, n2, t).norm();
            let factored = jn * (f1 / jn) * (f2 / jn);
            assert!((direct - factored).abs() <= 1e-12 * direct.max(1e-300), "{direct} vs {factored}");
        }
    }
}
