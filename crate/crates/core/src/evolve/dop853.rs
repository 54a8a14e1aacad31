//! Explicit Runge-Kutta 8(5,3) of Dormand and Prince with the step-size
//! controller used by common scientific libraries.
//!
//! State vectors are complex; a density matrix is integrated as its flattened
//! entries.

#![allow(clippy::excessive_precision)] // tableau digits kept as published

use crate::error::{Error, Result};
use crate::linalg::{CVector, C64};

const STAGES: usize = 12;

const C: [f64; STAGES] = [
    0.0,
    0.526001519587677318785587544488e-01,
    0.789002279381515978178381316732e-01,
    0.118350341907227396726757197510,
    0.281649658092772603273242802490,
    0.333333333333333333333333333333,
    0.25,
    0.307692307692307692307692307692,
    0.651282051282051282051282051282,
    0.6,
    0.857142857142857142857142857142,
    1.0,
];

#[rustfmt::skip]
const A: [[f64; STAGES]; STAGES] = [
    [0.0; STAGES],
    [5.26001519587677318785587544488e-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.97250569845378994544595329183e-2, 5.91751709536136983633785987549e-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.95875854768068491816892993775e-2, 0.0, 8.87627564304205475450678981324e-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.41365134159266685502369798665e-1, 0.0, -8.84549479328286085344864962717e-1, 9.24834003261792003115737966543e-1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.7037037037037037037037037037e-2, 0.0, 0.0, 1.70828608729473871279604482173e-1, 1.25467687566822425016691814123e-1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.7109375e-2, 0.0, 0.0, 1.70252211019544039314978060272e-1, 6.02165389804559606850219397283e-2, -1.7578125e-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.70920001185047927108779319836e-2, 0.0, 0.0, 1.70383925712239993810214054705e-1, 1.07262030446373284651809199168e-1, -1.53194377486244017527936158236e-2, 8.27378916381402288758473766002e-3, 0.0, 0.0, 0.0, 0.0, 0.0],
    [6.24110958716075717114429577812e-1, 0.0, 0.0, -3.36089262944694129406857109825, -8.68219346841726006818189891453e-1, 2.75920996994467083049415600797e1, 2.01540675504778934086186788979e1, -4.34898841810699588477366255144e1, 0.0, 0.0, 0.0, 0.0],
    [4.77662536438264365890433908527e-1, 0.0, 0.0, -2.48811461997166764192642586468, -5.90290826836842996371446475743e-1, 2.12300514481811942347288949897e1, 1.52792336328824235832596922938e1, -3.32882109689848629194453265587e1, -2.03312017085086261358222928593e-2, 0.0, 0.0, 0.0],
    [-9.3714243008598732571704021658e-1, 0.0, 0.0, 5.18637242884406370830023853209, 1.09143734899672957818500254654, -8.14978701074692612513997267357, -1.85200656599969598641566180701e1, 2.27394870993505042818970056734e1, 2.49360555267965238987089396762, -3.0467644718982195003823669022, 0.0, 0.0],
    [2.27331014751653820792359768449, 0.0, 0.0, -1.05344954667372501984066689879e1, -2.00087205822486249909675718444, -1.79589318631187989172765950534e1, 2.79488845294199600508499808837e1, -2.85899827713502369474065508674, -8.87285693353062954433549289258, 1.23605671757943030647266201528e1, 6.43392746015763530355970484046e-1, 0.0],
];

const B: [f64; STAGES] = [
    5.42937341165687622380535766363e-2,
    0.0,
    0.0,
    0.0,
    0.0,
    4.45031289275240888144113950566,
    1.89151789931450038304281599044,
    -5.8012039600105847814672114227,
    3.1116436695781989440891606237e-1,
    -1.52160949662516078556178806805e-1,
    2.01365400804030348374776537501e-1,
    4.47106157277725905176885569043e-2,
];

/// Fifth-order error weights; the thirteenth stage (FSAL) carries weight 0.
const E5: [f64; STAGES] = [
    0.1312004499419488073250102996e-1,
    0.0,
    0.0,
    0.0,
    0.0,
    -0.1225156446376204440720569753e+1,
    -0.4957589496572501915214079952,
    0.1664377182454986536961530415e+1,
    -0.3503288487499736816886487290,
    0.3341791187130174790297318841,
    0.8192320648511571246570742613e-1,
    -0.2235530786388629525884427845e-1,
];

/// Third-order error weights: `B` minus the embedded third-order solution.
fn e3() -> [f64; STAGES] {
    let mut e = B;
    e[0] -= 0.244094488188976377952755905512;
    e[8] -= 0.733846688281611857341361741547;
    e[11] -= 0.220588235294117647058823529412e-1;
    e
}

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dop853Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    /// Step budget per call.
    pub max_steps: usize,
}

impl Default for Dop853Options {
    fn default() -> Self {
        Self { rtol: 1e-8, atol: 1e-10, max_step: f64::INFINITY, max_steps: 5_000_000 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Dop853Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

impl std::ops::AddAssign for Dop853Stats {
    fn add_assign(&mut self, o: Self) {
        self.accepted += o.accepted;
        self.rejected += o.rejected;
        self.evaluations += o.evaluations;
    }
}

fn rms(v: impl Iterator<Item = f64>, n: usize) -> f64 {
    (v.map(|a| a * a).sum::<f64>() / n as f64).sqrt()
}

/// Integrates `dy/dt = f(t, y)` from `t0` to `t1` (`t1 ≥ t0`).
///
/// `observer` is called after every accepted step with the new time and state.
pub fn integrate<F>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: CVector,
    opts: &Dop853Options,
    mut observer: Option<&mut dyn FnMut(f64, &CVector)>,
) -> Result<(CVector, Dop853Stats)>
where
    F: FnMut(f64, &CVector, &mut CVector),
{
    let mut stats = Dop853Stats::default();
    if !(t1 >= t0) {
        return Err(Error::Integrator { t: t0, reason: format!("end time {t1} precedes start") });
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0 && opts.max_step > 0.0) {
        return Err(Error::Integrator { t: t0, reason: "tolerances and max step must be > 0".into() });
    }
    if t1 == t0 {
        return Ok((y0, stats));
    }
    let n = y0.len();
    let e3 = e3();
    let mut k: Vec<CVector> = (0..=STAGES).map(|_| CVector::zeros(n)).collect();
    let mut y = y0;
    let mut tmp = CVector::zeros(n);
    let mut y_new = CVector::zeros(n);

    f(t0, &y, &mut k[0]);
    stats.evaluations += 1;
    let mut h_abs = initial_step(&mut f, t0, &y, &k[0].clone(), opts, &mut stats).min(opts.max_step);
    let mut t = t0;

    while t < t1 {
        let min_step = 10.0 * (next_up(t) - t);
        let mut rejected = false;
        loop {
            if h_abs < min_step {
                return Err(Error::Integrator { t, reason: format!("step size {h_abs:e} below minimum") });
            }
            if stats.accepted + stats.rejected >= opts.max_steps {
                return Err(Error::Integrator { t, reason: "step budget exhausted".into() });
            }
            let mut h = h_abs.min(opts.max_step);
            let mut t_new = t + h;
            if t_new > t1 {
                t_new = t1;
                h = t_new - t;
            }

            for s in 1..STAGES {
                let (done, rest) = k.split_at_mut(s);
                tmp.assign(&y);
                for (j, kj) in done.iter().enumerate() {
                    if A[s][j] != 0.0 {
                        tmp.scaled_add(C64::new(h * A[s][j], 0.0), kj);
                    }
                }
                f(t + C[s] * h, &tmp, &mut rest[0]);
            }
            y_new.assign(&y);
            for (j, kj) in k.iter().enumerate().take(STAGES) {
                if B[j] != 0.0 {
                    y_new.scaled_add(C64::new(h * B[j], 0.0), kj);
                }
            }
            f(t + h, &y_new, &mut k[STAGES]);
            stats.evaluations += STAGES;

            let err = error_norm(&k, &y, &y_new, h, opts, &e3);
            if err < 1.0 {
                let mut factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    MAX_FACTOR.min(SAFETY * err.powf(ERROR_EXPONENT))
                };
                if rejected {
                    factor = factor.min(1.0);
                }
                h_abs = h * factor;
                t = t_new;
                std::mem::swap(&mut y, &mut y_new);
                k.swap(0, STAGES);
                stats.accepted += 1;
                if let Some(obs) = observer.as_mut() {
                    obs(t, &y);
                }
                break;
            }
            h_abs = h * MIN_FACTOR.max(SAFETY * err.powf(ERROR_EXPONENT));
            rejected = true;
            stats.rejected += 1;
        }
        if !y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Integrator { t, reason: "state became non-finite".into() });
        }
    }
    Ok((y, stats))
}

fn next_up(t: f64) -> f64 {
    if t == 0.0 {
        f64::from_bits(1)
    } else if t > 0.0 {
        f64::from_bits(t.to_bits() + 1)
    } else {
        f64::from_bits(t.to_bits() - 1)
    }
}

fn error_norm(k: &[CVector], y: &CVector, y_new: &CVector, h: f64, opts: &Dop853Options, e3: &[f64; STAGES]) -> f64 {
    let n = y.len();
    let mut s5 = 0.0;
    let mut s3 = 0.0;
    for i in 0..n {
        let scale = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
        let mut a5 = C64::new(0.0, 0.0);
        let mut a3 = C64::new(0.0, 0.0);
        for j in 0..STAGES {
            let kj = k[j][i];
            if E5[j] != 0.0 {
                a5 += kj * E5[j];
            }
            if e3[j] != 0.0 {
                a3 += kj * e3[j];
            }
        }
        s5 += (a5 / scale).norm_sqr();
        s3 += (a3 / scale).norm_sqr();
    }
    if s5 == 0.0 && s3 == 0.0 {
        return 0.0;
    }
    h.abs() * s5 / ((s5 + 0.01 * s3) * n as f64).sqrt()
}

fn initial_step<F>(f: &mut F, t0: f64, y0: &CVector, f0: &CVector, opts: &Dop853Options, stats: &mut Dop853Stats) -> f64
where
    F: FnMut(f64, &CVector, &mut CVector),
{
    let n = y0.len();
    let scale: Vec<f64> = y0.iter().map(|z| opts.atol + z.norm() * opts.rtol).collect();
    let d0 = rms(y0.iter().zip(&scale).map(|(z, s)| z.norm() / s), n);
    let d1 = rms(f0.iter().zip(&scale).map(|(z, s)| z.norm() / s), n);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let mut y1 = y0.clone();
    y1.scaled_add(C64::new(h0, 0.0), f0);
    let mut f1 = CVector::zeros(n);
    f(t0 + h0, &y1, &mut f1);
    stats.evaluations += 1;
    let d2 = rms(f1.iter().zip(f0.iter()).zip(&scale).map(|((a, b), s)| (a - b).norm() / s), n) / h0;
    let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 8.0)
    };
    (100.0 * h0).min(h1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tableau_consistency() {
        for s in 1..STAGES {
            let row: f64 = A[s].iter().sum();
            assert!((row - C[s]).abs() < 1e-14, "row {s}");
        }
        assert!((B.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exponential_decay() {
        let opts = Dop853Options { rtol: 1e-10, atol: 1e-12, ..Default::default() };
        let y0 = CVector::from_elem(1, C64::new(1.0, 0.0));
        let (y, stats) = integrate(|_, y, dy| dy.assign(&y.mapv(|z| -z)), 0.0, 3.0, y0, &opts, None).unwrap();
        assert!((y[0].re - (-3.0f64).exp()).abs() < 1e-10);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn rotation_preserves_norm() {
        // dy/dt = -i ω y
        let opts = Dop853Options { rtol: 1e-10, atol: 1e-12, ..Default::default() };
        let y0 = CVector::from_vec(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
        let w = 7.3;
        let (y, _) = integrate(
            |_, y, dy| dy.assign(&y.mapv(|z| z * C64::new(0.0, -w))),
            0.0,
            10.0,
            y0.clone(),
            &opts,
            None,
        )
        .unwrap();
        for i in 0..2 {
            let expected = y0[i] * C64::from_polar(1.0, -w * 10.0);
            assert!((y[i] - expected).norm() < 1e-8);
        }
    }

    #[test]
    fn time_dependent_rhs_and_observer() {
        // dy/dt = cos t, y(0) = 0
        let opts = Dop853Options { rtol: 1e-11, atol: 1e-13, max_step: 0.1, ..Default::default() };
        let mut times = Vec::new();
        let mut obs = |t: f64, _: &CVector| times.push(t);
        let (y, _) = integrate(
            |t, _, dy| dy[0] = C64::new(t.cos(), 0.0),
            0.0,
            2.0,
            CVector::zeros(1),
            &opts,
            Some(&mut obs),
        )
        .unwrap();
        assert!((y[0].re - 2f64.sin()).abs() < 1e-10);
        assert!(times.windows(2).all(|w| w[1] - w[0] <= 0.1 + 1e-15));
        assert_eq!(*times.last().unwrap(), 2.0);
    }

    #[test]
    fn rejects_bad_interval() {
        let opts = Dop853Options::default();
        assert!(integrate(|_, _, _| {}, 1.0, 0.0, CVector::zeros(1), &opts, None).is_err());
        let (y, s) = integrate(|_, _, _| {}, 1.0, 1.0, CVector::zeros(2), &opts, None).unwrap();
        assert_eq!(y.len(), 2);
        assert_eq!(s.accepted, 0);
    }
}
