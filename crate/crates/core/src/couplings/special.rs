//! Bessel functions of the first kind, generalized Laguerre polynomials and
//! the displaced-oscillator matrix elements built from them.

/// Generalized Laguerre polynomial `L_n^{(k)}(z)`.
///
/// Summed from the `l = 0` term `C(n+k, n)` using the term ratio
/// `t_{l+1}/t_l = −(n − l) z / ((l + k + 1)(l + 1))`, so no factorial is formed.
pub fn laguerre(n: u32, k: u32, z: f64) -> f64 {
    let mut term = binomial(n + k, n);
    let mut sum = term;
    for l in 0..n {
        let lf = f64::from(l);
        term *= -(f64::from(n) - lf) * z / ((lf + f64::from(k) + 1.0) * (lf + 1.0));
        sum += term;
    }
    sum
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Ascending power series of `J_n(x)` for `n ≥ 0`.
fn bessel_series(n: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = (1..=n).fold(1.0, |acc, j| acc * half / f64::from(j));
    let mut sum = term;
    let q = -half * half;
    for m in 1..200u32 {
        term *= q / (f64::from(m) * f64::from(m + n));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Miller's backward recurrence for `J_n(x)`, `n ≥ 0`, `x > 0`, normalized by
/// `J_0 + 2 Σ J_{2k} = 1`.
fn bessel_miller(n: u32, x: f64) -> f64 {
    let top = n.max(x.ceil() as u32);
    let mut start = top + 20 + (40.0 * f64::from(top)).sqrt() as u32;
    start += start % 2;
    let (mut j_next, mut j) = (0.0_f64, 1e-300_f64);
    let mut norm = 0.0;
    let mut result = 0.0;
    for m in (1..=start).rev() {
        let j_prev = 2.0 * f64::from(m) / x * j - j_next;
        j_next = j;
        j = j_prev;
        if j.abs() > 1e250 {
            j *= 1e-250;
            j_next *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
        // j now holds J_{m-1}
        if m - 1 == n {
            result = j;
        }
        if (m - 1) % 2 == 0 && m - 1 > 0 {
            norm += 2.0 * j;
        }
    }
    norm += j;
    result / norm
}

/// Bessel function of the first kind `J_N(x)` for any integer order.
pub fn bessel_first_kind(order: i32, x: f64) -> f64 {
    let n = order.unsigned_abs();
    let mut sign = if order < 0 && n % 2 == 1 { -1.0 } else { 1.0 };
    if x < 0.0 && n % 2 == 1 {
        sign = -sign;
    }
    let ax = x.abs();
    if ax == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let v = if ax < 1.0 { bessel_series(n, ax) } else { bessel_miller(n, ax) };
    sign * v
}

/// `M_n^k(η) = (−1)^{k ε_k} η^{|k|} e^{−η²/2} √(n!/(n+|k|)!) L_n^{(|k|)}(η²)`,
/// with `ε_k = 1` for `k < 0`.
///
/// This equals `⟨n+k| e^{η(a†−a)} |n⟩` for `k ≥ 0` and `⟨n| e^{η(a†−a)} |n+|k|⟩`
/// for `k < 0`, i.e. `n` is always the lower Fock index.
pub fn matrix_element_m(n: u32, k: i32, eta: f64) -> f64 {
    let ak = k.unsigned_abs();
    let sign = if k < 0 && ak % 2 == 1 { -1.0 } else { 1.0 };
    let ratio = (1..=ak).fold(1.0, |acc, j| acc / f64::from(n + j)).sqrt();
    sign * eta.powi(ak as i32) * (-eta * eta / 2.0).exp() * ratio * laguerre(n, ak, eta * eta)
}
