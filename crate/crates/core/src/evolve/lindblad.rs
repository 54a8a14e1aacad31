use ndarray::Zip;

use super::model::{Frame, FullModel};
use super::schrodinger::step_frames;
use super::{check_space, dop853, warn_edge, DecayRates, EvolutionReport, IntegratorOptions};
use crate::couplings::SystemParams;
use crate::error::{Error, Result};
use crate::fock::{displacement_unitary, DensityMatrix, Qubit, SpaceDescriptor};
use crate::linalg::{dagger, CMatrix, CVector, C64, ZERO};
use crate::synth::PulseSequence;

/// Trace drift and negativity above which a warning is logged.
const TRACE_WARNING: f64 = 1e-6;
const NEGATIVITY_WARNING: f64 = -1e-6;

/// Index map of `a_l` on the full basis: `(a ρ a†)_ij = f_i f_j ρ[up_i, up_j]`.
struct Ladder {
    up: Vec<Option<usize>>,
    down: Vec<Option<usize>>,
    factor: Vec<f64>,
    number: Vec<f64>,
    /// +1 on ground labels, −1 on excited ones.
    sign: Vec<f64>,
}

impl Ladder {
    fn new(space: &SpaceDescriptor, mode: usize) -> Self {
        let dim = space.dimension();
        let mut up = Vec::with_capacity(dim);
        let mut factor = Vec::with_capacity(dim);
        let mut number = Vec::with_capacity(dim);
        let mut down = Vec::with_capacity(dim);
        let mut sign = Vec::with_capacity(dim);
        for i in 0..dim {
            let l = space.label(i);
            let (n1, n2) = if mode == 0 { (l.n1 + 1, l.n2) } else { (l.n1, l.n2 + 1) };
            let n = if mode == 0 { l.n1 } else { l.n2 };
            up.push(space.try_index(n1, n2, l.qubit));
            down.push(match (mode, n) {
                (_, 0) => None,
                (0, _) => space.try_index(l.n1 - 1, l.n2, l.qubit),
                _ => space.try_index(l.n1, l.n2 - 1, l.qubit),
            });
            factor.push(((n + 1) as f64).sqrt());
            number.push(n as f64);
            sign.push(if l.qubit == Qubit::Ground { 1.0 } else { -1.0 });
        }
        Self { up, down, factor, number, sign }
    }

    /// `out += κ D[L]ρ` for `L = c a + s` with `s = ±η/2` on the ground/excited
    /// block and `|c| = 1`, expanded so only index maps of `a` are needed.
    fn dissipate_shifted(
        &self,
        kappa: f64,
        c: C64,
        eta: f64,
        rho: &ndarray::ArrayView2<C64>,
        out: &mut ndarray::ArrayViewMut2<C64>,
    ) {
        self.dissipate(kappa, rho, out);
        let dim = self.up.len();
        // x = c a ρ, y = c̄ a† ρ
        let mut x = CMatrix::zeros((dim, dim));
        let mut y = CMatrix::zeros((dim, dim));
        for i in 0..dim {
            if let Some(u) = self.up[i] {
                x.row_mut(i).scaled_add(c * self.factor[i], &rho.row(u));
            }
            if let Some(d) = self.down[i] {
                y.row_mut(i).scaled_add(c.conj() * self.number[i].sqrt(), &rho.row(d));
            }
        }
        let s: Vec<f64> = self.sign.iter().map(|v| v * eta / 2.0).collect();
        for i in 0..dim {
            for j in 0..dim {
                let ds = s[i] - s[j];
                let mut v = -0.5 * ds * ds * rho[[i, j]];
                v += x[[i, j]] * s[j] + x[[j, i]].conj() * s[i];
                v -= 0.5 * (s[i] * (y[[i, j]] + x[[i, j]]) + s[j] * (y[[j, i]] + x[[j, i]]).conj());
                out[[i, j]] += kappa * v;
            }
        }
    }

    /// `out += κ (a ρ a† − ½{a†a, ρ})`; frame phases of `a` cancel here.
    fn dissipate(&self, kappa: f64, rho: &ndarray::ArrayView2<C64>, out: &mut ndarray::ArrayViewMut2<C64>) {
        let dim = self.up.len();
        for i in 0..dim {
            let mut row = out.row_mut(i);
            let row = row.as_slice_mut().expect("row-major state");
            let src = rho.row(i);
            let src = src.as_slice().expect("row-major state");
            for j in 0..dim {
                row[j] -= 0.5 * kappa * (self.number[i] + self.number[j]) * src[j];
            }
            if let Some(ui) = self.up[i] {
                let up = rho.row(ui);
                let up = up.as_slice().expect("row-major state");
                let fi = kappa * self.factor[i];
                for j in 0..dim {
                    if let Some(uj) = self.up[j] {
                        row[j] += fi * self.factor[j] * up[uj];
                    }
                }
            }
        }
    }
}

/// `out += γ (L ρ L† − ½{L†L, ρ})` using only products of `L` from the left.
fn dissipate_op(
    gamma: f64,
    l: &super::model::BlockOp,
    rho: &ndarray::ArrayView2<C64>,
    out: &mut ndarray::ArrayViewMut2<C64>,
) {
    let x = l.left_mul(rho.view());
    let xd = dagger(&x);
    let y = l.left_mul(xd.view());
    let w = l.adjoint().left_mul(x.view());
    let dim = x.nrows();
    for i in 0..dim {
        for j in 0..dim {
            let sym_y = 0.5 * (y[[i, j]] + y[[j, i]].conj());
            let sym_w = 0.5 * (w[[i, j]] + w[[j, i]].conj());
            out[[i, j]] += gamma * (sym_y - sym_w);
        }
    }
}

/// Superoperator of qubit-only jumps `L = l ⊗ 1` on the 2×2 block structure:
/// `(Σ γ D[L]ρ)_ac = Σ_bd T[a][c][b][d] ρ_bd`.
type QubitTensor = [[[[C64; 2]; 2]; 2]; 2];

fn add_qubit_jump(t: &mut QubitTensor, gamma: f64, l: &[[C64; 2]; 2]) {
    let mut ldl = [[ZERO; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            ldl[a][b] = (0..2).map(|c| l[c][a].conj() * l[c][b]).sum();
        }
    }
    for a in 0..2 {
        for c in 0..2 {
            for b in 0..2 {
                for d in 0..2 {
                    let mut v = l[a][b] * l[c][d].conj();
                    if c == d {
                        v -= 0.5 * ldl[a][b];
                    }
                    if a == b {
                        v -= 0.5 * ldl[d][c];
                    }
                    t[a][c][b][d] += gamma * v;
                }
            }
        }
    }
}

/// `out += T ρ` with blocks of size `f`; both matrices are row-major `2f × 2f`.
fn apply_qubit_tensor(t: &QubitTensor, f: usize, rho: &[C64], out: &mut [C64]) {
    let dim = 2 * f;
    for a in 0..2 {
        for i in 0..f {
            let row = &mut out[(a * f + i) * dim..(a * f + i + 1) * dim];
            for b in 0..2 {
                let src = &rho[(b * f + i) * dim..(b * f + i + 1) * dim];
                for c in 0..2 {
                    for d in 0..2 {
                        let w = t[a][c][b][d];
                        if w == ZERO {
                            continue;
                        }
                        for (o, r) in row[c * f..(c + 1) * f].iter_mut().zip(&src[d * f..(d + 1) * f]) {
                            *o += w * r;
                        }
                    }
                }
            }
        }
    }
}

/// Qubit operators `|g̃⟩⟨ẽ|`, `|ẽ⟩⟨ẽ|`, `|g̃⟩⟨g̃|` in the `(g, e)` basis with
/// `|ẽ⟩ = sin(θ/2)|g⟩ + cos(θ/2)|e⟩`, `|g̃⟩ = cos(θ/2)|g⟩ − sin(θ/2)|e⟩`.
pub(crate) fn eigenbasis_jumps(theta: f64) -> [[[f64; 2]; 2]; 3] {
    let (s, c) = (theta / 2.0).sin_cos();
    let e = [s, c];
    let g = [c, -s];
    let outer = |a: [f64; 2], b: [f64; 2]| [[a[0] * b[0], a[0] * b[1]], [a[1] * b[0], a[1] * b[1]]];
    [outer(g, e), outer(e, e), outer(g, g)]
}

fn flatten(m: CMatrix) -> CVector {
    let n = m.len();
    m.into_shape_with_order(n).expect("contiguous matrix")
}

fn unflatten(v: CVector, dim: usize) -> CMatrix {
    v.into_shape_with_order((dim, dim)).expect("square state")
}

/// Conjugates `ρ` by the diagonal unitary `u`.
fn rotate(rho: &mut CMatrix, u: &CVector) {
    Zip::indexed(rho).for_each(|(i, j), r| *r *= u[i] * u[j].conj());
}

/// Evolves `initial` (displaced picture) under the master equation.
pub fn lindblad_evolve(
    initial: &DensityMatrix,
    sequence: &PulseSequence,
    params: &SystemParams,
    rates: &DecayRates,
    options: &IntegratorOptions,
) -> Result<(DensityMatrix, EvolutionReport)> {
    lindblad_evolve_observed(initial, sequence, params, rates, options, None)
}

/// As [`lindblad_evolve`], calling `observer(global_time, ρ)` after every
/// accepted integrator step. Observed states are in the simulated frame.
pub fn lindblad_evolve_observed(
    initial: &DensityMatrix,
    sequence: &PulseSequence,
    params: &SystemParams,
    rates: &DecayRates,
    options: &IntegratorOptions,
    mut observer: Option<&mut dyn FnMut(f64, &DensityMatrix)>,
) -> Result<(DensityMatrix, EvolutionReport)> {
    options.validate()?;
    params.validate()?;
    rates.validate()?;
    let space = *initial.space();
    check_space(&space, sequence)?;
    let dim = space.dimension();
    let f = space.fock_dim();
    let model = FullModel::new(&space, params, sequence.x(), options.frame);
    let ode = options.dop853(sequence);
    let displace_jumps = options.transform_jumps && options.frame != Frame::Lab;
    let mut report = EvolutionReport::default();

    let [q_eg, q_ee, q_gg] = eigenbasis_jumps(params.theta());
    let qubit_jumps: Vec<(f64, [[f64; 2]; 2])> =
        [(rates.gamma_eg, q_eg), (rates.gamma_ee, q_ee), (rates.gamma_gg, q_gg)]
            .into_iter()
            .filter(|(g, _)| *g > 0.0)
            .collect();
    let cavities: Vec<(usize, f64)> =
        [(0, rates.kappa_1), (1, rates.kappa_2)].into_iter().filter(|(_, k)| *k > 0.0).collect();
    let ladders = [Ladder::new(&space, 0), Ladder::new(&space, 1)];

    let disp = if options.frame == Frame::Lab {
        Some(displacement_unitary(&space, params.eta_1, params.eta_2)?)
    } else {
        None
    };
    let mut rho = match &disp {
        Some(d) => dagger(d).dot(initial.entries()).dot(d),
        None => initial.entries().clone(),
    };

    let mut elapsed = 0.0;
    for step in sequence.steps() {
        if step.duration == 0.0 {
            continue;
        }
        let (wd, phi, t) = (step.omega_drive, step.phase, step.duration);
        let (entry, exit) = step_frames(options.frame, &space, params, sequence.x(), wd, phi, t);
        if let Some(e) = entry {
            rotate(&mut rho, &e);
        }
        let rhs = |tau: f64, y: &CVector, dy: &mut CVector| {
            let r = y.view().into_shape_with_order((dim, dim)).expect("square state");
            let mut out = dy.view_mut().into_shape_with_order((dim, dim)).expect("square state");
            let k = model.hamiltonian(wd, phi, tau).left_mul(r.view());
            // −i[H, ρ] = −i(Hρ − (Hρ)†) for Hermitian ρ
            for i in 0..dim {
                for j in 0..dim {
                    let d = k[[i, j]] - k[[j, i]].conj();
                    out[[i, j]] = C64::new(d.im, -d.re);
                }
            }
            if displace_jumps {
                for (gamma, q) in &qubit_jumps {
                    dissipate_op(*gamma, &model.qubit_jump(*q, wd, phi, tau, true), &r, &mut out);
                }
            } else if !qubit_jumps.is_empty() {
                let mut t = QubitTensor::default();
                for (gamma, q) in &qubit_jumps {
                    add_qubit_jump(&mut t, *gamma, &model.qubit_jump_scalars(*q, wd, phi, tau));
                }
                let (src, dst) = (r.as_slice().expect("flat state"), out.as_slice_mut().expect("flat state"));
                apply_qubit_tensor(&t, f, src, dst);
            }
            for &(mode, kappa) in &cavities {
                if displace_jumps {
                    let (eta, w) = if mode == 0 { (params.eta_1, params.omega_1) } else { (params.eta_2, params.omega_2) };
                    ladders[mode].dissipate_shifted(kappa, C64::from_polar(1.0, -w * tau), eta, &r, &mut out);
                } else {
                    ladders[mode].dissipate(kappa, &r, &mut out);
                }
            }
        };
        let y0 = flatten(rho);
        let (out, stats) = match observer.as_mut() {
            Some(obs) => {
                let mut wrapped = |tau: f64, y: &CVector| {
                    if let Ok(m) = DensityMatrix::from_entries(space, unflatten(y.clone(), dim)) {
                        obs(elapsed + tau, &m);
                    }
                };
                dop853::integrate(rhs, 0.0, t, y0, &ode, Some(&mut wrapped))?
            }
            None => dop853::integrate(rhs, 0.0, t, y0, &ode, None)?,
        };
        report.absorb(stats);
        rho = unflatten(out, dim);
        rotate(&mut rho, &exit);
        elapsed += t;
        let m = DensityMatrix::from_entries(space, rho.clone())?;
        report.drift = report.drift.max((m.trace() - C64::new(1.0, 0.0)).norm());
        report.edge_population = report.edge_population.max(m.edge_population());
    }

    if let Some(d) = &disp {
        rho = d.dot(&rho).dot(&dagger(d));
    }
    let out = DensityMatrix::from_entries(space, rho)?;
    if out.entries().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Integrator { t: elapsed, reason: "non-finite density matrix".into() });
    }
    report.hermiticity = out.hermiticity_error();
    report.min_eigenvalue = out.min_eigenvalue();
    if report.drift > TRACE_WARNING {
        log::warn!("trace drifted by {:.3e}", report.drift);
    }
    if report.min_eigenvalue < NEGATIVITY_WARNING {
        log::warn!("density matrix has eigenvalue {:.3e}", report.min_eigenvalue);
    }
    warn_edge(report.edge_population);
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{fidelity, mixed_fidelity, schrodinger_evolve};
    use crate::fock::{BasisLabel, Qubit, StateVector};
    use crate::synth::{synthesize, TargetState};

    fn short_sequence() -> (SystemParams, PulseSequence) {
        let p = SystemParams::reference_device(0.4571);
        let seq = synthesize(&TargetState::even(1), &p, 1.0286).unwrap();
        (p, seq)
    }

    #[test]
    fn jump_operators_in_eigenbasis() {
        let theta = 0.7;
        let [eg, ee, gg] = eigenbasis_jumps(theta);
        // ee + gg is the identity and eg maps ẽ to g̃
        for a in 0..2 {
            for b in 0..2 {
                let id = if a == b { 1.0 } else { 0.0 };
                assert!((ee[a][b] + gg[a][b] - id).abs() < 1e-15);
            }
        }
        let (s, c) = (theta / 2.0).sin_cos();
        let mapped = [eg[0][0] * s + eg[0][1] * c, eg[1][0] * s + eg[1][1] * c];
        assert!((mapped[0] - c).abs() < 1e-15 && (mapped[1] + s).abs() < 1e-15);
    }

    #[test]
    fn qubit_fast_path_matches_blocks() {
        let space = SpaceDescriptor::new(2, 1);
        let dim = space.dimension();
        let p = SystemParams::reference_device(0.3);
        let model = FullModel::new(&space, &p, 1.3, Frame::DisplacedDrive);
        let rho = CMatrix::from_shape_fn((dim, dim), |(i, j)| C64::new((i + j) as f64 * 0.01, (i as f64 - j as f64) * 0.03));
        for q in eigenbasis_jumps(0.4) {
            let mut want = CMatrix::zeros((dim, dim));
            dissipate_op(0.7, &model.qubit_jump(q, 2e10, 0.3, 1e-10, false), &rho.view(), &mut want.view_mut());
            let mut got = CMatrix::zeros((dim, dim));
            let mut t = QubitTensor::default();
            add_qubit_jump(&mut t, 0.7, &model.qubit_jump_scalars(q, 2e10, 0.3, 1e-10));
            apply_qubit_tensor(&t, space.fock_dim(), rho.as_slice().unwrap(), got.as_slice_mut().unwrap());
            assert!(crate::linalg::max_abs_diff(&got, &want) < 1e-14);
        }
    }

    #[test]
    fn shifted_ladder_matches_blocks() {
        let space = SpaceDescriptor::new(3, 2);
        let dim = space.dimension();
        let p = SystemParams::reference_device(0.4571).with_etas(0.4571, 0.3);
        let model = FullModel::new(&space, &p, 1.3, Frame::DisplacedDrive);
        let rho = CMatrix::from_shape_fn((dim, dim), |(i, j)| C64::new((i + j) as f64 * 0.01, (i as f64 - j as f64) * 0.03));
        let tau = 3.1e-10;
        for (mode, eta, w) in [(0, p.eta_1, p.omega_1), (1, p.eta_2, p.omega_2)] {
            let mut want = CMatrix::zeros((dim, dim));
            dissipate_op(0.7, &model.displaced_ladder(mode, tau), &rho.view(), &mut want.view_mut());
            let mut got = CMatrix::zeros((dim, dim));
            let c = C64::from_polar(1.0, -w * tau);
            Ladder::new(&space, mode).dissipate_shifted(0.7, c, eta, &rho.view(), &mut got.view_mut());
            assert!(crate::linalg::max_abs_diff(&got, &want) < 1e-13);
        }
    }

    #[test]
    fn ladder_fast_path_matches_dense() {
        let space = SpaceDescriptor::new(2, 3);
        let dim = space.dimension();
        let rho = CMatrix::from_shape_fn((dim, dim), |(i, j)| C64::new((i * 7 + j) as f64 * 0.01, (i as f64 - j as f64) * 0.02));
        for mode in 0..2 {
            let m = if mode == 0 { crate::fock::Mode::One } else { crate::fock::Mode::Two };
            let a = crate::fock::mode_operator(&space, m, crate::fock::LadderKind::Annihilate);
            let ad = dagger(&a);
            let n = ad.dot(&a);
            let want = a.dot(&rho).dot(&ad) - (n.dot(&rho) + rho.dot(&n)).mapv(|z| z * 0.5);
            let mut got = CMatrix::zeros((dim, dim));
            Ladder::new(&space, mode).dissipate(1.0, &rho.view(), &mut got.view_mut());
            assert!(crate::linalg::max_abs_diff(&got, &want) < 1e-14);
        }
    }

    #[test]
    fn closed_system_matches_schrodinger() {
        let (p, seq) = short_sequence();
        let opts = IntegratorOptions::default().with_cutoff(3);
        let psi0 = StateVector::vacuum(opts.space());
        let (psi, _) = schrodinger_evolve(&psi0, &seq, &p, &opts).unwrap();
        let (rho, rep) =
            lindblad_evolve(&DensityMatrix::from_pure(&psi0), &seq, &p, &DecayRates::default(), &opts).unwrap();
        let want = DensityMatrix::from_pure(&psi);
        assert!(crate::linalg::max_abs_diff(rho.entries(), want.entries()) < 1e-6);
        assert!(rep.drift < 1e-6);
        assert!((mixed_fidelity(&rho, &psi).unwrap() - fidelity(&psi, &psi).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn decay_keeps_trace_and_positivity() {
        let (p, seq) = short_sequence();
        let mut rates = DecayRates::reference();
        rates.gamma_gg = rates.gamma_eg;
        // exaggerate the rates so dissipation is visible on a nanosecond scale
        for r in [&mut rates.gamma_eg, &mut rates.gamma_ee, &mut rates.gamma_gg, &mut rates.kappa_1, &mut rates.kappa_2] {
            *r *= 50.0;
        }
        for transform in [false, true] {
            let mut opts = IntegratorOptions::default().with_cutoff(3);
            opts.transform_jumps = transform;
            let rho0 = DensityMatrix::from_pure(&StateVector::vacuum(opts.space()));
            let (rho, rep) = lindblad_evolve(&rho0, &seq, &p, &rates, &opts).unwrap();
            assert!(rep.drift < 1e-6, "trace drift {}", rep.drift);
            assert!(rep.min_eigenvalue > -1e-6);
            assert!(rep.hermiticity < 1e-8);
            let purity = rho.entries().dot(rho.entries()).diag().sum().re;
            assert!(purity < 0.999);
        }
    }

    #[test]
    fn cavity_decay_empties_a_photon() {
        // ω_x = 0 freezes the qubit so only κ_1 acts
        let mut p = SystemParams::reference_device(0.3);
        let seq = synthesize(&TargetState::even(1), &p, 1.0).unwrap();
        p.omega_x = 0.0;
        let rates = DecayRates { kappa_1: 1e8, ..Default::default() };
        let opts = IntegratorOptions::default().with_cutoff(2);
        let psi0 = StateVector::basis(opts.space(), BasisLabel::new(1, 0, Qubit::Ground));
        let (rho, _) = lindblad_evolve(&DensityMatrix::from_pure(&psi0), &seq, &p, &rates, &opts).unwrap();
        let total: f64 = seq.total_duration();
        let want = (-rates.kappa_1 * total).exp();
        assert!((rho.population(BasisLabel::new(1, 0, Qubit::Ground)) - want).abs() < 1e-7);
        assert!((rho.population(BasisLabel::new(0, 0, Qubit::Ground)) - (1.0 - want)).abs() < 1e-7);
    }
}
