//! Time-dependent generators of the full model in block form.
//!
//! Every operator is stored as four `F × F` qubit blocks (`gg, ge, eg, ee`),
//! matching the flat basis layout where all ground labels precede the excited
//! ones. Blocks keep their structure (zero, scalar, diagonally dressed shared
//! matrix, dense) so products cost only what the structure requires.

use std::sync::Arc;

use ndarray::{Array1, ArrayView2, ArrayViewMut2};
use serde::{Deserialize, Serialize};

use crate::couplings::{matrix_element_m, SystemParams};
use crate::fock::{single_mode_annihilation, SpaceDescriptor};
use crate::linalg::{dagger, kron, CMatrix, CVector, C64, ONE, ZERO};

/// Simulation frame of the full model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Frame {
    /// Displaced picture with the drive resummed into `e^{ix sin(ω̃t+φ)}`.
    #[default]
    #[serde(rename = "displaced", alias = "displaced-drive")]
    DisplacedDrive,
    /// Displaced picture with the explicit `Ω σ_z cos(ω̃t+φ)` drive term.
    #[serde(rename = "displaced-explicit")]
    Displaced,
    /// Undisplaced Hamiltonian with longitudinal coupling; states are mapped
    /// with `D†` on entry and `D` on exit.
    Lab,
}

/// `A ⊗ B` on the two-mode Fock factor, applied one mode at a time.
#[derive(Debug)]
pub(crate) struct KronCore {
    a: CMatrix,
    b: CMatrix,
}

impl KronCore {
    fn adjoint(&self) -> KronCore {
        KronCore { a: dagger(&self.a), b: dagger(&self.b) }
    }

    /// `dst += scale · diag(left) (A ⊗ B) diag(right) · src` where `src` and
    /// `dst` are row-major with `m` columns and one row per Fock index.
    fn rows_acc(&self, scale: C64, left: &[C64], right: &[C64], src: &[C64], dst: &mut [C64], m: usize) {
        let (na, nb) = (self.a.nrows(), self.b.nrows());
        let mut y = vec![ZERO; na * nb * m];
        for i in 0..na {
            for q in 0..nb {
                let row = i * nb + q;
                let from = &src[row * m..(row + 1) * m];
                for p in 0..nb {
                    let c = self.b[[p, q]] * right[row];
                    if c != ZERO {
                        axpy(c, from, &mut y[(i * nb + p) * m..(i * nb + p + 1) * m]);
                    }
                }
            }
        }
        for r in 0..na {
            for i in 0..na {
                let a = self.a[[r, i]];
                if a == ZERO {
                    continue;
                }
                for p in 0..nb {
                    let row = r * nb + p;
                    let c = scale * left[row] * a;
                    axpy(c, &y[(i * nb + p) * m..(i * nb + p + 1) * m], &mut dst[row * m..(row + 1) * m]);
                }
            }
        }
    }
}

fn axpy(c: C64, x: &[C64], y: &mut [C64]) {
    for (y, x) in y.iter_mut().zip(x) {
        *y += c * x;
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Block {
    Zero,
    Scalar(C64),
    /// `scale · diag(left) · core · diag(right)`
    /// `core_adj` is kept alongside so adjoints stay structured.
    Dressed { scale: C64, left: Arc<CVector>, core: Arc<KronCore>, core_adj: Arc<KronCore>, right: Arc<CVector> },
    Dense(CMatrix),
}

impl Block {
    fn adjoint(&self) -> Block {
        match self {
            Block::Zero => Block::Zero,
            Block::Scalar(c) => Block::Scalar(c.conj()),
            Block::Dressed { scale, left, core, core_adj, right } => Block::Dressed {
                scale: scale.conj(),
                left: Arc::new(right.mapv(|z| z.conj())),
                core: core_adj.clone(),
                core_adj: core.clone(),
                right: Arc::new(left.mapv(|z| z.conj())),
            },
            Block::Dense(m) => Block::Dense(dagger(m)),
        }
    }

    /// `dst += B src` on row-major bands of `f` rows and `m` columns.
    fn rows_acc(&self, src: &[C64], dst: &mut [C64], m: usize) {
        match self {
            Block::Zero => {}
            Block::Scalar(c) => axpy(*c, src, dst),
            Block::Dressed { scale, left, core, right, .. } => core.rows_acc(
                *scale,
                left.as_slice().expect("contiguous"),
                right.as_slice().expect("contiguous"),
                src,
                dst,
                m,
            ),
            Block::Dense(d) => {
                let f = d.nrows();
                let x = ArrayView2::from_shape((f, m), src).expect("band shape");
                let mut out = ArrayViewMut2::from_shape((f, m), dst).expect("band shape");
                ndarray::linalg::general_mat_mul(ONE, d, &x, ONE, &mut out);
            }
        }
    }
}

/// Operator as four qubit blocks `[[gg, ge], [eg, ee]]`.
#[derive(Debug, Clone)]
pub(crate) struct BlockOp {
    pub blocks: [[Block; 2]; 2],
    pub f: usize,
}

impl BlockOp {
    /// `dst = self · src` for row-major `src` with `m` columns.
    fn apply_rows(&self, src: &[C64], dst: &mut [C64], m: usize) {
        dst.fill(ZERO);
        let band = self.f * m;
        let (g, e) = dst.split_at_mut(band);
        for (b, from) in src.chunks_exact(band).enumerate() {
            self.blocks[0][b].rows_acc(from, g, m);
            self.blocks[1][b].rows_acc(from, e, m);
        }
    }

    pub fn apply(&self, psi: &CVector, out: &mut CVector) {
        let src = psi.as_standard_layout();
        let dst = out.as_slice_mut().expect("contiguous output");
        self.apply_rows(src.as_slice().expect("standard layout"), dst, 1);
    }

    /// `self · ρ`
    pub fn left_mul(&self, rho: ArrayView2<C64>) -> CMatrix {
        let m = rho.ncols();
        let src = rho.as_standard_layout();
        let mut out = CMatrix::zeros((2 * self.f, m));
        self.apply_rows(
            src.as_slice().expect("standard layout"),
            out.as_slice_mut().expect("fresh matrix"),
            m,
        );
        out
    }

    pub fn adjoint(&self) -> BlockOp {
        let b = &self.blocks;
        BlockOp {
            blocks: [
                [b[0][0].adjoint(), b[1][0].adjoint()],
                [b[0][1].adjoint(), b[1][1].adjoint()],
            ],
            f: self.f,
        }
    }

    #[cfg(test)]
    pub fn to_dense(&self) -> CMatrix {
        let f = self.f;
        let id = CMatrix::eye(2 * f);
        self.left_mul(id.view())
    }
}

/// Two-mode matrix `⟨m| e^{Σ η_l (a_l† − a_l)} |n⟩` from the closed-form ladder
/// elements, truncated to the space (no renormalization at the edge).
pub fn displacement_elements(space: &SpaceDescriptor, eta1: f64, eta2: f64) -> CMatrix {
    let (a, b) = displacement_factors(space, eta1, eta2);
    kron(&a, &b)
}

/// Single-mode factors of [`displacement_elements`].
fn displacement_factors(space: &SpaceDescriptor, eta1: f64, eta2: f64) -> (CMatrix, CMatrix) {
    let single = |c: usize, eta: f64| {
        CMatrix::from_shape_fn((c + 1, c + 1), |(m, n)| {
            let k = m as i32 - n as i32;
            C64::new(matrix_element_m(m.min(n) as u32, k, eta), 0.0)
        })
    };
    (single(space.cutoff1(), eta1), single(space.cutoff2(), eta2))
}

/// Static pieces of the full model for one space and device.
pub(crate) struct FullModel {
    pub frame: Frame,
    pub params: SystemParams,
    pub x: f64,
    pub f: usize,
    /// `n1 ω1 + n2 ω2` per Fock index.
    energies: Array1<f64>,
    disp: Arc<KronCore>,
    disp_adj: Arc<KronCore>,
    /// `a_l` restricted to the Fock factor.
    ladders: [CMatrix; 2],
}

impl FullModel {
    pub fn new(space: &SpaceDescriptor, params: &SystemParams, x: f64, frame: Frame) -> Self {
        let f = space.fock_dim();
        let energies = Array1::from_iter((0..f).map(|i| {
            let l = space.label(i);
            l.n1 as f64 * params.omega_1 + l.n2 as f64 * params.omega_2
        }));
        let (a, b) = displacement_factors(space, params.eta_1, params.eta_2);
        let disp = KronCore { a, b };
        let disp_adj = Arc::new(disp.adjoint());
        let a1 = kron(&single_mode_annihilation(space.cutoff1()), &CMatrix::eye(space.cutoff2() + 1));
        let a2 = kron(&CMatrix::eye(space.cutoff1() + 1), &single_mode_annihilation(space.cutoff2()));
        Self {
            frame,
            params: *params,
            x,
            f,
            energies,
            disp: Arc::new(disp),
            disp_adj,
            ladders: [a1, a2],
        }
    }

    fn mode_phases(&self, tau: f64) -> (Arc<CVector>, Arc<CVector>) {
        let p = self.energies.mapv(|e| C64::from_polar(1.0, e * tau));
        let pc = p.mapv(|z| z.conj());
        (Arc::new(p), Arc::new(pc))
    }

    /// Phase `χ(τ)` carried by `σ₊` in the simulated frame.
    pub fn raising_phase(&self, omega_drive: f64, phi: f64, tau: f64) -> f64 {
        let base = self.params.omega_z * tau;
        match self.frame {
            Frame::DisplacedDrive => base + self.x * (omega_drive * tau + phi).sin(),
            Frame::Displaced | Frame::Lab => base,
        }
    }

    /// `P(τ) D_η P(τ)†` dressed by `scale`.
    fn dressed_displacement(&self, scale: C64, tau: f64, adjoint: bool) -> Block {
        let (p, pc) = self.mode_phases(tau);
        Block::Dressed {
            scale,
            left: p,
            core: if adjoint { self.disp_adj.clone() } else { self.disp.clone() },
            core_adj: if adjoint { self.disp.clone() } else { self.disp_adj.clone() },
            right: pc,
        }
    }

    /// Interaction-picture Hamiltonian at local time `τ` of a pulse.
    pub fn hamiltonian(&self, omega_drive: f64, phi: f64, tau: f64) -> BlockOp {
        let half_wx = self.params.omega_x / 2.0;
        let chi = self.raising_phase(omega_drive, phi, tau);
        let coupling = C64::from_polar(half_wx, chi);
        let drive = self.x * omega_drive / 2.0 * (omega_drive * tau + phi).cos();
        let blocks = match self.frame {
            Frame::DisplacedDrive => [
                [Block::Zero, self.dressed_displacement(coupling.conj(), tau, true)],
                [self.dressed_displacement(coupling, tau, false), Block::Zero],
            ],
            Frame::Displaced => [
                [Block::Scalar(C64::new(-drive, 0.0)), self.dressed_displacement(coupling.conj(), tau, true)],
                [self.dressed_displacement(coupling, tau, false), Block::Scalar(C64::new(drive, 0.0))],
            ],
            Frame::Lab => {
                // Σ g_l (a_l e^{−iω_l τ} + h.c.)
                let mut g = CMatrix::zeros((self.f, self.f));
                for (l, (gl, wl)) in [(self.params.g1(), self.params.omega_1), (self.params.g2(), self.params.omega_2)]
                    .into_iter()
                    .enumerate()
                {
                    let a = self.ladders[l].mapv(|z| z * C64::from_polar(gl, -wl * tau));
                    g = g + &a + &dagger(&a);
                }
                let id = CMatrix::eye(self.f);
                let gg = (&g + &id.mapv(|z| z * drive)).mapv(|z| -z);
                let ee = &g + &id.mapv(|z| z * drive);
                [[Block::Dense(gg), Block::Scalar(coupling.conj())], [Block::Scalar(coupling), Block::Dense(ee)]]
            }
        };
        BlockOp { blocks, f: self.f }
    }

    /// Qubit operator `Σ q_ab |a⟩⟨b|` (identity on the modes) in the simulated
    /// frame. With `displace`, off-diagonal parts carry `D_η` as `D σ D†` does.
    pub fn qubit_jump(&self, q: [[f64; 2]; 2], omega_drive: f64, phi: f64, tau: f64, displace: bool) -> BlockOp {
        let chi = self.raising_phase(omega_drive, phi, tau);
        let up = C64::from_polar(q[1][0], chi);
        let down = C64::from_polar(q[0][1], -chi);
        let diag = |v: f64| if v == 0.0 { Block::Zero } else { Block::Scalar(C64::new(v, 0.0)) };
        let off = |c: C64, adjoint: bool| {
            if c.norm() == 0.0 {
                Block::Zero
            } else if displace {
                self.dressed_displacement(c, tau, adjoint)
            } else {
                Block::Scalar(c)
            }
        };
        BlockOp {
            blocks: [[diag(q[0][0]), off(down, true)], [off(up, false), diag(q[1][1])]],
            f: self.f,
        }
    }

    /// The 2×2 qubit matrix of [`Self::qubit_jump`] without displacement.
    pub fn qubit_jump_scalars(&self, q: [[f64; 2]; 2], omega_drive: f64, phi: f64, tau: f64) -> [[C64; 2]; 2] {
        let chi = self.raising_phase(omega_drive, phi, tau);
        [
            [C64::new(q[0][0], 0.0), C64::from_polar(q[0][1], -chi)],
            [C64::from_polar(q[1][0], chi), C64::new(q[1][1], 0.0)],
        ]
    }

    /// `a_l` shifted by `±η_l/2` in the ground/excited block, as `D a_l D†`.
    #[cfg(test)]
    pub fn displaced_ladder(&self, mode: usize, tau: f64) -> BlockOp {
        let (eta, w) = if mode == 0 {
            (self.params.eta_1, self.params.omega_1)
        } else {
            (self.params.eta_2, self.params.omega_2)
        };
        let a = self.ladders[mode].mapv(|z| z * C64::from_polar(1.0, -w * tau));
        let id = CMatrix::eye(self.f);
        BlockOp {
            blocks: [
                [Block::Dense(&a + &id.mapv(|z| z * (eta / 2.0))), Block::Zero],
                [Block::Zero, Block::Dense(&a - &id.mapv(|z| z * (eta / 2.0)))],
            ],
            f: self.f,
        }
    }
}
