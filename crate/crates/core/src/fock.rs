//! Truncated two-mode ⊗ qubit Hilbert space, basis bookkeeping, operator
//! builders and the frame-transform unitaries.
//!
//! Flat index layout: `(q · (c1 + 1) + n1) · (c2 + 1) + n2` with `q = 0` for
//! `|g⟩` and `q = 1` for `|e⟩`. All ground-state labels come first, so every
//! operator splits into four `F × F` qubit blocks with `F = (c1 + 1)(c2 + 1)`.

use std::fmt;

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::couplings::SystemParams;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Qubit {
    #[serde(rename = "g")]
    Ground,
    #[serde(rename = "e")]
    Excited,
}

impl Qubit {
    pub fn index(self) -> usize {
        match self {
            Qubit::Ground => 0,
            Qubit::Excited => 1,
        }
    }

    /// Eigenvalue of σ_z.
    pub fn sz(self) -> f64 {
        match self {
            Qubit::Ground => -1.0,
            Qubit::Excited => 1.0,
        }
    }
}

/// Basis label `|n1, n2⟩|q⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub n1: usize,
    pub n2: usize,
    pub qubit: Qubit,
}

impl BasisLabel {
    pub fn new(n1: usize, n2: usize, qubit: Qubit) -> Self {
        Self { n1, n2, qubit }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = match self.qubit {
            Qubit::Ground => 'g',
            Qubit::Excited => 'e',
        };
        write!(f, "|{},{},{}>", self.n1, self.n2, q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    cutoff1: usize,
    cutoff2: usize,
}

impl SpaceDescriptor {
    pub fn new(cutoff1: usize, cutoff2: usize) -> Self {
        Self { cutoff1, cutoff2 }
    }

    pub fn cutoff1(&self) -> usize {
        self.cutoff1
    }

    pub fn cutoff2(&self) -> usize {
        self.cutoff2
    }

    pub fn cutoff(&self, mode: Mode) -> usize {
        match mode {
            Mode::One => self.cutoff1,
            Mode::Two => self.cutoff2,
        }
    }

    /// Number of two-mode Fock labels, `(c1 + 1)(c2 + 1)`.
    pub fn fock_dim(&self) -> usize {
        (self.cutoff1 + 1) * (self.cutoff2 + 1)
    }

    pub fn dimension(&self) -> usize {
        2 * self.fock_dim()
    }

    pub fn fock_index(&self, n1: usize, n2: usize) -> usize {
        debug_assert!(n1 <= self.cutoff1 && n2 <= self.cutoff2);
        n1 * (self.cutoff2 + 1) + n2
    }

    pub fn index(&self, label: BasisLabel) -> usize {
        label.qubit.index() * self.fock_dim() + self.fock_index(label.n1, label.n2)
    }

    /// Flat index for `(n1, n2, q)`, `None` when a photon number exceeds the cutoff.
    pub fn try_index(&self, n1: usize, n2: usize, qubit: Qubit) -> Option<usize> {
        (n1 <= self.cutoff1 && n2 <= self.cutoff2)
            .then(|| self.index(BasisLabel::new(n1, n2, qubit)))
    }

    pub fn label(&self, index: usize) -> BasisLabel {
        assert!(index < self.dimension(), "index {index} out of range");
        let f = self.fock_dim();
        let qubit = if index < f { Qubit::Ground } else { Qubit::Excited };
        let rest = index % f;
        BasisLabel::new(rest / (self.cutoff2 + 1), rest % (self.cutoff2 + 1), qubit)
    }

    pub fn labels(&self) -> impl Iterator<Item = BasisLabel> + '_ {
        (0..self.dimension()).map(move |i| self.label(i))
    }

    /// True when both photon numbers sit at least `guard` levels below their cutoffs.
    pub fn is_interior(&self, label: BasisLabel, guard: usize) -> bool {
        label.n1 + guard <= self.cutoff1 && label.n2 + guard <= self.cutoff2
    }

    /// Labels on the top Fock level of either mode.
    pub fn is_edge(&self, label: BasisLabel) -> bool {
        label.n1 == self.cutoff1 || label.n2 == self.cutoff2
    }

    pub fn interior_indices(&self, guard: usize) -> Vec<usize> {
        (0..self.dimension())
            .filter(|&i| self.is_interior(self.label(i), guard))
            .collect()
    }
}

/// Builds a space from signed cutoffs, rejecting negative values.
pub fn build_space(cutoff1: i64, cutoff2: i64) -> Result<SpaceDescriptor> {
    if cutoff1 < 0 || cutoff2 < 0 {
        return Err(Error::InvalidCutoff(format!(
            "cutoffs must be non-negative, got ({cutoff1}, {cutoff2})"
        )));
    }
    Ok(SpaceDescriptor::new(cutoff1 as usize, cutoff2 as usize))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Annihilate,
    Create,
    Number,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitKind {
    Sx,
    Sy,
    Sz,
    Raise,
    Lower,
    Project(Qubit),
}

/// Single-mode ladder matrix on `cutoff + 1` levels.
pub fn single_mode_annihilation(cutoff: usize) -> CMatrix {
    let mut a = CMatrix::zeros((cutoff + 1, cutoff + 1));
    for n in 1..=cutoff {
        a[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn mode_operator(space: &SpaceDescriptor, mode: Mode, kind: LadderKind) -> CMatrix {
    let dim = space.dimension();
    let mut op = CMatrix::zeros((dim, dim));
    for col in 0..dim {
        let l = space.label(col);
        let n = match mode {
            Mode::One => l.n1,
            Mode::Two => l.n2,
        };
        match kind {
            LadderKind::Number => op[[col, col]] = C64::new(n as f64, 0.0),
            LadderKind::Annihilate if n > 0 => {
                let row = match mode {
                    Mode::One => space.index(BasisLabel::new(l.n1 - 1, l.n2, l.qubit)),
                    Mode::Two => space.index(BasisLabel::new(l.n1, l.n2 - 1, l.qubit)),
                };
                op[[row, col]] = C64::new((n as f64).sqrt(), 0.0);
            }
            LadderKind::Create if n < space.cutoff(mode) => {
                let row = match mode {
                    Mode::One => space.index(BasisLabel::new(l.n1 + 1, l.n2, l.qubit)),
                    Mode::Two => space.index(BasisLabel::new(l.n1, l.n2 + 1, l.qubit)),
                };
                op[[row, col]] = C64::new(((n + 1) as f64).sqrt(), 0.0);
            }
            _ => {}
        }
    }
    op
}

/// 2×2 qubit matrix in the `(g, e)` ordering.
pub fn qubit_matrix(kind: QubitKind) -> [[C64; 2]; 2] {
    let i = C64::new(0.0, 1.0);
    match kind {
        QubitKind::Sx => [[ZERO, ONE], [ONE, ZERO]],
        // σ_y = -i|e⟩⟨g| + i|g⟩⟨e|
        QubitKind::Sy => [[ZERO, i], [-i, ZERO]],
        QubitKind::Sz => [[-ONE, ZERO], [ZERO, ONE]],
        QubitKind::Raise => [[ZERO, ZERO], [ONE, ZERO]],
        QubitKind::Lower => [[ZERO, ONE], [ZERO, ZERO]],
        QubitKind::Project(Qubit::Ground) => [[ONE, ZERO], [ZERO, ZERO]],
        QubitKind::Project(Qubit::Excited) => [[ZERO, ZERO], [ZERO, ONE]],
    }
}

/// Lifts a 2×2 qubit matrix to the full space (identity on the modes).
pub fn lift_qubit(space: &SpaceDescriptor, q: [[C64; 2]; 2]) -> CMatrix {
    let f = space.fock_dim();
    let mut op = CMatrix::zeros((2 * f, 2 * f));
    for (a, row) in q.iter().enumerate() {
        for (b, &v) in row.iter().enumerate() {
            if v == ZERO {
                continue;
            }
            for k in 0..f {
                op[[a * f + k, b * f + k]] = v;
            }
        }
    }
    op
}

pub fn qubit_operator(space: &SpaceDescriptor, kind: QubitKind) -> CMatrix {
    lift_qubit(space, qubit_matrix(kind))
}

/// Single-mode `exp[s (a† − a)]` on `cutoff + 1` levels.
fn single_mode_displacement(cutoff: usize, s: f64) -> CMatrix {
    let a = single_mode_annihilation(cutoff);
    let gen = (linalg::dagger(&a) - &a).mapv(|z| z * s);
    linalg::expm(&gen)
}

/// `D = exp[Σ_l η_l (σ_z/2)(a_l† − a_l)]`.
///
/// The generator is block diagonal in the qubit, so each block is the Kronecker
/// product of two single-mode displacements by `∓η_l/2`.
pub fn displacement_unitary(space: &SpaceDescriptor, eta1: f64, eta2: f64) -> Result<CMatrix> {
    if !eta1.is_finite() || !eta2.is_finite() {
        return Err(Error::InvalidParams(format!(
            "Lamb-Dicke parameters must be finite, got ({eta1}, {eta2})"
        )));
    }
    // coherent amplitude η/2 populates levels up to roughly (η/2)² + a few σ
    for (eta, c) in [(eta1, space.cutoff1), (eta2, space.cutoff2)] {
        let mean = (eta / 2.0).powi(2);
        if mean + 4.0 * mean.sqrt() + 1.0 > c as f64 {
            log::warn!("displacement by {eta}/2 may be truncated at cutoff {c}");
        }
    }
    let f = space.fock_dim();
    let mut d = CMatrix::zeros((2 * f, 2 * f));
    for q in [Qubit::Ground, Qubit::Excited] {
        let s = q.sz() / 2.0;
        let block = linalg::kron(
            &single_mode_displacement(space.cutoff1, s * eta1),
            &single_mode_displacement(space.cutoff2, s * eta2),
        );
        let off = q.index() * f;
        d.slice_mut(ndarray::s![off..off + f, off..off + f]).assign(&block);
    }
    Ok(d)
}

/// Diagonal of `exp[+i(ω_z σ_z/2 + Σ ω_l a_l†a_l) t]`.
pub fn free_rotation_phases(space: &SpaceDescriptor, params: &SystemParams, t: f64) -> CVector {
    Array1::from_iter(space.labels().map(|l| {
        let e = params.omega_z * l.qubit.sz() / 2.0
            + l.n1 as f64 * params.omega_1
            + l.n2 as f64 * params.omega_2;
        C64::from_polar(1.0, e * t)
    }))
}

pub fn free_rotation(space: &SpaceDescriptor, params: &SystemParams, t: f64) -> CMatrix {
    CMatrix::from_diag(&free_rotation_phases(space, params, t))
}

/// Diagonal of `exp[i x (σ_z/2) sin(ω̃ t + φ)]`.
pub fn drive_frame_phases(
    space: &SpaceDescriptor,
    x: f64,
    omega_drive: f64,
    phi: f64,
    t: f64,
) -> CVector {
    let s = x * (omega_drive * t + phi).sin() / 2.0;
    Array1::from_iter(space.labels().map(|l| C64::from_polar(1.0, l.qubit.sz() * s)))
}

pub fn drive_frame_unitary(
    space: &SpaceDescriptor,
    x: f64,
    omega_drive: f64,
    phi: f64,
    t: f64,
) -> CMatrix {
    CMatrix::from_diag(&drive_frame_phases(space, x, omega_drive, phi, t))
}

/// Pure state on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: SpaceDescriptor,
    amplitudes: CVector,
}

impl StateVector {
    pub fn zeros(space: SpaceDescriptor) -> Self {
        Self { space, amplitudes: CVector::zeros(space.dimension()) }
    }

    pub fn basis(space: SpaceDescriptor, label: BasisLabel) -> Self {
        let mut s = Self::zeros(space);
        s.amplitudes[space.index(label)] = ONE;
        s
    }

    /// `|0,0⟩|g⟩`
    pub fn vacuum(space: SpaceDescriptor) -> Self {
        Self::basis(space, BasisLabel::new(0, 0, Qubit::Ground))
    }

    pub fn from_amplitudes(space: SpaceDescriptor, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != space.dimension() {
            return Err(Error::SpaceMismatch {
                expected: space.dimension(),
                actual: amplitudes.len(),
            });
        }
        Ok(Self { space, amplitudes })
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut CVector {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    pub fn amplitude(&self, label: BasisLabel) -> C64 {
        self.amplitudes[self.space.index(label)]
    }

    pub fn population(&self, label: BasisLabel) -> f64 {
        self.amplitude(label).norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        linalg::vec_norm(&self.amplitudes)
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_space(other.space())?;
        Ok(linalg::inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn apply(&self, op: &CMatrix) -> Result<StateVector> {
        if op.nrows() != self.space.dimension() || op.ncols() != self.space.dimension() {
            return Err(Error::SpaceMismatch {
                expected: self.space.dimension(),
                actual: op.nrows(),
            });
        }
        Ok(Self { space: self.space, amplitudes: op.dot(&self.amplitudes) })
    }

    /// Multiplies by a diagonal operator given as its diagonal.
    pub fn apply_diagonal(&mut self, diag: &CVector) {
        self.amplitudes *= diag;
    }

    /// Total population on labels at the top Fock level of either mode.
    pub fn edge_population(&self) -> f64 {
        self.space
            .labels()
            .zip(self.amplitudes.iter())
            .filter(|(l, _)| self.space.is_edge(*l))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Re-expresses the state on another truncated space, dropping amplitude on
    /// labels that do not fit.
    pub fn embed(&self, target: SpaceDescriptor) -> StateVector {
        let mut out = StateVector::zeros(target);
        for (i, l) in self.space.labels().enumerate() {
            if let Some(j) = target.try_index(l.n1, l.n2, l.qubit) {
                out.amplitudes[j] = self.amplitudes[i];
            }
        }
        out
    }

    fn check_space(&self, other: &SpaceDescriptor) -> Result<()> {
        if *other != self.space {
            return Err(Error::SpaceMismatch {
                expected: self.space.dimension(),
                actual: other.dimension(),
            });
        }
        Ok(())
    }
}

/// Mixed state on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: SpaceDescriptor,
    entries: CMatrix,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Self {
        let v = state.amplitudes();
        let n = v.len();
        let mut m = CMatrix::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                m[[i, j]] = v[i] * v[j].conj();
            }
        }
        Self { space: *state.space(), entries: m }
    }

    pub fn from_entries(space: SpaceDescriptor, entries: CMatrix) -> Result<Self> {
        if entries.dim() != (space.dimension(), space.dimension()) {
            return Err(Error::SpaceMismatch {
                expected: space.dimension(),
                actual: entries.nrows(),
            });
        }
        Ok(Self { space, entries })
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn trace(&self) -> C64 {
        self.entries.diag().sum()
    }

    pub fn population(&self, label: BasisLabel) -> f64 {
        let i = self.space.index(label);
        self.entries[[i, i]].re
    }

    /// Max-norm of `ρ − ρ†`.
    pub fn hermiticity_error(&self) -> f64 {
        linalg::max_abs_diff(&self.entries, &linalg::dagger(&self.entries))
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if *state.space() != self.space {
            return Err(Error::SpaceMismatch {
                expected: self.space.dimension(),
                actual: state.space().dimension(),
            });
        }
        let v = state.amplitudes();
        Ok(linalg::inner(v, &self.entries.dot(v)).re)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.entries.nrows();
        let herm = (&self.entries + &linalg::dagger(&self.entries)).mapv(|z| z * 0.5);
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| herm[[i, j]]);
        m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn edge_population(&self) -> f64 {
        self.space
            .labels()
            .enumerate()
            .filter(|(_, l)| self.space.is_edge(*l))
            .map(|(i, _)| self.entries[[i, i]].re)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dagger, identity, max_abs_diff};

    fn interior_block_deviation(m: &CMatrix, space: &SpaceDescriptor, guard: usize) -> f64 {
        let idx = space.interior_indices(guard);
        let mut worst: f64 = 0.0;
        for &i in &idx {
            for &j in &idx {
                let expected = if i == j { ONE } else { ZERO };
                worst = worst.max((m[[i, j]] - expected).norm());
            }
        }
        worst
    }

    #[test]
    fn dimensions() {
        assert_eq!(build_space(0, 0).unwrap().dimension(), 2);
        assert_eq!(build_space(7, 7).unwrap().dimension(), 128);
        assert_eq!(build_space(2, 3).unwrap().dimension(), 24);
        assert!(build_space(-1, 2).is_err());
        assert!(build_space(2, -3).is_err());
    }

    #[test]
    fn index_map_is_bijective() {
        for c1 in 0..=10 {
            for c2 in 0..=10 {
                let s = SpaceDescriptor::new(c1, c2);
                assert_eq!(s.dimension(), 2 * (c1 + 1) * (c2 + 1));
                let mut seen = vec![false; s.dimension()];
                for i in 0..s.dimension() {
                    let l = s.label(i);
                    assert_eq!(s.index(l), i);
                    assert!(!seen[i]);
                    seen[i] = true;
                }
            }
        }
    }

    #[test]
    fn ladder_elements() {
        let s = SpaceDescriptor::new(4, 3);
        let a = mode_operator(&s, Mode::One, LadderKind::Annihilate);
        let ad = mode_operator(&s, Mode::One, LadderKind::Create);
        assert!(max_abs_diff(&ad, &dagger(&a)) < 1e-15);

        let vac = StateVector::vacuum(s);
        assert!(vac.apply(&a).unwrap().norm() < 1e-15);

        // ⟨2|a|3⟩ = √3
        let i2 = s.index(BasisLabel::new(2, 1, Qubit::Excited));
        let i3 = s.index(BasisLabel::new(3, 1, Qubit::Excited));
        assert!((a[[i2, i3]].re - 3f64.sqrt()).abs() < 1e-15);

        // a a† |n⟩ -> ... and a† then a gives n|n⟩ below the cutoff
        let num = mode_operator(&s, Mode::Two, LadderKind::Number);
        let a2 = mode_operator(&s, Mode::Two, LadderKind::Annihilate);
        let ad2 = mode_operator(&s, Mode::Two, LadderKind::Create);
        let n_state = StateVector::basis(s, BasisLabel::new(1, 2, Qubit::Ground));
        let out = n_state.apply(&ad2.dot(&a2)).unwrap();
        let expect = n_state.apply(&num).unwrap();
        assert!((out.amplitudes() - expect.amplitudes()).iter().all(|z| z.norm() < 1e-14));
        assert!((out.amplitude(BasisLabel::new(1, 2, Qubit::Ground)).re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_algebra() {
        let s = SpaceDescriptor::new(2, 1);
        let sz = qubit_operator(&s, QubitKind::Sz);
        assert!(max_abs_diff(&sz.dot(&sz), &identity(s.dimension())) < 1e-15);

        let sp = qubit_operator(&s, QubitKind::Raise);
        let sm = qubit_operator(&s, QubitKind::Lower);
        assert!(max_abs_diff(&crate::linalg::commutator(&sp, &sm), &sz) < 1e-15);

        let g = StateVector::basis(s, BasisLabel::new(1, 0, Qubit::Ground));
        let up = g.apply(&sp).unwrap();
        assert!((up.amplitude(BasisLabel::new(1, 0, Qubit::Excited)) - ONE).norm() < 1e-15);

        let e = StateVector::basis(s, BasisLabel::new(0, 1, Qubit::Excited));
        assert!((e.apply(&sz).unwrap().amplitude(BasisLabel::new(0, 1, Qubit::Excited)) - ONE).norm() < 1e-15);
    }

    #[test]
    fn displacement_identity_at_zero() {
        let s = SpaceDescriptor::new(3, 3);
        let d = displacement_unitary(&s, 0.0, 0.0).unwrap();
        assert!(max_abs_diff(&d, &identity(s.dimension())) < 1e-15);
    }

    #[test]
    fn displacement_is_unitary_on_interior() {
        let s = SpaceDescriptor::new(7, 7);
        let d = displacement_unitary(&s, 0.5429, 0.3714).unwrap();
        let dd = d.dot(&dagger(&d));
        assert!(interior_block_deviation(&dd, &s, 2) < 1e-9);
    }

    #[test]
    fn displacement_rejects_non_finite() {
        let s = SpaceDescriptor::new(2, 2);
        assert!(displacement_unitary(&s, f64::NAN, 0.1).is_err());
    }

    #[test]
    fn free_rotation_phases_match_energies() {
        let s = SpaceDescriptor::new(2, 2);
        let p = SystemParams::reference_device(0.3714);
        let t = 0.37e-9;
        let u = free_rotation(&s, &p, t);
        let l = BasisLabel::new(2, 1, Qubit::Excited);
        let i = s.index(l);
        let phase = (p.omega_z / 2.0 + 2.0 * p.omega_1 + p.omega_2) * t;
        assert!((u[[i, i]] - C64::from_polar(1.0, phase)).norm() < 1e-12);
        assert!(max_abs_diff(&free_rotation(&s, &p, 0.0), &identity(s.dimension())) < 1e-15);
        let uu = u.dot(&dagger(&u));
        assert!(max_abs_diff(&uu, &identity(s.dimension())) < 1e-12);
    }

    #[test]
    fn drive_frame_trivial_cases() {
        let s = SpaceDescriptor::new(1, 2);
        let id = identity(s.dimension());
        assert!(max_abs_diff(&drive_frame_unitary(&s, 0.0, 3.0, 0.4, 1.3), &id) < 1e-15);
        // sin(ω̃t + φ) = 0
        assert!(max_abs_diff(&drive_frame_unitary(&s, 1.7, 2.0, std::f64::consts::PI, 0.0), &id) < 1e-15);
        let u = drive_frame_unitary(&s, 1.7, 2.0, 0.3, 0.8);
        assert!(max_abs_diff(&u.dot(&dagger(&u)), &id) < 1e-12);
    }

    #[test]
    fn density_matrix_basics() {
        let s = SpaceDescriptor::new(1, 1);
        let mut v = StateVector::zeros(s);
        v.amplitudes_mut()[0] = C64::new(0.6, 0.0);
        v.amplitudes_mut()[5] = C64::new(0.0, 0.8);
        let rho = DensityMatrix::from_pure(&v);
        assert!((rho.trace() - ONE).norm() < 1e-15);
        assert!(rho.hermiticity_error() < 1e-15);
        assert!((rho.expectation(&v).unwrap() - 1.0).abs() < 1e-14);
        assert!(rho.min_eigenvalue() > -1e-12);
    }
}
