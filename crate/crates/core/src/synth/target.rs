use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::{BasisLabel, Qubit, SpaceDescriptor, StateVector};
use crate::linalg::C64;

/// Normalization tolerance for [`TargetState::new`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Target `Σ C_{n1 n2} |n1, n2⟩|g⟩` on the triangle `n1 + n2 ≤ n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetState {
    n_max: u32,
    amplitudes: BTreeMap<(u32, u32), C64>,
}

impl TargetState {
    pub fn new(n_max: u32, amplitudes: impl IntoIterator<Item = ((u32, u32), C64)>) -> Result<Self> {
        let t = Self::collect(n_max, amplitudes)?;
        let norm_sq = t.norm_sq();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(t)
    }

    /// Rescales to unit norm. Returns the target and the original squared norm.
    pub fn normalized(
        n_max: u32,
        amplitudes: impl IntoIterator<Item = ((u32, u32), C64)>,
    ) -> Result<(Self, f64)> {
        let mut t = Self::collect(n_max, amplitudes)?;
        let norm_sq = t.norm_sq();
        if !(norm_sq > 0.0 && norm_sq.is_finite()) {
            return Err(Error::NotNormalized { norm_sq });
        }
        let scale = norm_sq.sqrt().recip();
        for v in t.amplitudes.values_mut() {
            *v *= scale;
        }
        Ok((t, norm_sq))
    }

    fn collect(n_max: u32, amplitudes: impl IntoIterator<Item = ((u32, u32), C64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((n1, n2), a) in amplitudes {
            if n1 + n2 > n_max {
                return Err(Error::OutsideTriangle { n1, n2, n_max });
            }
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::NotNormalized { norm_sq: f64::NAN });
            }
            *map.entry((n1, n2)).or_insert(C64::new(0.0, 0.0)) += a;
        }
        Ok(Self { n_max, amplitudes: map })
    }

    /// `|n1, n2⟩|g⟩` with the given photon-number bound.
    pub fn basis(n_max: u32, n1: u32, n2: u32) -> Result<Self> {
        Self::new(n_max, [((n1, n2), C64::new(1.0, 0.0))])
    }

    /// Equal-weight superposition over the whole triangle.
    pub fn even(n_max: u32) -> Self {
        let labels: Vec<_> = (0..=n_max).flat_map(|a| (0..=n_max - a).map(move |b| (a, b))).collect();
        let w = C64::new((labels.len() as f64).sqrt().recip(), 0.0);
        Self { n_max, amplitudes: labels.into_iter().map(|l| (l, w)).collect() }
    }

    /// `(|N, 0⟩ + |0, N⟩)/√2`
    pub fn noon(n_max: u32) -> Self {
        let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { n_max, amplitudes: BTreeMap::from([((n_max, 0), w), ((0, n_max), w)]) }
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn amplitudes(&self) -> &BTreeMap<(u32, u32), C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n1: u32, n2: u32) -> C64 {
        self.amplitudes.get(&(n1, n2)).copied().unwrap_or_default()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// True when every populated label satisfies `n1 + n2 = n_max`.
    pub fn on_top_diagonal(&self) -> bool {
        self.n_max >= 1
            && self
                .amplitudes
                .iter()
                .all(|(&(a, b), v)| a + b == self.n_max || v.norm() == 0.0)
    }

    pub fn to_state(&self, space: SpaceDescriptor) -> Result<StateVector> {
        let mut s = StateVector::zeros(space);
        for (&(n1, n2), &a) in &self.amplitudes {
            let i = space
                .try_index(n1 as usize, n2 as usize, Qubit::Ground)
                .ok_or(Error::OutsideTriangle { n1, n2, n_max: space.cutoff1().min(space.cutoff2()) as u32 })?;
            s.amplitudes_mut()[i] = a;
        }
        Ok(s)
    }

    pub fn labels(&self) -> impl Iterator<Item = BasisLabel> + '_ {
        self.amplitudes
            .keys()
            .map(|&(a, b)| BasisLabel::new(a as usize, b as usize, Qubit::Ground))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        let e = TargetState::even(2);
        assert_eq!(e.amplitudes().len(), 6);
        assert!((e.norm_sq() - 1.0).abs() < 1e-15);
        assert!(!e.on_top_diagonal());
        let n = TargetState::noon(3);
        assert!(n.on_top_diagonal());
        assert!((n.norm_sq() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid() {
        assert!(matches!(
            TargetState::new(2, [((1, 0), C64::new(0.5, 0.0))]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            TargetState::new(1, [((1, 1), C64::new(1.0, 0.0))]),
            Err(Error::OutsideTriangle { .. })
        ));
        assert!(TargetState::normalized(1, [((0, 0), C64::new(0.0, 0.0))]).is_err());
    }

    #[test]
    fn normalizes() {
        let (t, n) = TargetState::normalized(1, [((0, 0), C64::new(3.0, 0.0)), ((0, 1), C64::new(0.0, 4.0))]).unwrap();
        assert!((n - 25.0).abs() < 1e-12);
        assert!((t.amplitude(0, 1) - C64::new(0.0, 0.8)).norm() < 1e-15);
    }
}
