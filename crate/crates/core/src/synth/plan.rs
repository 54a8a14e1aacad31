//! Step plans of the backward recursion.
//!
//! Plans are listed in recursion order: the first entry is applied to the
//! target state first and becomes the *last* pulse of the forward sequence.

use serde::{Deserialize, Serialize};

use crate::couplings::TransitionType;
use crate::error::{Error, Result};

/// Which side of the acting pair the recursion step empties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Population moves from `|n, g⟩` to `|n + k, e⟩` during the recursion.
    #[serde(rename = "g->e")]
    GroundToExcited,
    /// Population moves from `|n + k, e⟩` to `|n, g⟩` during the recursion.
    #[serde(rename = "e->g")]
    ExcitedToGround,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::GroundToExcited => "g->e",
            Direction::ExcitedToGround => "e->g",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanKind {
    General,
    Noon,
}

/// One recursion step: a transition acting on the pair
/// `|n1, n2, g⟩ ↔ |n1 + k1, n2 + k2, e⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanStep {
    pub transition: TransitionType,
    pub direction: Direction,
    pub n1: u32,
    pub n2: u32,
}

impl PlanStep {
    fn new(transition: TransitionType, direction: Direction, n1: u32, n2: u32) -> Self {
        Self { transition, direction, n1, n2 }
    }

    /// Fock labels of the excited partner.
    pub fn partner(&self) -> (u32, u32) {
        let (k1, k2) = self.transition.k();
        ((self.n1 as i32 + k1) as u32, (self.n2 as i32 + k2) as u32)
    }
}

use Direction::{ExcitedToGround as Eg, GroundToExcited as Ge};
use TransitionType::{Carrier, RedOne, RedTwo, Swap};

/// Sweeps the diagonal `n1 + n2 = m` into `|m − 1, 0, e⟩` with alternating
/// `(0,−1)` and `(−1,0)` steps. `with_head` includes the initial `|0, m, g⟩` step.
fn diagonal_sweep(m: u32, with_head: bool, out: &mut Vec<PlanStep>) {
    if with_head {
        out.push(PlanStep::new(RedTwo, Ge, 0, m));
    }
    for j in 0..m.saturating_sub(1) {
        out.push(PlanStep::new(RedOne, Eg, j + 1, m - 1 - j));
        out.push(PlanStep::new(RedTwo, Ge, j + 1, m - 1 - j));
    }
    out.push(PlanStep::new(RedOne, Ge, m, 0));
}

fn check_n_max(n_max: u32) -> Result<()> {
    if n_max < 1 {
        return Err(Error::InvalidPhotonNumber(i64::from(n_max)));
    }
    Ok(())
}

/// Plan for an arbitrary target on the triangle `n1 + n2 ≤ n_max`.
pub fn plan_procedures(n_max: u32) -> Result<Vec<PlanStep>> {
    check_n_max(n_max)?;
    let mut out = Vec::with_capacity(step_count(n_max, PlanKind::General) as usize);
    diagonal_sweep(n_max, true, &mut out);
    for mu in 1..n_max {
        let m = n_max - mu;
        // fold the excited diagonal m back onto the ground diagonal m
        for j in 0..m {
            out.push(PlanStep::new(Swap, Ge, j, m - j));
            out.push(PlanStep::new(Carrier, Eg, j + 1, m - j - 1));
        }
        diagonal_sweep(m, false, &mut out);
    }
    out.push(PlanStep::new(Carrier, Eg, 0, 0));
    Ok(out)
}

/// Plan for targets supported on the top diagonal `n1 + n2 = n_max`, such as
/// NOON states. Uses no `(1,−1)` step.
pub fn plan_noon(n_max: u32) -> Result<Vec<PlanStep>> {
    check_n_max(n_max)?;
    let mut out = Vec::with_capacity(step_count(n_max, PlanKind::Noon) as usize);
    diagonal_sweep(n_max, true, &mut out);
    for m in (1..n_max).rev() {
        out.push(PlanStep::new(Carrier, Eg, m, 0));
        out.push(PlanStep::new(RedOne, Ge, m, 0));
    }
    out.push(PlanStep::new(Carrier, Eg, 0, 0));
    Ok(out)
}

pub fn plan(n_max: u32, kind: PlanKind) -> Result<Vec<PlanStep>> {
    match kind {
        PlanKind::General => plan_procedures(n_max),
        PlanKind::Noon => plan_noon(n_max),
    }
}

/// `2N² − N + 2` for the general plan, `4N − 1` for the NOON plan.
pub fn step_count(n_max: u32, kind: PlanKind) -> u64 {
    let n = u64::from(n_max);
    match kind {
        PlanKind::General => 2 * n * n - n + 2,
        PlanKind::Noon => 4 * n - 1,
    }
}
