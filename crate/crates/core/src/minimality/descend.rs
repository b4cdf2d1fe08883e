use serde::Serialize;

use super::decide::{is_minimal_with, MinimalityOptions};
use super::instance::JointInstance;
use super::kernels::{p_star_with, q_bar_with, q_star_from};
use super::verdict::{Decision, MinimalityVerdict};
use crate::error::{Error, Result};
use crate::observables::{is_postprocessing_of, MarkovKernel, Observable};

pub const DEFAULT_DESCENT_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DescentStatus {
    Converged,
    NotConverged,
    /// Stopped on an undecided verdict.
    Boundary,
}

#[derive(Debug, Clone, Serialize)]
pub struct Descent {
    pub status: DescentStatus,
    pub joint: Observable,
    /// Number of `G ← p∗ ∗ G` steps taken.
    pub steps: usize,
    pub history: Vec<MinimalityVerdict>,
}

/// `p∗`, or `q∗` when the `K_G` enumeration exceeds its budget.
fn step_kernel(inst: &JointInstance, opts: &MinimalityOptions) -> Result<MarkovKernel> {
    match p_star_with(inst, &opts.limits) {
        Ok((k, _)) => Ok(k),
        Err(Error::CapExceeded { .. }) => {
            let bars = (0..inst.n())
                .map(|l| q_bar_with(inst, l, &opts.limits).map(|r| r.0))
                .collect::<Result<Vec<_>>>()?;
            q_star_from(inst, &bars)
        }
        Err(e) => Err(e),
    }
}

pub fn descend_to_minimal(inst: &JointInstance, cap: usize) -> Result<Descent> {
    descend_to_minimal_with(inst, cap, &MinimalityOptions::default())
}

/// Iterates `G ← p∗ ∗ G` until the verdict is MINIMAL, at most `cap` times.
/// Every step is checked to stay in the joint set and to go down.
pub fn descend_to_minimal_with(inst: &JointInstance, cap: usize, opts: &MinimalityOptions) -> Result<Descent> {
    let mut cur = inst.clone();
    let mut history = Vec::new();
    let mut steps = 0;
    loop {
        let verdict = is_minimal_with(&cur, opts)?;
        let decision = verdict.decision;
        history.push(verdict);
        let status = match decision {
            Decision::Minimal => Some(DescentStatus::Converged),
            Decision::Boundary => Some(DescentStatus::Boundary),
            Decision::NotMinimal if steps >= cap => Some(DescentStatus::NotConverged),
            Decision::NotMinimal => None,
        };
        if let Some(status) = status {
            return Ok(Descent {
                status,
                joint: cur.joint().clone(),
                steps,
                history,
            });
        }
        let k = step_kernel(&cur, opts)?;
        let next = cur.with_joint(k.apply(cur.joint())?)?;
        if is_postprocessing_of(next.joint(), cur.joint(), cur.tol())?.is_none() {
            return Err(Error::Numerical("descent step is not a post-processing".into()));
        }
        cur = next;
        steps += 1;
    }
}
