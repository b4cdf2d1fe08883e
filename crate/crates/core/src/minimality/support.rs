use serde::Serialize;

use super::verdict::{Decision, Triple};
use crate::error::Result;
use crate::observables::{independence_matrix, MarkovKernel, Observable};
use crate::tolerance::Tolerance;

/// Outcome of the support test on one kernel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportReport {
    /// MINIMAL when every product is at most `δ`, NOT_MINIMAL above `10δ`,
    /// BOUNDARY in between.
    pub decision: Decision,
    pub max_product: f64,
    /// Pair attaining `max_product`, if any independent pair exists.
    pub triple: Option<Triple>,
}

/// For every `x̃′` and every pair `x̃₁, x̃₂` with linearly independent
/// effects, compares `k(x̃′, x̃₁) k(x̃′, x̃₂)` with `δ`.
pub fn check_support_condition(kernel: &MarkovKernel, g: &Observable, tol: &Tolerance) -> Result<SupportReport> {
    kernel
        .in_set()
        .expect_same(g.outcomes(), "kernel input vs joint outcomes")?;
    let ind = independence_matrix(g, tol);
    let n = g.len();
    let mut best: Option<(f64, usize, usize, usize)> = None;
    for y in 0..kernel.out_set().len() {
        for x1 in 0..n {
            let p1 = kernel.get(y, x1);
            if p1 <= 0.0 {
                continue;
            }
            for x2 in (x1 + 1)..n {
                if !ind[x1][x2] {
                    continue;
                }
                let prod = p1 * kernel.get(y, x2);
                if best.is_none_or(|b| prod > b.0) {
                    best = Some((prod, y, x1, x2));
                }
            }
        }
    }
    let max_product = best.map_or(0.0, |b| b.0);
    let decision = if max_product <= tol.boundary {
        Decision::Minimal
    } else if max_product <= 10.0 * tol.boundary {
        Decision::Boundary
    } else {
        Decision::NotMinimal
    };
    let triple = best.map(|(product, y, x1, x2)| Triple {
        x1: g.outcomes().label(x1).to_string(),
        x2: g.outcomes().label(x2).to_string(),
        x_prime: kernel.out_set().label(y).to_string(),
        product,
    });
    Ok(SupportReport {
        decision,
        max_product,
        triple,
    })
}
