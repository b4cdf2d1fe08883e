use std::fmt::Write as _;

use serde::Serialize;

use super::bloch::{joint_positivity, lin3, BlochObservable, JointParams, Vec3};
use super::closed_form::{unbiased_decision, vectors_independent};
use crate::error::{Error, Result};
use crate::minimality::Decision;
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CellVerdict {
    Invalid,
    Minimal,
    NotMinimal,
    Boundary,
}

impl CellVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CellVerdict::Invalid => "INVALID",
            CellVerdict::Minimal => "MINIMAL",
            CellVerdict::NotMinimal => "NOT_MINIMAL",
            CellVerdict::Boundary => "BOUNDARY",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCell {
    pub c1: f64,
    pub c2: f64,
    pub verdict: CellVerdict,
    pub slacks: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionGrid {
    pub grid_n: usize,
    /// Outer loop over `c₁`, inner over `c₂`.
    pub cells: Vec<RegionCell>,
}

pub const DEFAULT_GRID: usize = 201;
pub const DEFAULT_RANGE: (f64, f64) = (-1.0, 2.0);

impl RegionGrid {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("c1,c2,verdict,slack_g1,slack_g2,slack_g3,slack_g4\n");
        for c in &self.cells {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                c.c1,
                c.c2,
                c.verdict.as_str(),
                c.slacks[0],
                c.slacks[1],
                c.slacks[2],
                c.slacks[3]
            );
        }
        s
    }

    pub fn count(&self, v: CellVerdict) -> usize {
        self.cells.iter().filter(|c| c.verdict == v).count()
    }

    pub fn cell(&self, i: usize, j: usize) -> &RegionCell {
        &self.cells[i * self.grid_n + j]
    }
}

fn axis(range: (f64, f64), n: usize, i: usize) -> f64 {
    if i + 1 == n {
        range.1
    } else {
        range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
    }
}

/// Unbiased minimality over the grid `g = c₁a + c₂b`: cells failing
/// positivity by more than `δ` are INVALID, cells within `δ` of a
/// positivity or decision surface are BOUNDARY.
pub fn region_scan(
    a: &Vec3,
    b: &Vec3,
    gamma: f64,
    c1_range: (f64, f64),
    c2_range: (f64, f64),
    grid_n: usize,
    tol: &Tolerance,
) -> Result<RegionGrid> {
    let bad = |r: (f64, f64)| !(r.0.is_finite() && r.1.is_finite() && r.0 < r.1);
    if grid_n < 2 || bad(c1_range) || bad(c2_range) {
        return Err(Error::InvalidInput(format!(
            "degenerate grid: {grid_n} points over {c1_range:?} × {c2_range:?}"
        )));
    }
    if !vectors_independent(a, b, tol) {
        return Err(Error::OutOfScope("a and b are linearly dependent".into()));
    }
    let (oa, ob) = (BlochObservable::unbiased(*a), BlochObservable::unbiased(*b));
    let mut cells = Vec::with_capacity(grid_n * grid_n);
    for i in 0..grid_n {
        let c1 = axis(c1_range, grid_n, i);
        for j in 0..grid_n {
            let c2 = axis(c2_range, grid_n, j);
            let jp = JointParams {
                gamma,
                g: lin3(c1, a, c2, b),
            };
            let slacks = joint_positivity(&oa, &ob, &jp);
            let min_slack = slacks.iter().cloned().fold(f64::INFINITY, f64::min);
            let verdict = if min_slack < -tol.boundary {
                CellVerdict::Invalid
            } else if min_slack <= tol.boundary {
                CellVerdict::Boundary
            } else {
                match unbiased_decision(a, b, &jp, tol)?.decision {
                    Decision::Minimal => CellVerdict::Minimal,
                    Decision::NotMinimal => CellVerdict::NotMinimal,
                    Decision::Boundary => CellVerdict::Boundary,
                }
            };
            cells.push(RegionCell {
                c1,
                c2,
                verdict,
                slacks,
            });
        }
    }
    Ok(RegionGrid { grid_n, cells })
}
