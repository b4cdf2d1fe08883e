//! Dense two-phase simplex with Bland's rule.
//!
//! Free variables are split as `x = x⁺ − x⁻`, inequalities get surplus
//! columns, and every row gets an artificial column for phase one. Systems
//! here are small (tens of rows), so a full tableau is fine.

use super::system::LinearSystem;
use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-10;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    n_cols: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.n_cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes the current objective row over columns `< allowed`.
    fn run(&mut self, allowed: usize, pivots: &mut usize) -> Result<Step> {
        loop {
            let entering = (0..allowed).find(|&j| self.obj[j] < -PIVOT_EPS);
            let Some(c) = entering else {
                return Ok(Step::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-12
                                || (ratio <= br + 1e-12 && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(Step::Unbounded);
            };
            self.pivot(r, c);
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(Error::CyclingGuard(MAX_PIVOTS));
            }
        }
    }
}

/// Maximizes `objective · x` over the system.
pub fn maximize(sys: &LinearSystem, objective: &[f64]) -> Result<LpOutcome> {
    let n = sys.dim();
    if objective.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: objective.len(),
        });
    }
    let n_eq = sys.eq_rows().len();
    let n_in = sys.ineq_rows().len();
    let m = n_eq + n_in;
    let structural = 2 * n + n_in;
    let n_cols = structural + m;

    let mut rows = Vec::with_capacity(m);
    for (k, row) in sys.eq_rows().iter().chain(sys.ineq_rows()).enumerate() {
        let mut t = vec![0.0; n_cols + 1];
        for (j, &a) in row.coeffs.iter().enumerate() {
            t[j] = a;
            t[n + j] = -a;
        }
        if k >= n_eq {
            t[2 * n + (k - n_eq)] = -1.0;
        }
        t[n_cols] = row.rhs;
        if row.rhs < 0.0 {
            for v in t.iter_mut() {
                *v = -*v;
            }
        }
        t[structural + k] = 1.0;
        rows.push(t);
    }
    let bscale = 1.0 + rows.iter().map(|r| r[n_cols].abs()).fold(0.0, f64::max);

    // Phase one: minimize the sum of artificials.
    let mut obj = vec![0.0; n_cols + 1];
    for r in &rows {
        for j in 0..structural {
            obj[j] -= r[j];
        }
        obj[n_cols] -= r[n_cols];
    }
    let mut tab = Tableau {
        rows,
        obj,
        basis: (structural..structural + m).collect(),
        n_cols,
    };
    let mut pivots = 0;
    tab.run(structural, &mut pivots)?;
    let infeasibility = -tab.obj[n_cols];
    if infeasibility > 1e-9 * bscale {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= structural {
            let col = (0..structural)
                .filter(|&j| tab.rows[i][j].abs() > 1e-9)
                .max_by(|&a, &b| tab.rows[i][a].abs().total_cmp(&tab.rows[i][b].abs()));
            match col {
                Some(c) => {
                    tab.pivot(i, c);
                    i += 1;
                }
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    // Phase two: minimize -objective.
    let mut cost = vec![0.0; n_cols];
    for j in 0..n {
        cost[j] = -objective[j];
        cost[n + j] = objective[j];
    }
    let mut obj = vec![0.0; n_cols + 1];
    obj[..n_cols].copy_from_slice(&cost);
    for (r, &b) in tab.rows.iter().zip(&tab.basis) {
        let cb = cost[b];
        if cb != 0.0 {
            for (v, rv) in obj.iter_mut().zip(r) {
                *v -= cb * rv;
            }
        }
    }
    tab.obj = obj;
    if let Step::Unbounded = tab.run(structural, &mut pivots)? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut y = vec![0.0; n_cols];
    for (i, &b) in tab.basis.iter().enumerate() {
        y[b] = tab.rhs(i);
    }
    let x: Vec<f64> = (0..n).map(|j| y[j] - y[n + j]).collect();
    let value = crate::linalg::dot(objective, &x);
    Ok(LpOutcome::Optimal { x, value })
}

/// Phase-one feasibility. Returns a feasible point when one exists.
pub fn lp_feasible(sys: &LinearSystem, tol: f64) -> Result<Option<Vec<f64>>> {
    match maximize(sys, &vec![0.0; sys.dim()])? {
        LpOutcome::Optimal { x, .. } => {
            let (e, i) = sys.residuals(&x);
            if e > tol || i > tol {
                return Err(Error::Numerical(format!(
                    "simplex point has residuals {e:.3e} (eq), {i:.3e} (ineq)"
                )));
            }
            Ok(Some(x))
        }
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Numerical(
            "zero objective reported unbounded".into(),
        )),
    }
}
