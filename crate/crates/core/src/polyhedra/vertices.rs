use serde::{Deserialize, Serialize};

use super::reduce::{affine_reduce, normalized_rows, Reduction};
use super::rays::recession_is_trivial_lp;
use super::simplex::lp_feasible;
use super::subsets::{binomial, for_each_independent_subset};
use super::system::LinearSystem;
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::tolerance::Tolerance;

pub const VERTEX_DEDUP_TOL: f64 = 1e-7;

/// Budget for the combinatorial enumerations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationLimits {
    pub max_dim: usize,
    pub max_ineq: usize,
    pub max_subsets: f64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_dim: 12,
            max_ineq: 40,
            max_subsets: 5e6,
        }
    }
}

impl EnumerationLimits {
    pub(crate) fn check(&self, context: &str, dim: usize, m: usize, k: usize) -> Result<()> {
        if dim > self.max_dim {
            return Err(Error::cap(
                context,
                format!("reduced dimension {dim} exceeds {}", self.max_dim),
            ));
        }
        if m > self.max_ineq {
            return Err(Error::cap(
                context,
                format!("{m} inequalities exceed {}", self.max_ineq),
            ));
        }
        let subsets = binomial(m, k);
        if subsets > self.max_subsets {
            return Err(Error::cap(
                context,
                format!("C({m}, {k}) = {subsets:.0} subsets exceed {:.0}", self.max_subsets),
            ));
        }
        Ok(())
    }
}

/// Extreme points of a polytope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexSet {
    pub n: usize,
    pub vertices: Vec<Vec<f64>>,
    pub dedup_tol: f64,
}

impl VertexSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Uniform average of the vertices.
    pub fn barycenter(&self) -> Option<Vec<f64>> {
        if self.vertices.is_empty() {
            return None;
        }
        let mut c = vec![0.0; self.n];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += vi;
            }
        }
        let k = self.vertices.len() as f64;
        Some(c.into_iter().map(|x| x / k).collect())
    }
}

pub fn enumerate_vertices(sys: &LinearSystem, tol: &Tolerance) -> Result<VertexSet> {
    enumerate_vertices_with(sys, tol, &EnumerationLimits::default())
}

/// Vertices of the bounded polyhedron `sys`, by solving every independent
/// square subset of inequality rows in the affine hull of the equalities
/// and keeping the feasible solutions.
pub fn enumerate_vertices_with(
    sys: &LinearSystem,
    tol: &Tolerance,
    limits: &EnumerationLimits,
) -> Result<VertexSet> {
    let empty = VertexSet {
        n: sys.dim(),
        vertices: Vec::new(),
        dedup_tol: VERTEX_DEDUP_TOL,
    };
    let red = match affine_reduce(sys, tol)? {
        Reduction::Empty { .. } => return Ok(empty),
        Reduction::Affine(r) => r,
    };
    let dim = red.reduced_dim();
    let (rows, violated) = normalized_rows(red.system.ineq_rows(), tol);
    if violated {
        return Ok(empty);
    }
    if dim == 0 {
        let x = red.embed(&[]);
        let mut out = empty;
        if sys.is_satisfied_by(&x, tol.norm) {
            out.vertices.push(x);
        }
        return Ok(out);
    }
    limits.check("vertex enumeration", dim, rows.len(), dim)?;

    let reduced = LinearSystem::from_rows(dim, Vec::new(), rows.clone())?;
    if lp_feasible(&reduced, tol.norm)?.is_none() {
        return Ok(empty);
    }
    if !recession_is_trivial_lp(&reduced)? {
        return Err(Error::Unbounded(
            "a nonzero direction satisfies all homogeneous inequalities".into(),
        ));
    }

    let pairs: Vec<(Vec<f64>, f64)> = rows.into_iter().map(|r| (r.coeffs, r.rhs)).collect();
    let mut out = empty;
    for_each_independent_subset(&pairs, dim, dim, tol.rank, |basis| {
        let z = basis.solution();
        let x = red.embed(&z);
        if !sys.is_satisfied_by(&x, tol.norm) {
            return;
        }
        let seen = out.vertices.iter().any(|v| {
            v.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
                <= VERTEX_DEDUP_TOL
        });
        if !seen {
            out.vertices.push(x);
        }
    });
    Ok(out)
}

/// Active-set rank test: `x` is extreme iff the equalities together with
/// the inequalities active at `x` have rank `n`.
pub fn is_extreme_point(sys: &LinearSystem, x: &[f64], tol: &Tolerance) -> bool {
    let mut active: Vec<Vec<f64>> = sys.eq_rows().iter().map(|r| r.coeffs.clone()).collect();
    for r in sys.ineq_rows() {
        let scale = 1.0 + crate::linalg::norm(&r.coeffs);
        if (r.eval(x) - r.rhs).abs() <= 1e3 * tol.norm * scale {
            active.push(r.coeffs.clone());
        }
    }
    rank(&active, tol.rank) == sys.dim()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
        for p in v.iter_mut() {
            for x in p.iter_mut() {
                *x = (*x * 1e9).round() / 1e9 + 0.0;
            }
        }
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn unit_square() {
        let mut s = LinearSystem::new(2);
        s.add_nonnegativity()
            .add_ineq(vec![-1.0, 0.0], -1.0)
            .add_ineq(vec![0.0, -1.0], -1.0);
        let v = enumerate_vertices(&s, &Tolerance::default()).unwrap();
        assert_eq!(
            sorted(v.vertices),
            vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]
        );
    }

    #[test]
    fn standard_simplex() {
        let mut s = LinearSystem::new(3);
        s.add_nonnegativity().add_eq(vec![1.0, 1.0, 1.0], 1.0);
        let v = enumerate_vertices(&s, &Tolerance::default()).unwrap();
        assert_eq!(
            sorted(v.vertices),
            vec![vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]]
        );
    }

    #[test]
    fn unbounded_is_reported() {
        let mut s = LinearSystem::new(2);
        s.add_nonnegativity();
        assert!(matches!(
            enumerate_vertices(&s, &Tolerance::default()),
            Err(Error::Unbounded(_))
        ));
    }

    #[test]
    fn infeasible_has_no_vertices() {
        let mut s = LinearSystem::new(1);
        s.add_ineq(vec![1.0], 1.0).add_ineq(vec![-1.0], 0.0);
        assert!(enumerate_vertices(&s, &Tolerance::default()).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let mut s = LinearSystem::new(13);
        s.add_nonnegativity();
        let err = enumerate_vertices(&s, &Tolerance::default()).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn point_system() {
        let mut s = LinearSystem::new(2);
        s.add_eq(vec![1.0, 1.0], 1.0).add_eq(vec![1.0, -1.0], 1.0);
        let v = enumerate_vertices(&s, &Tolerance::default()).unwrap();
        assert_eq!(sorted(v.vertices), vec![vec![1.0, 0.0]]);
    }
}
