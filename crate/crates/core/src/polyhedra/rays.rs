use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::reduce::{affine_reduce, normalized_rows, Reduction};
use super::simplex::{maximize, LpOutcome};
use super::subsets::for_each_independent_subset;
use super::system::LinearSystem;
use super::vertices::EnumerationLimits;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, null_and_row_space};
use crate::tolerance::Tolerance;

const RAY_DEDUP_TOL: f64 = 1e-7;

/// Extreme rays of a homogeneous system, each of unit Euclidean norm.
///
/// `lineality` holds an orthonormal basis of the largest linear subspace
/// inside the cone; the rays generate the cone modulo that subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaySet {
    pub n: usize,
    pub rays: Vec<Vec<f64>>,
    pub lineality: Vec<Vec<f64>>,
}

impl RaySet {
    /// The cone is `{0}`.
    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }
}

fn require_homogeneous(sys: &LinearSystem) -> Result<()> {
    if sys.is_homogeneous() {
        Ok(())
    } else {
        Err(Error::InvalidInput(
            "ray enumeration needs zero right-hand sides".into(),
        ))
    }
}

pub fn enumerate_rays(sys: &LinearSystem, tol: &Tolerance) -> Result<RaySet> {
    enumerate_rays_with(sys, tol, &EnumerationLimits::default())
}

/// For every subset of inequality rows whose equality version has rank
/// `n − 1`, intersects the solution line with the cone and keeps one unit
/// generator per nontrivial intersection. Works in the equality-reduced,
/// lineality-free subspace.
pub fn enumerate_rays_with(
    sys: &LinearSystem,
    tol: &Tolerance,
    limits: &EnumerationLimits,
) -> Result<RaySet> {
    require_homogeneous(sys)?;
    let n = sys.dim();
    let red = match affine_reduce(sys, tol)? {
        Reduction::Affine(r) => r,
        Reduction::Empty { .. } => {
            return Err(Error::Numerical(
                "homogeneous equalities reported inconsistent".into(),
            ))
        }
    };
    let dim = red.reduced_dim();
    let mut out = RaySet {
        n,
        rays: Vec::new(),
        lineality: Vec::new(),
    };
    if dim == 0 {
        return Ok(out);
    }
    let ineq = red.system.ineq_rows();
    let a = DMatrix::from_fn(ineq.len(), dim, |i, j| ineq[i].coeffs[j]);
    let (lin, span) = if ineq.is_empty() {
        (DMatrix::identity(dim, dim), DMatrix::zeros(dim, 0))
    } else {
        null_and_row_space(&a, tol.rank)
    };
    for col in lin.column_iter() {
        let z: Vec<f64> = col.iter().cloned().collect();
        out.lineality.push(unit(red.embed_direction(&z)));
    }
    let pointed = span.ncols();
    if pointed == 0 {
        return Ok(out);
    }

    // Rows in coordinates of the lineality-free subspace.
    let projected = &a * &span;
    let rows: Vec<super::system::Row> = (0..projected.nrows())
        .map(|i| {
            super::system::Row::new(projected.row(i).iter().cloned().collect(), 0.0)
        })
        .collect();
    let (rows, _) = normalized_rows(&rows, tol);
    limits.check("ray enumeration", pointed, rows.len(), pointed - 1)?;
    let pairs: Vec<(Vec<f64>, f64)> = rows.iter().map(|r| (r.coeffs.clone(), 0.0)).collect();

    let lift = |d: &[f64]| -> Vec<f64> {
        let w: Vec<f64> = (0..dim)
            .map(|i| (0..pointed).map(|j| span[(i, j)] * d[j]).sum())
            .collect();
        unit(red.embed_direction(&w))
    };

    for_each_independent_subset(&pairs, pointed, pointed - 1, tol.rank, |basis| {
        let d = basis.complement_direction();
        let inside = |v: &[f64]| rows.iter().all(|r| dot(&r.coeffs, v) >= -tol.norm);
        let neg: Vec<f64> = d.iter().map(|x| -x).collect();
        let candidate = match (inside(&d), inside(&neg)) {
            (true, false) => d,
            (false, true) => neg,
            _ => return,
        };
        let x = lift(&candidate);
        if !ray_satisfies(sys, &x, tol) {
            return;
        }
        let seen = out.rays.iter().any(|r| {
            r.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() <= RAY_DEDUP_TOL
        });
        if !seen {
            out.rays.push(x);
        }
    });
    Ok(out)
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let nrm = norm(&v);
    v.into_iter().map(|x| x / nrm).collect()
}

fn ray_satisfies(sys: &LinearSystem, x: &[f64], tol: &Tolerance) -> bool {
    sys.eq_rows()
        .iter()
        .all(|r| r.eval(x).abs() <= tol.norm * (1.0 + norm(&r.coeffs)))
        && sys
            .ineq_rows()
            .iter()
            .all(|r| r.eval(x) >= -tol.norm * (1.0 + norm(&r.coeffs)))
}

/// Largest `|x_i|` over the cone intersected with the box `[-1, 1]ⁿ`,
/// with the maximizing point. The value is 0 for the trivial cone and 1
/// otherwise (any nonzero cone point rescales to touch the box).
fn box_extent(sys: &LinearSystem) -> Result<(f64, Vec<f64>)> {
    let n = sys.dim();
    let mut boxed = sys.clone();
    for i in 0..n {
        let mut c = vec![0.0; n];
        c[i] = -1.0;
        boxed.add_ineq(c.clone(), -1.0);
        c[i] = 1.0;
        boxed.add_ineq(c, -1.0);
    }
    let mut best = (0.0, vec![0.0; n]);
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut obj = vec![0.0; n];
            obj[i] = sign;
            match maximize(&boxed, &obj)? {
                LpOutcome::Optimal { x, value } => {
                    if value > best.0 {
                        best = (value, x);
                    }
                }
                LpOutcome::Infeasible => {
                    return Err(Error::Numerical("cone reported infeasible".into()))
                }
                LpOutcome::Unbounded => {
                    return Err(Error::Numerical("boxed cone reported unbounded".into()))
                }
            }
        }
    }
    Ok(best)
}

/// LP decision of `cone = {0}`: maximize `±x_i` over the cone within the
/// unit box for every coordinate.
pub fn cone_trivial_lp(sys: &LinearSystem) -> Result<bool> {
    require_homogeneous(sys)?;
    Ok(box_extent(sys)?.0 < 0.5)
}

/// A nonzero cone point in the unit box, if the cone is nontrivial.
pub fn cone_witness_lp(sys: &LinearSystem) -> Result<Option<Vec<f64>>> {
    require_homogeneous(sys)?;
    let (v, x) = box_extent(sys)?;
    Ok((v >= 0.5).then_some(x))
}

/// Recession cone of an inequality-only system is `{0}`.
pub(crate) fn recession_is_trivial_lp(sys: &LinearSystem) -> Result<bool> {
    let mut h = LinearSystem::new(sys.dim());
    for r in sys.eq_rows() {
        h.add_eq(r.coeffs.clone(), 0.0);
    }
    for r in sys.ineq_rows() {
        h.add_ineq(r.coeffs.clone(), 0.0);
    }
    cone_trivial_lp(&h)
}

/// Whether the homogeneous system admits only `x = 0`.
///
/// Decided by ray enumeration and cross-checked against the LP extent
/// test; disagreement is an error.
pub fn cone_is_trivial(sys: &LinearSystem, tol: &Tolerance) -> Result<bool> {
    let rays = enumerate_rays(sys, tol)?;
    let by_rays = rays.is_trivial();
    let by_lp = cone_trivial_lp(sys)?;
    if by_rays != by_lp {
        return Err(Error::Consistency(format!(
            "ray enumeration says trivial={by_rays}, LP says trivial={by_lp}"
        )));
    }
    Ok(by_rays)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn diagonal_ray() {
        let mut s = LinearSystem::new(2);
        s.add_nonnegativity().add_eq(vec![1.0, -1.0], 0.0);
        let r = enumerate_rays(&s, &tol()).unwrap();
        assert_eq!(r.rays.len(), 1);
        let h = 1.0 / 2f64.sqrt();
        assert!((r.rays[0][0] - h).abs() < 1e-12 && (r.rays[0][1] - h).abs() < 1e-12);
        assert!(r.lineality.is_empty());
    }

    #[test]
    fn pinched_line_is_trivial() {
        let mut s = LinearSystem::new(1);
        s.add_ineq(vec![1.0], 0.0).add_ineq(vec![-1.0], 0.0);
        let r = enumerate_rays(&s, &tol()).unwrap();
        assert!(r.is_trivial());
        assert!(cone_is_trivial(&s, &tol()).unwrap());
    }

    #[test]
    fn octant_has_three_rays() {
        let mut s = LinearSystem::new(3);
        s.add_nonnegativity();
        let mut r = enumerate_rays(&s, &tol()).unwrap().rays;
        r.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(r.len(), 3);
        for (i, ray) in r.iter().enumerate() {
            for (j, x) in ray.iter().enumerate() {
                assert!((x - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn equality_zero_is_trivial() {
        let mut s = LinearSystem::new(1);
        s.add_eq(vec![1.0], 0.0);
        assert!(cone_is_trivial(&s, &tol()).unwrap());
    }

    #[test]
    fn quadrant_is_not_trivial() {
        let mut s = LinearSystem::new(2);
        s.add_nonnegativity();
        assert!(!cone_is_trivial(&s, &tol()).unwrap());
    }

    #[test]
    fn half_plane_reports_lineality() {
        let mut s = LinearSystem::new(2);
        s.add_ineq(vec![1.0, 0.0], 0.0);
        let r = enumerate_rays(&s, &tol()).unwrap();
        assert_eq!(r.lineality.len(), 1);
        assert!(r.lineality[0][0].abs() < 1e-12);
        assert_eq!(r.rays.len(), 1);
        assert!(!cone_is_trivial(&s, &tol()).unwrap());
    }

    #[test]
    fn rejects_inhomogeneous() {
        let mut s = LinearSystem::new(1);
        s.add_ineq(vec![1.0], 1.0);
        assert!(enumerate_rays(&s, &tol()).is_err());
    }
}
