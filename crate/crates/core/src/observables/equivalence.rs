use nalgebra::DMatrix;
use serde::Serialize;

use super::kernel::MarkovKernel;
use super::observable::{Effect, Observable};
use super::outcomes::OutcomeSet;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::polyhedra::{lp_feasible, LinearSystem};
use crate::tolerance::Tolerance;

fn check_dims(e1: usize, e2: usize) -> Result<()> {
    if e1 == e2 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: e1,
            found: e2,
        })
    }
}

pub fn is_zero_effect(e: &Effect, tol: &Tolerance) -> bool {
    e.hs_norm() <= tol.rank
}

/// Both nonzero and `⟨E1,E1⟩⟨E2,E2⟩ − ⟨E1,E2⟩² > ε_rank ⟨E1,E1⟩⟨E2,E2⟩`.
pub fn pair_linearly_independent(e1: &Effect, e2: &Effect, tol: &Tolerance) -> Result<bool> {
    check_dims(e1.dim(), e2.dim())?;
    if is_zero_effect(e1, tol) || is_zero_effect(e2, tol) {
        return Ok(false);
    }
    let n1 = linalg::hs_inner(e1.matrix(), e1.matrix());
    let n2 = linalg::hs_inner(e2.matrix(), e2.matrix());
    let c = linalg::hs_inner(e1.matrix(), e2.matrix());
    Ok(n1 * n2 - c * c > tol.rank * n1 * n2)
}

/// `m[i][j]` is true iff `A(i)` and `A(j)` are linearly independent.
pub fn independence_matrix(a: &Observable, tol: &Tolerance) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let ind = pair_linearly_independent(a.effect(i), a.effect(j), tol)
                .expect("effects of one observable share a dimension");
            m[i][j] = ind;
            m[j][i] = ind;
        }
    }
    m
}

pub fn is_pairwise_linearly_independent(a: &Observable, tol: &Tolerance) -> bool {
    let m = independence_matrix(a, tol);
    (0..a.len()).all(|i| ((i + 1)..a.len()).all(|j| m[i][j]))
}

/// Result of merging proportional effects.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseReduction {
    pub observable: Observable,
    /// `B = forward ∗ A`.
    pub forward: MarkovKernel,
    /// `A = backward ∗ B`.
    pub backward: MarkovKernel,
    /// Indices of `A` merged into each outcome of `B`.
    pub groups: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = i;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

/// Drops zero effects and sums maximal groups of proportional ones.
pub fn pairwise_reduce(a: &Observable, tol: &Tolerance) -> Result<PairwiseReduction> {
    let n = a.len();
    let nonzero: Vec<usize> = (0..n).filter(|&i| !is_zero_effect(a.effect(i), tol)).collect();
    if nonzero.is_empty() {
        return Err(Error::InvalidObservable("all effects are zero".into()));
    }
    let ind = independence_matrix(a, tol);
    let mut parent: Vec<usize> = (0..n).collect();
    for (k, &i) in nonzero.iter().enumerate() {
        for &j in &nonzero[k + 1..] {
            if !ind[i][j] {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for &i in &nonzero {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => groups[k].push(i),
            None => {
                roots.push(r);
                groups.push(vec![i]);
            }
        }
    }

    let d = a.dim();
    let labels: Vec<String> = groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|&i| a.outcomes().label(i))
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect();
    let effects: Vec<Effect> = groups
        .iter()
        .map(|g| {
            let mut m = CMatrix::zeros(d, d);
            for &i in g {
                m += a.effect(i).matrix();
            }
            Effect::new(m)
        })
        .collect::<Result<_>>()?;
    let b = Observable::new(OutcomeSet::new(labels)?, effects)?;

    let mut fwd = DMatrix::zeros(groups.len(), n);
    let mut bwd = DMatrix::zeros(n, groups.len());
    for x in 0..n {
        match groups.iter().position(|g| g.contains(&x)) {
            Some(k) => fwd[(k, x)] = 1.0,
            None => fwd[(0, x)] = 1.0,
        }
    }
    for (k, g) in groups.iter().enumerate() {
        let bg = b.effect(k).matrix();
        let nb = linalg::hs_inner(bg, bg);
        let lambdas: Vec<f64> = g
            .iter()
            .map(|&x| (linalg::hs_inner(a.effect(x).matrix(), bg) / nb).max(0.0))
            .collect();
        let total: f64 = lambdas.iter().sum();
        for (&x, l) in g.iter().zip(&lambdas) {
            bwd[(x, k)] = l / total;
        }
    }
    let forward = MarkovKernel::new(b.outcomes().clone(), a.outcomes().clone(), fwd, tol)?;
    let backward = MarkovKernel::new(a.outcomes().clone(), b.outcomes().clone(), bwd, tol)?;
    Ok(PairwiseReduction {
        observable: b,
        forward,
        backward,
        groups,
    })
}

/// Whether `p ∗ A ~ A`: no output receives weight above `ε_rank` from two
/// linearly independent effects.
pub fn kernel_preserves_equivalence(p: &MarkovKernel, a: &Observable, tol: &Tolerance) -> Result<bool> {
    p.in_set().expect_same(a.outcomes(), "kernel input vs observable outcomes")?;
    let ind = independence_matrix(a, tol);
    let n = a.len();
    for y in 0..p.out_set().len() {
        for x1 in 0..n {
            for x2 in (x1 + 1)..n {
                if ind[x1][x2] && p.get(y, x1) * p.get(y, x2) > tol.rank {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Constraint system of `K(A, B)`: variables `p(x, y)` at index
/// `x·|Ω_B| + y`; nonnegativity, unit column sums and
/// `Σ_y p(x, y) B(y) = A(x)` in flattened coordinates.
pub fn k_system(a: &Observable, b: &Observable) -> Result<LinearSystem> {
    check_dims(a.dim(), b.dim())?;
    let (na, nb) = (a.len(), b.len());
    let nvar = na * nb;
    let mut sys = LinearSystem::new(nvar);
    sys.add_nonnegativity();
    for y in 0..nb {
        let mut row = vec![0.0; nvar];
        for x in 0..na {
            row[x * nb + y] = 1.0;
        }
        sys.add_eq(row, 1.0);
    }
    let bflat: Vec<Vec<f64>> = b.effects().iter().map(Effect::flatten).collect();
    for x in 0..na {
        let target = a.effect(x).flatten();
        for (c, t) in target.iter().enumerate() {
            let mut row = vec![0.0; nvar];
            for (y, f) in bflat.iter().enumerate() {
                row[x * nb + y] = f[c];
            }
            sys.add_eq(row, *t);
        }
    }
    Ok(sys)
}

/// Decides `A ⪯ B` by LP feasibility of `K(A, B)` and returns a witness.
pub fn is_postprocessing_of(a: &Observable, b: &Observable, tol: &Tolerance) -> Result<Option<MarkovKernel>> {
    let sys = k_system(a, b)?;
    match lp_feasible(&sys, tol.norm)? {
        None => Ok(None),
        Some(x) => {
            let x: Vec<f64> = x.into_iter().map(|v| v.max(0.0)).collect();
            MarkovKernel::from_vec(a.outcomes(), b.outcomes(), &x, tol).map(Some)
        }
    }
}

/// Mutual post-processing.
pub fn are_equivalent(a: &Observable, b: &Observable, tol: &Tolerance) -> Result<bool> {
    Ok(is_postprocessing_of(a, b, tol)?.is_some() && is_postprocessing_of(b, a, tol)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::kernel::post_process;

    fn diag(v: &[f64]) -> Effect {
        Effect::from_real_diagonal(v)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn basis4() -> Observable {
        let e = |i: usize| {
            let mut v = [0.0; 4];
            v[i] = 1.0;
            diag(&v)
        };
        Observable::new(OutcomeSet::indexed(4).unwrap(), (0..4).map(e).collect()).unwrap()
    }

    fn grouping() -> MarkovKernel {
        let b = basis4();
        MarkovKernel::deterministic(&OutcomeSet::indexed(2).unwrap(), b.outcomes(), |y| y % 2).unwrap()
    }

    #[test]
    fn pair_independence_examples() {
        let h = diag(&[0.5, 0.5]);
        assert!(!pair_linearly_independent(&h, &h, &tol()).unwrap());
        assert!(pair_linearly_independent(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), &tol()).unwrap());
        let e = diag(&[0.7, 0.2]);
        let f = diag(&[0.21, 0.06]);
        assert!(!pair_linearly_independent(&e, &f, &tol()).unwrap());
        assert!(pair_linearly_independent(&e, &diag(&[1.0, 0.0, 0.0]), &tol()).is_err());
    }

    #[test]
    fn reduce_fixed_point() {
        let a = basis4();
        let r = pairwise_reduce(&a, &tol()).unwrap();
        assert_eq!(r.observable.effects(), a.effects());
        assert_eq!(r.forward.entries(), &DMatrix::identity(4, 4));
        assert_eq!(r.backward.entries(), &DMatrix::identity(4, 4));
    }

    #[test]
    fn reduce_all_proportional_to_identity() {
        let a = Observable::trivial(2, &[0.5, 0.25, 0.25]).unwrap();
        let r = pairwise_reduce(&a, &tol()).unwrap();
        assert_eq!(r.observable.len(), 1);
        assert!(r.observable.max_distance(&Observable::trivial(2, &[1.0]).unwrap()).unwrap() < 1e-15);
        let back = post_process(&r.backward, &r.observable).unwrap();
        assert!(back.max_distance(&a).unwrap() < 1e-15);
    }

    #[test]
    fn reduce_example_trivial_joint() {
        let t = [0.75, 0.25];
        let it = [0.25, 0.75];
        let half = |v: [f64; 2]| diag(&[v[0] / 2.0, v[1] / 2.0]);
        let g = Observable::new(
            OutcomeSet::new(["++", "+-", "-+", "--"]).unwrap(),
            vec![half(t), half(it), half(it), half(t)],
        )
        .unwrap();
        let r = pairwise_reduce(&g, &tol()).unwrap();
        assert_eq!(r.groups, vec![vec![0, 3], vec![1, 2]]);
        assert_eq!(r.observable.outcomes().labels(), ["++|--", "+-|-+"]);
        let expect = Observable::new(OutcomeSet::indexed(2).unwrap(), vec![diag(&t), diag(&it)]).unwrap();
        assert!(r.observable.max_distance(&expect).unwrap() < 1e-15);
        let fwd = post_process(&r.forward, &g).unwrap();
        assert!(fwd.max_distance(&r.observable).unwrap() < 1e-15);
        let back = post_process(&r.backward, &r.observable).unwrap();
        assert!(back.max_distance(&g).unwrap() < 1e-15);
    }

    #[test]
    fn reduce_drops_zero_effects() {
        let a = Observable::new(
            OutcomeSet::indexed(3).unwrap(),
            vec![diag(&[1.0, 0.0]), diag(&[0.0, 0.0]), diag(&[0.0, 1.0])],
        )
        .unwrap();
        let r = pairwise_reduce(&a, &tol()).unwrap();
        assert_eq!(r.observable.len(), 2);
        assert!(post_process(&r.backward, &r.observable).unwrap().max_distance(&a).unwrap() < 1e-15);
    }

    #[test]
    fn equivalence_preservation() {
        let a = basis4();
        assert!(kernel_preserves_equivalence(&MarkovKernel::identity(a.outcomes()), &a, &tol()).unwrap());
        assert!(!kernel_preserves_equivalence(&grouping(), &a, &tol()).unwrap());
        let perm = MarkovKernel::deterministic(a.outcomes(), a.outcomes(), |y| (y + 1) % 4).unwrap();
        assert!(kernel_preserves_equivalence(&perm, &a, &tol()).unwrap());
    }

    #[test]
    fn postprocessing_order() {
        let a = basis4();
        let b = post_process(&grouping(), &a).unwrap();
        assert!(is_postprocessing_of(&a, &a, &tol()).unwrap().is_some());
        let w = is_postprocessing_of(&b, &a, &tol()).unwrap().unwrap();
        assert!(post_process(&w, &a).unwrap().max_distance(&b).unwrap() < 1e-9);
        assert!(is_postprocessing_of(&a, &b, &tol()).unwrap().is_none());
        let triv = Observable::trivial(4, &[0.3, 0.7]).unwrap();
        assert!(is_postprocessing_of(&triv, &a, &tol()).unwrap().is_some());
    }
}
