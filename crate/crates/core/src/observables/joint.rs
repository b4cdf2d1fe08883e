use super::kernel::{product_kernel, MarkovKernel};
use super::observable::{validate_observable, Effect, Observable};
use super::outcomes::OutcomeSet;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::tolerance::Tolerance;

/// `A_coord(x) = Σ_{x̃ : π_coord(x̃) = x} G(x̃)`; `coord` is 0-based.
pub fn marginal(g: &Observable, coord: usize) -> Result<Observable> {
    let factors = g.outcomes().factors().ok_or(Error::NonProduct)?;
    let labels = factors
        .get(coord)
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "marginal {coord} requested from {} factors",
                factors.len()
            ))
        })?
        .clone();
    let d = g.dim();
    let mut sums = vec![CMatrix::zeros(d, d); labels.len()];
    for (i, e) in g.effects().iter().enumerate() {
        sums[g.outcomes().project(i, coord)?] += e.matrix();
    }
    Observable::new(
        OutcomeSet::new(labels)?,
        sums.into_iter().map(Effect::new).collect::<Result<_>>()?,
    )
}

/// Gives `g` the product structure of the marginals' outcome sets when it
/// has none, checking that the labels agree.
pub fn with_product_structure(g: &Observable, marginals: &[Observable]) -> Result<Observable> {
    let sets: Vec<OutcomeSet> = marginals.iter().map(|m| m.outcomes().clone()).collect();
    let product = OutcomeSet::product(&sets)?;
    match g.outcomes().factors() {
        Some(f) => {
            let expected: Vec<Vec<String>> = sets.iter().map(|s| s.labels().to_vec()).collect();
            if f != expected.as_slice() {
                return Err(Error::LabelMismatch(format!(
                    "joint factors {f:?} vs marginal labels {expected:?}"
                )));
            }
            Ok(g.clone())
        }
        None => {
            if g.len() != product.len() {
                return Err(Error::LabelMismatch(format!(
                    "{} joint outcomes for a product of size {}",
                    g.len(),
                    product.len()
                )));
            }
            let factors = product.factors().map(<[_]>::to_vec).unwrap_or_default();
            let relabeled = g.outcomes().clone().with_factors(factors)?;
            g.clone().with_outcomes(relabeled)
        }
    }
}

/// `G` validates and every marginal matches `A_ℓ` within `tol.norm`.
pub fn is_joint_observable(g: &Observable, marginals: &[Observable], tol: &Tolerance) -> Result<bool> {
    if marginals.is_empty() {
        return Err(Error::EmptyOutcomes);
    }
    for m in marginals {
        if m.dim() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                found: m.dim(),
            });
        }
    }
    let g = match with_product_structure(g, marginals) {
        Ok(g) => g,
        Err(Error::LabelMismatch(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    if !validate_observable(&g, tol).passed {
        return Ok(false);
    }
    for (l, a) in marginals.iter().enumerate() {
        if marginal(&g, l)?.max_distance(a)? > tol.norm {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `G = (∏ p_ℓ) ∗ C`, with the marginal identity `marginal(G, ℓ) = p_ℓ ∗ C`
/// checked before returning.
pub fn joint_from_common(c: &Observable, kernels: &[MarkovKernel], tol: &Tolerance) -> Result<Observable> {
    let p = product_kernel(kernels)?;
    let g = p.apply(c)?;
    for (l, k) in kernels.iter().enumerate() {
        let expected = k.apply(c)?;
        let dist = marginal(&g, l)?.max_distance(&expected)?;
        if dist > tol.norm {
            return Err(Error::Numerical(format!(
                "marginal {l} of the constructed joint is off by {dist:e}"
            )));
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn diag(v: &[f64]) -> Effect {
        Effect::from_real_diagonal(v)
    }

    fn example_trivial() -> (Observable, Vec<Observable>) {
        // T = (I + σ₃/2)/2 = diag(3/4, 1/4).
        let t = [0.75, 0.25];
        let it = [0.25, 0.75];
        let half = |v: [f64; 2]| diag(&[v[0] / 2.0, v[1] / 2.0]);
        let g = Observable::new(
            OutcomeSet::indexed(4).unwrap(),
            vec![half(t), half(it), half(it), half(t)],
        )
        .unwrap();
        let m = Observable::trivial(2, &[0.5, 0.5]).unwrap();
        (g, vec![m.clone(), m])
    }

    #[test]
    fn trivial_example_is_joint() {
        let (g, m) = example_trivial();
        assert!(is_joint_observable(&g, &m, &Tolerance::default()).unwrap());
        let z = Observable::new(
            OutcomeSet::indexed(2).unwrap(),
            vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])],
        )
        .unwrap();
        assert!(!is_joint_observable(&g, &[z.clone(), z], &Tolerance::default()).unwrap());
    }

    #[test]
    fn product_observable_marginals() {
        let a = [diag(&[1.0, 0.0]), diag(&[0.0, 1.0])];
        let b = [diag(&[0.3, 0.6]), diag(&[0.7, 0.4])];
        let mut effects = Vec::new();
        for x in &a {
            for y in &b {
                effects.push(Effect::new(x.matrix() * y.matrix()).unwrap());
            }
        }
        let s = OutcomeSet::indexed(2).unwrap();
        let g = Observable::new(OutcomeSet::product(&[s.clone(), s]).unwrap(), effects).unwrap();
        let m1 = marginal(&g, 0).unwrap();
        let m2 = marginal(&g, 1).unwrap();
        assert!(m1.max_distance(&Observable::new(m1.outcomes().clone(), a.to_vec()).unwrap()).unwrap() < 1e-15);
        assert!(m2.max_distance(&Observable::new(m2.outcomes().clone(), b.to_vec()).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn uniform_joint_has_trivial_marginals() {
        let s = OutcomeSet::indexed(2).unwrap();
        let g = Observable::new(
            OutcomeSet::product(&[s.clone(), s]).unwrap(),
            vec![Effect::scaled_identity(2, 0.25); 4],
        )
        .unwrap();
        let half = Observable::trivial(2, &[0.5, 0.5]).unwrap();
        assert!(marginal(&g, 0).unwrap().max_distance(&half).unwrap() < 1e-15);
        assert!(matches!(marginal(&half, 0), Err(Error::NonProduct)));
    }

    #[test]
    fn deterministic_kernels_relabel_common() {
        let c = Observable::new(
            OutcomeSet::indexed(4).unwrap(),
            vec![
                diag(&[0.4, 0.1]),
                diag(&[0.1, 0.4]),
                diag(&[0.3, 0.2]),
                diag(&[0.2, 0.3]),
            ],
        )
        .unwrap();
        let two = OutcomeSet::indexed(2).unwrap();
        let p1 = MarkovKernel::deterministic(&two, c.outcomes(), |y| y / 2).unwrap();
        let p2 = MarkovKernel::deterministic(&two, c.outcomes(), |y| y % 2).unwrap();
        let g = joint_from_common(&c, &[p1, p2], &Tolerance::default()).unwrap();
        for i in 0..4 {
            assert_eq!(g.effect(i), c.effect(i));
        }
    }

    #[test]
    fn trivial_common_gives_trivial_joint() {
        let c = Observable::trivial(2, &[0.25; 4]).unwrap();
        let two = OutcomeSet::indexed(2).unwrap();
        let p = MarkovKernel::new(
            two.clone(),
            c.outcomes().clone(),
            DMatrix::from_row_slice(2, 4, &[1.0, 0.5, 0.2, 0.0, 0.0, 0.5, 0.8, 1.0]),
            &Tolerance::default(),
        )
        .unwrap();
        let g = joint_from_common(&c, &[p.clone(), p.clone()], &Tolerance::default()).unwrap();
        for i in 0..4 {
            let (x1, x2) = (i / 2, i % 2);
            let w: f64 = (0..4).map(|y| p.get(x1, y) * p.get(x2, y) / 4.0).sum();
            let e = g.effect(i).matrix();
            assert!((e[(0, 0)] - Complex64::new(w, 0.0)).norm() < 1e-15);
            assert!((e[(1, 1)] - Complex64::new(w, 0.0)).norm() < 1e-15);
        }
    }
}
