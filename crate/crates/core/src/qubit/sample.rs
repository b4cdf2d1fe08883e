//! Seeded random qubit instances for the cross-validation suites.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::bloch::{
    bloch_matrix, dot3, joint_elements, joint_positivity, lin3, norm3, unbiased_compatible, BlochObservable,
    QubitInstance, Vec3,
};
use super::closed_form::{closed_form_margin, vectors_independent};
use crate::linalg::hs_inner;
use crate::tolerance::Tolerance;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction with norm uniform in `[lo, hi]`.
pub fn random_vector<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Vec3 {
    loop {
        let v: Vec3 = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = norm3(&v);
        if n > 1e-3 && n <= 1.0 {
            let r = rng.gen_range(lo..=hi);
            return v.map(|x| x * r / n);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// `α = β = 1`, `g = c₁a + c₂b`.
    UnbiasedSpan,
    /// `α = β = 1`, `g` generic (so `g, a, b` independent).
    UnbiasedGeneric,
    /// `α, β ∈ [0.6, 1.4]`, `g = c₁a + c₂b`.
    BiasedSpan,
}

fn cos2(a: &Vec3, b: &Vec3) -> f64 {
    dot3(a, b).powi(2) / (dot3(a, a) * dot3(b, b))
}

fn strictly_positive(inst: &QubitInstance) -> bool {
    joint_positivity(&inst.obs_a(), &inst.obs_b(), &inst.params())
        .iter()
        .all(|&s| s > 0.0)
}

/// Rejection sampler: independent `a, b`, compatible marginals and
/// positivity with strict slack.
pub fn random_instance<R: Rng>(rng: &mut R, kind: SampleKind) -> QubitInstance {
    let tol = Tolerance::default();
    loop {
        let (alpha, beta) = match kind {
            SampleKind::BiasedSpan => (rng.gen_range(0.6..=1.4), rng.gen_range(0.6..=1.4)),
            _ => (1.0, 1.0),
        };
        let amax = f64::min(alpha, 2.0 - alpha);
        let bmax = f64::min(beta, 2.0 - beta);
        let a = random_vector(rng, 0.15 * amax, 0.8 * amax);
        let b = random_vector(rng, 0.15 * bmax, 0.8 * bmax);
        if cos2(&a, &b) > 0.95 || !vectors_independent(&a, &b, &tol) {
            continue;
        }
        if kind != SampleKind::BiasedSpan && !unbiased_compatible(&a, &b, &tol) {
            continue;
        }
        let gamma = rng.gen_range(0.02..0.98) * f64::min(alpha, beta);
        let g = match kind {
            SampleKind::UnbiasedGeneric => random_vector(rng, 0.0, gamma),
            _ => lin3(rng.gen_range(-0.5..1.5), &a, rng.gen_range(-0.5..1.5), &b),
        };
        let inst = QubitInstance {
            alpha,
            a,
            beta,
            b,
            gamma,
            g,
        };
        if strictly_positive(&inst) {
            return inst;
        }
    }
}

/// Smallest `1 − ⟨E,F⟩²/(⟨E,E⟩⟨F,F⟩)` over pairs of joint elements,
/// a measure of how far the general path's independence tests are from
/// their threshold.
pub fn min_pair_gram_ratio(inst: &QubitInstance) -> f64 {
    let els: Vec<_> = joint_elements(&inst.obs_a(), &inst.obs_b(), &inst.params())
        .iter()
        .map(|(s, v)| bloch_matrix(*s, v))
        .collect();
    let mut m = f64::INFINITY;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let (n1, n2, c) = (
                hs_inner(&els[i], &els[i]),
                hs_inner(&els[j], &els[j]),
                hs_inner(&els[i], &els[j]),
            );
            if n1 > 0.0 && n2 > 0.0 {
                m = m.min(1.0 - c * c / (n1 * n2));
            }
        }
    }
    m
}

/// Every closed-form decision quantity is more than `10 δ` from its
/// threshold, and every pair of joint elements is either exactly
/// dependent or clearly independent for the general path.
pub fn well_separated(inst: &QubitInstance, tol: &Tolerance) -> bool {
    let margin = closed_form_margin(inst, tol).unwrap_or(0.0);
    let gram = min_pair_gram_ratio(inst);
    margin > 10.0 * tol.boundary && !(1e-12..=1e-4).contains(&gram)
}

/// Point on a minimal dependence line for `(a, b, γ)` with `α = β = 1`,
/// if it satisfies positivity strictly.
pub fn on_dep_line(a: &Vec3, b: &Vec3, gamma: f64, which: usize) -> Option<QubitInstance> {
    let g = match which {
        1 => lin3(gamma, a, 0.0, b),
        2 => lin3(0.0, a, gamma, b),
        5 => lin3(1.0, a, 1.0 - gamma, b),
        6 => lin3(1.0 - gamma, a, 1.0, b),
        _ => return None,
    };
    let inst = QubitInstance {
        alpha: 1.0,
        a: *a,
        beta: 1.0,
        b: *b,
        gamma,
        g,
    };
    strictly_positive(&inst).then_some(inst)
}

/// Unbiased pair used by the dependence-line suites.
pub fn random_unbiased_pair<R: Rng>(rng: &mut R) -> (BlochObservable, BlochObservable) {
    let tol = Tolerance::default();
    loop {
        let a = random_vector(rng, 0.1, 0.6);
        let b = random_vector(rng, 0.1, 0.6);
        if cos2(&a, &b) < 0.95 && vectors_independent(&a, &b, &tol) && unbiased_compatible(&a, &b, &tol) {
            return (BlochObservable::unbiased(a), BlochObservable::unbiased(b));
        }
    }
}
