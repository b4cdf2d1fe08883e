use jointmin::io::{from_json, to_json};
use jointmin::minimality::{is_minimal, JointInstance};
use jointmin::observables::{
    compose_kernels, is_pairwise_linearly_independent, is_postprocessing_of, joint_from_common,
    kernel_preserves_equivalence, marginal, pairwise_reduce, post_process, product_kernel, validate_observable,
};
use jointmin::qubit::sample::{random_instance, seeded_rng, SampleKind};
use jointmin::qubit::{bloch_to_observable, joint_from_params};
use jointmin::{Decision, MarkovKernel, Observable, OutcomeSet, Tolerance};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

/// A random valid 4-outcome qubit joint with product labels.
fn joint(seed: u64) -> Observable {
    let q = random_instance(&mut seeded_rng(seed), SampleKind::UnbiasedGeneric);
    joint_from_params(&q.obs_a(), &q.obs_b(), &q.params(), &tol()).unwrap()
}

fn kernel(out: &OutcomeSet, inp: &OutcomeSet, raw: &[f64]) -> MarkovKernel {
    let (m, n) = (out.len(), inp.len());
    let mut v = raw[..m * n].to_vec();
    for y in 0..n {
        let s: f64 = (0..m).map(|x| v[x * n + y]).sum();
        for x in 0..m {
            v[x * n + y] /= s;
        }
    }
    MarkovKernel::from_vec(out, inp, &v, &tol()).unwrap()
}

fn weights(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, k)
}

fn set(n: usize) -> OutcomeSet {
    OutcomeSet::indexed(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn post_processing_preserves_validity(seed in any::<u64>(), m in 1usize..5, w in weights(16)) {
        let g = joint(seed);
        let p = kernel(&set(m), g.outcomes(), &w);
        let b = post_process(&p, &g).unwrap();
        prop_assert!(validate_observable(&b, &tol()).passed);
    }

    #[test]
    fn composition_is_associative(w1 in weights(9), w2 in weights(9), w3 in weights(12), seed in any::<u64>()) {
        let g = joint(seed);
        let r = kernel(&set(3), g.outcomes(), &w3);
        let q = kernel(&set(3), &set(3), &w2);
        let p = kernel(&set(3), &set(3), &w1);
        let left = compose_kernels(&p, &compose_kernels(&q, &r).unwrap()).unwrap();
        let right = compose_kernels(&compose_kernels(&p, &q).unwrap(), &r).unwrap();
        prop_assert!(left.max_distance(&right) < 1e-12);
        let once = post_process(&compose_kernels(&p, &q).unwrap(), &post_process(&r, &g).unwrap()).unwrap();
        let twice = post_process(&p, &post_process(&q, &post_process(&r, &g).unwrap()).unwrap()).unwrap();
        prop_assert!(once.max_distance(&twice).unwrap() < 1e-12);
    }

    #[test]
    fn pairwise_reduce_round_trips(seed in any::<u64>(), w in weights(24)) {
        // Coarse-grain to 3 outcomes, then split two of them proportionally.
        let g = joint(seed);
        let p = kernel(&set(3), g.outcomes(), &w);
        let b = post_process(&p, &g).unwrap();
        let halves = MarkovKernel::from_vec(
            &set(6),
            &set(3),
            &[0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.3, 0.0, 0.0, 0.7, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            &tol(),
        )
        .unwrap();
        let a = post_process(&halves, &b).unwrap();
        let r = pairwise_reduce(&a, &tol()).unwrap();
        prop_assert!(is_pairwise_linearly_independent(&r.observable, &tol()));
        prop_assert!(post_process(&r.forward, &a).unwrap().max_distance(&r.observable).unwrap() < 1e-9);
        prop_assert!(post_process(&r.backward, &r.observable).unwrap().max_distance(&a).unwrap() < 1e-9);
    }

    #[test]
    fn joint_from_common_has_declared_marginals(seed in any::<u64>(), w1 in weights(8), w2 in weights(12)) {
        let c = joint(seed);
        let k1 = kernel(&set(2), c.outcomes(), &w1);
        let k2 = kernel(&set(3), c.outcomes(), &w2);
        let g = joint_from_common(&c, &[k1.clone(), k2.clone()], &tol()).unwrap();
        prop_assert!(marginal(&g, 0).unwrap().max_distance(&post_process(&k1, &c).unwrap()).unwrap() < 1e-9);
        prop_assert!(marginal(&g, 1).unwrap().max_distance(&post_process(&k2, &c).unwrap()).unwrap() < 1e-9);
        let p = product_kernel(&[k1, k2]).unwrap();
        for y in 0..p.in_set().len() {
            let s: f64 = (0..p.out_set().len()).map(|x| p.get(x, y)).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn equivalence_preserving_kernels_are_invertible(seed in any::<u64>(), perm in Just([2usize, 0, 3, 1]), split in 0.05f64..0.95) {
        let g = joint(seed);
        let p = MarkovKernel::deterministic(g.outcomes(), g.outcomes(), |y| perm[y]).unwrap();
        prop_assert!(kernel_preserves_equivalence(&p, &g, &tol()).unwrap());
        prop_assert!(is_postprocessing_of(&g, &post_process(&p, &g).unwrap(), &tol()).unwrap().is_some());
        let mut v = vec![0.0; 8 * 4];
        for y in 0..4 {
            v[(2 * y) * 4 + y] = split;
            v[(2 * y + 1) * 4 + y] = 1.0 - split;
        }
        let fine = MarkovKernel::from_vec(&set(8), g.outcomes(), &v, &tol()).unwrap();
        prop_assert!(kernel_preserves_equivalence(&fine, &g, &tol()).unwrap());
        prop_assert!(is_postprocessing_of(&g, &post_process(&fine, &g).unwrap(), &tol()).unwrap().is_some());
    }

    #[test]
    fn qubit_marginals_round_trip(seed in any::<u64>(), biased in any::<bool>()) {
        let kind = if biased { SampleKind::BiasedSpan } else { SampleKind::UnbiasedSpan };
        let q = random_instance(&mut seeded_rng(seed), kind);
        let g = joint_from_params(&q.obs_a(), &q.obs_b(), &q.params(), &tol()).unwrap();
        prop_assert!(marginal(&g, 0).unwrap().max_distance(&bloch_to_observable(&q.obs_a()).unwrap()).unwrap() < 1e-9);
        prop_assert!(marginal(&g, 1).unwrap().max_distance(&bloch_to_observable(&q.obs_b()).unwrap()).unwrap() < 1e-9);
    }

    #[test]
    fn observable_json_is_exact(seed in any::<u64>()) {
        let g = joint(seed);
        let back: Observable = from_json(&to_json(&g).unwrap()).unwrap();
        prop_assert_eq!(back.max_distance(&g).unwrap(), 0.0);
        prop_assert_eq!(back.outcomes().factors(), g.outcomes().factors());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn certificates_lie_strictly_below(seed in any::<u64>()) {
        let q = random_instance(&mut seeded_rng(seed), SampleKind::UnbiasedSpan);
        let inst: JointInstance = q.joint_instance(&tol()).unwrap();
        let v = is_minimal(&inst).unwrap();
        if v.decision == Decision::NotMinimal {
            let c = v.certificate.unwrap();
            prop_assert!(c.kg_residual <= 1e-9);
            prop_assert!(is_postprocessing_of(inst.joint(), &c.lower_joint, &tol()).unwrap().is_none());
        }
    }
}
