#![allow(dead_code)]

use jointmin::linalg::CMatrix;
use jointmin::qubit::{bloch_matrix, bloch_to_observable, BlochObservable, QubitInstance};
use jointmin::{Effect, JointInstance, Observable, OutcomeSet, Tolerance};
use num_complex::Complex64;

pub const A: [f64; 3] = [0.3, 0.0, 0.0];
pub const B: [f64; 3] = [0.0, 0.3, 0.0];

pub fn unbiased(g: [f64; 3], gamma: f64) -> QubitInstance {
    QubitInstance { alpha: 1.0, a: A, beta: 1.0, b: B, gamma, g }
}

pub fn f1_min() -> QubitInstance {
    unbiased([0.15, 0.15, 0.0], 0.5)
}

pub fn f1_nonmin() -> QubitInstance {
    unbiased([0.15, -0.03, 0.0], 0.5)
}

pub fn f1_indep() -> QubitInstance {
    unbiased([0.1, 0.1, 0.1], 0.5)
}

pub fn sign_set() -> OutcomeSet {
    OutcomeSet::new(["+", "-"]).unwrap()
}

/// `T = (I + ½σ₃)/2`; `G = (T/2, (I−T)/2, (I−T)/2, T/2)` over trivial marginals.
pub fn example_trivial() -> JointInstance {
    let t = bloch_matrix(1.0, &[0.0, 0.0, 0.5]);
    let it = bloch_matrix(1.0, &[0.0, 0.0, -0.5]);
    let half = |m: &CMatrix| Effect::new(m * Complex64::new(0.5, 0.0)).unwrap();
    let g = Observable::new(
        OutcomeSet::product(&[sign_set(), sign_set()]).unwrap(),
        vec![half(&t), half(&it), half(&it), half(&t)],
    )
    .unwrap();
    let triv = bloch_to_observable(&BlochObservable::unbiased([0.0; 3])).unwrap();
    JointInstance::new(vec![triv.clone(), triv], g, Tolerance::default()).unwrap()
}

pub fn diag(d: &[f64]) -> Effect {
    Effect::from_real_diagonal(d)
}

pub fn basis4() -> Observable {
    let e = |i: usize| {
        let mut d = [0.0; 4];
        d[i] = 1.0;
        diag(&d)
    };
    Observable::new(OutcomeSet::indexed(4).unwrap(), (0..4).map(e).collect()).unwrap()
}

/// 2-outcome projective observable `(P, I − P)` in dimension 4 with `P`
/// the projection onto the basis vectors in `ones`.
pub fn two_outcome(ones: &[usize]) -> Observable {
    let mut d = [0.0; 4];
    for &i in ones {
        d[i] = 1.0;
    }
    let c: Vec<f64> = d.iter().map(|x| 1.0 - x).collect();
    Observable::new(OutcomeSet::indexed(2).unwrap(), vec![diag(&d), diag(&c)]).unwrap()
}
