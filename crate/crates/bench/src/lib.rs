//! Fixtures shared by the benchmarks.

use jointmin::polyhedra::LinearSystem;
use jointmin::qubit::{bloch_matrix, bloch_to_observable, BlochObservable, QubitInstance};
use jointmin::{Effect, JointInstance, Observable, OutcomeSet, Tolerance};

const A: [f64; 3] = [0.3, 0.0, 0.0];
const B: [f64; 3] = [0.0, 0.3, 0.0];

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

pub fn marginal_vectors() -> ([f64; 3], [f64; 3]) {
    (A, B)
}

/// `[0,1]^n` as `x ≥ 0`, `x ≤ 1`.
pub fn cube(n: usize) -> LinearSystem {
    let mut sys = LinearSystem::new(n);
    sys.add_nonnegativity();
    for i in 0..n {
        let mut c = vec![0.0; n];
        c[i] = -1.0;
        sys.add_ineq(c, -1.0);
    }
    sys
}

/// `T = (I + ½σ₃)/2` split over two trivial marginals.
pub fn example_trivial() -> JointInstance {
    let t = Effect::new(bloch_matrix(0.5, &[0.0, 0.0, 0.25])).unwrap();
    let it = Effect::new(bloch_matrix(0.5, &[0.0, 0.0, -0.25])).unwrap();
    let signs = OutcomeSet::new(["+", "-"]).unwrap();
    let g = Observable::new(
        OutcomeSet::product(&[signs.clone(), signs]).unwrap(),
        vec![t.clone(), it.clone(), it, t],
    )
    .unwrap();
    let triv = bloch_to_observable(&BlochObservable::unbiased([0.0; 3])).unwrap();
    JointInstance::new(vec![triv.clone(), triv], g, Tolerance::default()).unwrap()
}
