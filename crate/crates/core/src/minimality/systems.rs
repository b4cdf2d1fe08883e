use super::instance::JointInstance;
use crate::error::Result;
use crate::observables::{k_system, Effect, Observable};
use crate::polyhedra::LinearSystem;

/// `K(A, B)`: kernels `p` with `p ∗ B = A`, variables `p(x, y)` at
/// `x·|Ω_B| + y`.
pub fn build_k_system(a: &Observable, b: &Observable) -> Result<LinearSystem> {
    k_system(a, b)
}

/// `K_G`: kernels `p` on `Ω̃` with `p ∗ G` a joint observable of the same
/// marginals. Variables `p(x̃′, x̃)` at `x̃′·N + x̃`.
pub fn build_kg_system(inst: &JointInstance) -> LinearSystem {
    let n_out = inst.outcomes().len();
    let nvar = n_out * n_out;
    let mut sys = LinearSystem::new(nvar);
    sys.add_nonnegativity();
    for x in 0..n_out {
        let mut row = vec![0.0; nvar];
        for xp in 0..n_out {
            row[xp * n_out + x] = 1.0;
        }
        sys.add_eq(row, 1.0);
    }
    let gflat: Vec<Vec<f64>> = inst.joint().effects().iter().map(Effect::flatten).collect();
    for (l, a) in inst.marginals().iter().enumerate() {
        for (xl, e) in a.effects().iter().enumerate() {
            let target = e.flatten();
            for (c, t) in target.iter().enumerate() {
                let mut row = vec![0.0; nvar];
                for xp in (0..n_out).filter(|&xp| inst.project(xp, l) == xl) {
                    for (x, f) in gflat.iter().enumerate() {
                        row[xp * n_out + x] = f[c];
                    }
                }
                sys.add_eq(row, *t);
            }
        }
    }
    sys
}

/// Homogeneous cone `C_ℓ(G)` over `u(x′_ℓ, x̃)` at `x′_ℓ·N + x̃`:
/// `Σ_x̃ u(x′_ℓ, x̃) G(x̃) = 0`, `Σ_{x′_ℓ} u(x′_ℓ, x̃) = 0`, and
/// `u ≤ 0` where `x′_ℓ = π_ℓ(x̃)`, `u ≥ 0` elsewhere.
pub fn build_cone_system(inst: &JointInstance, l: usize) -> LinearSystem {
    let n_out = inst.outcomes().len();
    let nl = inst.marginal(l).len();
    let nvar = nl * n_out;
    let mut sys = LinearSystem::new(nvar);
    let gflat: Vec<Vec<f64>> = inst.joint().effects().iter().map(Effect::flatten).collect();
    let d2 = gflat[0].len();
    for xl in 0..nl {
        for c in 0..d2 {
            let mut row = vec![0.0; nvar];
            for (x, f) in gflat.iter().enumerate() {
                row[xl * n_out + x] = f[c];
            }
            sys.add_eq(row, 0.0);
        }
    }
    for x in 0..n_out {
        let mut row = vec![0.0; nvar];
        for xl in 0..nl {
            row[xl * n_out + x] = 1.0;
        }
        sys.add_eq(row, 0.0);
    }
    for xl in 0..nl {
        for x in 0..n_out {
            let mut row = vec![0.0; nvar];
            row[xl * n_out + x] = if inst.project(x, l) == xl { -1.0 } else { 1.0 };
            sys.add_ineq(row, 0.0);
        }
    }
    sys
}
