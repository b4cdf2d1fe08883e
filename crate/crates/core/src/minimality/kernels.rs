use super::instance::JointInstance;
use super::systems::{build_k_system, build_kg_system};
use crate::error::{Error, Result};
use crate::observables::{product_kernel, MarkovKernel, OutcomeSet};
use crate::polyhedra::{enumerate_vertices_with, EnumerationLimits, LinearSystem};
use crate::tolerance::Tolerance;

/// Barycenter of the vertices of a kernel polytope, with the vertex count.
fn vertex_average(
    sys: &LinearSystem,
    out_set: &OutcomeSet,
    in_set: &OutcomeSet,
    tol: &Tolerance,
    limits: &EnumerationLimits,
) -> Result<(MarkovKernel, usize)> {
    let vs = enumerate_vertices_with(sys, tol, limits)?;
    let center = vs
        .barycenter()
        .ok_or_else(|| Error::Numerical("kernel polytope reported empty".into()))?;
    let center: Vec<f64> = center.into_iter().map(|v| v.max(0.0)).collect();
    let k = MarkovKernel::from_vec(out_set, in_set, &center, tol)?;
    Ok((k, vs.len()))
}

/// `p∗`: average of the vertices of `K_G`.
pub fn p_star(inst: &JointInstance) -> Result<MarkovKernel> {
    Ok(p_star_with(inst, &EnumerationLimits::default())?.0)
}

pub fn p_star_with(inst: &JointInstance, limits: &EnumerationLimits) -> Result<(MarkovKernel, usize)> {
    let sys = build_kg_system(inst);
    let set = inst.outcomes();
    vertex_average(&sys, set, set, inst.tol(), limits)
}

/// `q̄_ℓ`: average of the vertices of `K(A_ℓ, G)`; `l` is 0-based.
pub fn q_bar(inst: &JointInstance, l: usize) -> Result<MarkovKernel> {
    Ok(q_bar_with(inst, l, &EnumerationLimits::default())?.0)
}

pub fn q_bar_with(inst: &JointInstance, l: usize, limits: &EnumerationLimits) -> Result<(MarkovKernel, usize)> {
    let a = inst.marginals().get(l).ok_or_else(|| {
        Error::InvalidInput(format!("marginal {l} of {}", inst.n()))
    })?;
    let sys = build_k_system(a, inst.joint())?;
    vertex_average(&sys, a.outcomes(), inst.outcomes(), inst.tol(), limits)
}

/// `q∗(x̃′, x̃) = ∏_ℓ q̄_ℓ(π_ℓ(x̃′), x̃)`, checked to lie in `K_G`.
pub fn q_star(inst: &JointInstance) -> Result<MarkovKernel> {
    let bars = (0..inst.n())
        .map(|l| q_bar(inst, l))
        .collect::<Result<Vec<_>>>()?;
    q_star_from(inst, &bars)
}

pub fn q_star_from(inst: &JointInstance, bars: &[MarkovKernel]) -> Result<MarkovKernel> {
    let q = product_kernel(bars)?;
    let set = inst.outcomes().clone();
    q.out_set().expect_same(&set, "product of marginal sets vs joint outcomes")?;
    let q = q.with_sets(set.clone(), set)?;
    let residual = kg_residual(inst, &q);
    if residual > inst.tol().norm {
        return Err(Error::Numerical(format!(
            "q∗ misses K_G by {residual:e}"
        )));
    }
    Ok(q)
}

/// Largest violation of the `K_G` constraints by `k`.
pub fn kg_residual(inst: &JointInstance, k: &MarkovKernel) -> f64 {
    let (eq, ineq) = build_kg_system(inst).residuals(&k.to_vec());
    eq.max(ineq)
}
