use serde_json::json;

use super::instance::JointInstance;
use super::kernels::{kg_residual, p_star_with, q_bar_with, q_star_from};
use super::support::{check_support_condition, SupportReport};
use super::systems::build_cone_system;
use super::verdict::{Certificate, Decision, Method, MinimalityVerdict};
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::observables::{is_pairwise_linearly_independent, is_zero_effect, kernel_preserves_equivalence, MarkovKernel};
use crate::polyhedra::{cone_trivial_lp, cone_witness_lp, enumerate_rays_with, EnumerationLimits};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalityOptions {
    /// Run every applicable criterion, not only the deciding one, and
    /// require agreement.
    pub cross_check: bool,
    pub limits: EnumerationLimits,
}

impl Default for MinimalityOptions {
    fn default() -> Self {
        MinimalityOptions {
            cross_check: true,
            limits: EnumerationLimits::default(),
        }
    }
}

/// Per-cone triviality and the first nontrivial cone with a direction.
type ConeScan = (Vec<bool>, Option<(usize, Vec<f64>)>);

pub fn is_minimal(inst: &JointInstance) -> Result<MinimalityVerdict> {
    is_minimal_with(inst, &MinimalityOptions::default())
}

struct KernelPath {
    kernel: MarkovKernel,
    report: SupportReport,
}

/// Cross-check paths may give up on enumeration budgets; the deciding
/// path may not.
fn tolerate(err: Error, primary: bool) -> Result<String> {
    match err {
        Error::CapExceeded { .. } if !primary => Ok(err.to_string()),
        e => Err(e),
    }
}

pub fn is_minimal_with(inst: &JointInstance, opts: &MinimalityOptions) -> Result<MinimalityVerdict> {
    let tol = inst.tol();
    let g = inst.joint();
    let zeros: Vec<usize> = (0..g.len()).filter(|&i| is_zero_effect(g.effect(i), tol)).collect();
    let rows: Vec<Vec<f64>> = (0..g.len())
        .filter(|i| !zeros.contains(i))
        .map(|i| g.effect(i).flatten())
        .collect();
    let independent = rank(&rows, tol.rank) == rows.len();
    let pairwise = is_pairwise_linearly_independent(g, tol);
    let primary = if independent {
        Method::Independent
    } else if pairwise {
        Method::Cones
    } else {
        Method::QStar
    };

    let mut verdict = MinimalityVerdict::new(Decision::Boundary, primary);
    verdict.record("zero_effects", zeros.iter().map(|&i| g.outcomes().label(i)).collect::<Vec<_>>());
    verdict.record("linearly_independent", independent);
    verdict.record("pairwise_linearly_independent", pairwise);
    let mut decisions: Vec<(Method, Decision)> = Vec::new();
    if independent {
        decisions.push((Method::Independent, Decision::Minimal));
    }

    let mut q_path = None;
    if opts.cross_check || primary == Method::QStar {
        let attempt = || -> Result<(KernelPath, Vec<usize>)> {
            let mut bars = Vec::new();
            let mut counts = Vec::new();
            for l in 0..inst.n() {
                let (k, c) = q_bar_with(inst, l, &opts.limits)?;
                bars.push(k);
                counts.push(c);
            }
            let kernel = q_star_from(inst, &bars)?;
            let report = check_support_condition(&kernel, g, tol)?;
            Ok((KernelPath { kernel, report }, counts))
        };
        match attempt() {
            Ok((path, counts)) => {
                verdict.record(
                    "q_star",
                    json!({
                        "decision": path.report.decision,
                        "max_product": path.report.max_product,
                        "vertex_counts": counts,
                    }),
                );
                decisions.push((Method::QStar, path.report.decision));
                q_path = Some(path);
            }
            Err(e) => {
                let why = tolerate(e, primary == Method::QStar)?;
                verdict.record("q_star", json!({ "skipped": why }));
            }
        }
    }

    let mut p_path = None;
    if opts.cross_check {
        let attempt = || -> Result<(KernelPath, usize)> {
            let (kernel, count) = p_star_with(inst, &opts.limits)?;
            let report = check_support_condition(&kernel, g, tol)?;
            Ok((KernelPath { kernel, report }, count))
        };
        match attempt() {
            Ok((path, count)) => {
                verdict.record(
                    "p_star",
                    json!({
                        "decision": path.report.decision,
                        "max_product": path.report.max_product,
                        "vertex_count": count,
                    }),
                );
                decisions.push((Method::PStar, path.report.decision));
                p_path = Some(path);
            }
            Err(e) => {
                let why = tolerate(e, false)?;
                verdict.record("p_star", json!({ "skipped": why }));
            }
        }
    }

    let mut cone_witness = None;
    if pairwise && (opts.cross_check || primary == Method::Cones) {
        let attempt = || -> Result<ConeScan> {
            let mut trivial = Vec::new();
            let mut witness = None;
            for l in 0..inst.n() {
                let sys = build_cone_system(inst, l);
                let rays = enumerate_rays_with(&sys, tol, &opts.limits)?;
                let by_lp = cone_trivial_lp(&sys)?;
                if rays.is_trivial() != by_lp {
                    return Err(Error::Consistency(format!(
                        "cone {l}: ray enumeration says trivial={}, LP says trivial={by_lp}",
                        rays.is_trivial()
                    )));
                }
                trivial.push(by_lp);
                if !by_lp && witness.is_none() {
                    let u = match rays.rays.first() {
                        Some(r) => r.clone(),
                        None => cone_witness_lp(&sys)?
                            .ok_or_else(|| Error::Numerical("nontrivial cone without witness".into()))?,
                    };
                    witness = Some((l, u));
                }
            }
            Ok((trivial, witness))
        };
        match attempt() {
            Ok((trivial, witness)) => {
                let d = if trivial.iter().all(|&t| t) {
                    Decision::Minimal
                } else {
                    Decision::NotMinimal
                };
                verdict.record("cones", json!({ "decision": d, "trivial": trivial }));
                decisions.push((Method::Cones, d));
                cone_witness = witness;
            }
            Err(e) => {
                let why = tolerate(e, primary == Method::Cones)?;
                verdict.record("cones", json!({ "skipped": why }));
            }
        }
    }

    for (i, (m1, d1)) in decisions.iter().enumerate() {
        for (m2, d2) in &decisions[i + 1..] {
            if d1.conflicts_with(*d2) {
                return Err(Error::Consistency(format!(
                    "{m1:?} says {d1}, {m2:?} says {d2}"
                )));
            }
        }
    }
    verdict.decision = decisions
        .iter()
        .find(|(m, _)| *m == primary)
        .map(|(_, d)| *d)
        .ok_or_else(|| Error::Numerical("deciding path produced no result".into()))?;
    verdict.maximal = independent && zeros.is_empty();

    if verdict.decision == Decision::NotMinimal {
        let mut candidates: Vec<MarkovKernel> = Vec::new();
        for path in [&q_path, &p_path].into_iter().flatten() {
            if path.report.decision == Decision::NotMinimal {
                candidates.push(path.kernel.clone());
            }
        }
        if let Some((l, u)) = &cone_witness {
            candidates.push(kernel_from_cone_direction(inst, *l, u)?);
        }
        let cert = candidates
            .into_iter()
            .find_map(|k| verify_certificate(inst, k).transpose())
            .transpose()?
            .ok_or_else(|| Error::Numerical("no verifiable non-minimality certificate".into()))?;
        verdict.certificate = Some(cert);
    }
    Ok(verdict)
}

/// Checks `k ∈ K_G` and that `k` merges two independent effects; returns
/// the assembled certificate or `None` if either check fails.
pub fn verify_certificate(inst: &JointInstance, k: MarkovKernel) -> Result<Option<Certificate>> {
    let tol = inst.tol();
    let residual = kg_residual(inst, &k);
    if residual > tol.norm {
        return Ok(None);
    }
    let report = check_support_condition(&k, inst.joint(), tol)?;
    if report.decision != Decision::NotMinimal || kernel_preserves_equivalence(&k, inst.joint(), tol)? {
        return Ok(None);
    }
    let lower_joint = k.apply(inst.joint())?;
    Ok(report.triple.map(|triple| Certificate {
        kernel: k,
        triple,
        lower_joint,
        kg_residual: residual,
    }))
}

/// Kernel `r(x̃′, x̃) = r_ℓ(π_ℓ x̃′, x̃) ∏_{ℓ′≠ℓ} δ(π_ℓ′ x̃′, π_ℓ′ x̃)` with
/// `r_ℓ = δ + s·u` for a nonzero `u ∈ C_ℓ(G)` (variables `u(x′_ℓ, x̃)` at
/// `x′_ℓ·N + x̃`), scaled so that `max |s·u| = 1/2`.
pub fn kernel_from_cone_direction(inst: &JointInstance, l: usize, u: &[f64]) -> Result<MarkovKernel> {
    let set = inst.outcomes();
    let n_out = set.len();
    let nl = inst.marginal(l).len();
    if u.len() != nl * n_out {
        return Err(Error::DimensionMismatch {
            expected: nl * n_out,
            found: u.len(),
        });
    }
    let umax = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if umax == 0.0 {
        return Err(Error::InvalidInput("zero cone direction".into()));
    }
    let s = 0.5 / umax;
    let coords: Vec<Vec<usize>> = (0..n_out).map(|x| set.coords(x)).collect::<Result<_>>()?;
    let mut v = vec![0.0; n_out * n_out];
    for xp in 0..n_out {
        for x in 0..n_out {
            let others_match = coords[xp]
                .iter()
                .zip(&coords[x])
                .enumerate()
                .all(|(k, (a, b))| k == l || a == b);
            if !others_match {
                continue;
            }
            let xl = coords[xp][l];
            let delta = if xl == coords[x][l] { 1.0 } else { 0.0 };
            v[xp * n_out + x] = (delta + s * u[xl * n_out + x]).max(0.0);
        }
    }
    MarkovKernel::from_vec(set, set, &v, inst.tol())
}
