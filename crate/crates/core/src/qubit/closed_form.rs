use serde::{Deserialize, Serialize};

use super::bloch::{dot3, joint_elements, joint_positivity, lin3, norm3, BlochObservable, JointParams, QubitInstance, Vec3};
use crate::error::{Error, Result};
use crate::minimality::{
    is_minimal, kernel_from_cone_direction, verify_certificate, Certificate, Decision, JointInstance, Method,
    MinimalityVerdict,
};
use crate::tolerance::Tolerance;

/// `g ≈ c₁ a + c₂ b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpanCoefficients {
    pub c1: f64,
    pub c2: f64,
    /// `‖g − c₁a − c₂b‖`.
    pub residual: f64,
}

/// Relative Gram determinant test for two 3-vectors.
pub fn vectors_independent(a: &Vec3, b: &Vec3, tol: &Tolerance) -> bool {
    let (aa, bb, ab) = (dot3(a, a), dot3(b, b), dot3(a, b));
    aa > 0.0 && bb > 0.0 && aa * bb - ab * ab > tol.rank * aa * bb
}

/// Solves the Gram system for `(c₁, c₂)`; `Ok(None)` when `g` is outside
/// the span of `a, b` (residual above `ε_rank ‖g‖`).
pub fn span_coefficients(g: &Vec3, a: &Vec3, b: &Vec3, tol: &Tolerance) -> Result<Option<SpanCoefficients>> {
    if !vectors_independent(a, b, tol) {
        return Err(Error::OutOfScope("a and b are linearly dependent".into()));
    }
    let (aa, bb, ab) = (dot3(a, a), dot3(b, b), dot3(a, b));
    let (ag, bg) = (dot3(a, g), dot3(b, g));
    let det = aa * bb - ab * ab;
    let c1 = (bb * ag - ab * bg) / det;
    let c2 = (aa * bg - ab * ag) / det;
    let r = lin3(c1, a, c2, b);
    let residual = norm3(&[g[0] - r[0], g[1] - r[1], g[2] - r[2]]);
    Ok((residual <= tol.rank * norm3(g)).then_some(SpanCoefficients { c1, c2, residual }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WVector {
    pub w_pp: f64,
    pub w_pm: f64,
    pub w_mp: f64,
    pub w_mm: f64,
}

impl WVector {
    pub fn as_array(&self) -> [f64; 4] {
        [self.w_pp, self.w_pm, self.w_mp, self.w_mm]
    }
}

/// Generator of the solution line of the homogeneous qubit system.
pub fn w_vector(c1: f64, c2: f64, alpha: f64, beta: f64, gamma: f64) -> WVector {
    WVector {
        w_pp: (2.0 - alpha) * c1 + (2.0 - beta) * c2 + gamma - 2.0,
        w_pm: (2.0 - alpha) * c1 - beta * c2 + gamma,
        w_mp: -alpha * c1 + (2.0 - beta) * c2 + gamma,
        w_mm: -alpha * c1 - beta * c2 + gamma,
    }
}

/// MINIMAL iff `w(++)w(−−) > 0` or `w(+−)w(−+) > 0`, with products within
/// `δ` of zero left undecided.
pub fn wmin_condition(w: &WVector, boundary: f64) -> Decision {
    let p1 = w.w_pp * w.w_mm;
    let p2 = w.w_pm * w.w_mp;
    if p1 > boundary || p2 > boundary {
        Decision::Minimal
    } else if p1.abs() <= boundary || p2.abs() <= boundary {
        Decision::Boundary
    } else {
        Decision::NotMinimal
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepCondition {
    /// `G(++) ∝ G(+−)`: `g = (γ/α) a`.
    Dep1,
    /// `G(++) ∝ G(−+)`: `g = (γ/β) b`.
    Dep2,
    /// `G(++) ∝ G(−−)`: `g = γ(a + b)/(α + β − 2)`.
    Dep3,
    /// `G(+−) ∝ G(−+)`: `g = ((γ − β)a + (γ − α)b)/(α − β)`.
    Dep4,
    /// `G(+−) ∝ G(−−)`: `g = a + (α − γ)b/(2 − β)`.
    Dep5,
    /// `G(−+) ∝ G(−−)`: `g = (β − γ)a/(2 − α) + b`.
    Dep6,
}

impl DepCondition {
    pub fn implies_minimal(self) -> bool {
        !matches!(self, DepCondition::Dep3 | DepCondition::Dep4)
    }
}

/// `(condition, c₁ target, c₂ target)` for the conditions whose guards
/// hold; guards are compared with `δ`.
fn dep_targets(alpha: f64, beta: f64, gamma: f64, boundary: f64) -> Vec<(DepCondition, f64, f64)> {
    let mut out = Vec::new();
    if alpha.abs() > boundary {
        out.push((DepCondition::Dep1, gamma / alpha, 0.0));
    }
    if beta.abs() > boundary {
        out.push((DepCondition::Dep2, 0.0, gamma / beta));
    }
    let s = alpha + beta - 2.0;
    if s.abs() > boundary {
        out.push((DepCondition::Dep3, gamma / s, gamma / s));
    }
    if (alpha - beta).abs() > boundary {
        out.push((
            DepCondition::Dep4,
            (gamma - beta) / (alpha - beta),
            (gamma - alpha) / (beta - alpha),
        ));
    }
    if (2.0 - beta).abs() > boundary {
        out.push((DepCondition::Dep5, 1.0, (alpha - gamma) / (2.0 - beta)));
    }
    if (2.0 - alpha).abs() > boundary {
        out.push((DepCondition::Dep6, (beta - gamma) / (2.0 - alpha), 1.0));
    }
    out
}

/// Largest coefficient mismatch against each guarded condition.
pub fn dep_distances(a: &BlochObservable, b: &BlochObservable, jp: &JointParams, c: &SpanCoefficients, tol: &Tolerance) -> Vec<(DepCondition, f64)> {
    dep_targets(a.alpha, b.alpha, jp.gamma, tol.boundary)
        .into_iter()
        .map(|(d, t1, t2)| (d, (c.c1 - t1).abs().max((c.c2 - t2).abs())))
        .collect()
}

/// Conditions satisfied within `δ` in `(c₁, c₂)` coordinates.
pub fn dep_conditions(a: &BlochObservable, b: &BlochObservable, jp: &JointParams, c: &SpanCoefficients, tol: &Tolerance) -> Vec<DepCondition> {
    dep_distances(a, b, jp, c, tol)
        .into_iter()
        .filter(|(_, dist)| *dist <= tol.boundary)
        .map(|(d, _)| d)
        .collect()
}

/// Indices of joint elements `½(s I + v·σ)` with `|s| ≤ δ` and `‖v‖ ≤ δ`.
pub fn zero_elements(a: &BlochObservable, b: &BlochObservable, jp: &JointParams, tol: &Tolerance) -> Vec<usize> {
    joint_elements(a, b, jp)
        .iter()
        .enumerate()
        .filter(|(_, (s, v))| s.abs() <= tol.boundary && norm3(v) <= tol.boundary)
        .map(|(i, _)| i)
        .collect()
}

fn check_scope(a: &BlochObservable, b: &BlochObservable, jp: &JointParams, tol: &Tolerance) -> Result<()> {
    a.check(tol)?;
    b.check(tol)?;
    if !vectors_independent(&a.a, &b.a, tol) {
        return Err(Error::OutOfScope(
            "a and b are linearly dependent; use the general algorithm".into(),
        ));
    }
    let slacks = joint_positivity(a, b, jp);
    if let Some((i, s)) = slacks.iter().enumerate().find(|(_, s)| **s < -tol.norm) {
        return Err(Error::Positivity(format!("(g{}) violated by {:e}", i + 1, -s)));
    }
    Ok(())
}

/// Closed-form verdict without certificate.
pub fn qubit_decision(a: &BlochObservable, b: &BlochObservable, jp: &JointParams, tol: &Tolerance) -> Result<MinimalityVerdict> {
    check_scope(a, b, jp, tol)?;
    let mut v = MinimalityVerdict::new(Decision::Boundary, Method::Independent);
    v.record("positivity_slacks", joint_positivity(a, b, jp));
    let span = span_coefficients(&jp.g, &a.a, &b.a, tol)?;
    let Some(c) = span else {
        v.decision = Decision::Minimal;
        v.maximal = true;
        v.record("span", "NOT_IN_SPAN");
        return Ok(v);
    };
    v.record("span", c);
    let zeros = zero_elements(a, b, jp, tol);
    v.record("zero_elements", &zeros);
    match zeros.len() {
        0 => {}
        1 => {
            v.decision = Decision::Minimal;
            v.method = Method::ZeroElement;
            return Ok(v);
        }
        k => {
            return Err(Error::Consistency(format!(
                "{k} zero elements with linearly independent a, b"
            )))
        }
    }
    let deps = dep_conditions(a, b, jp, &c, tol);
    v.record("dependence", &deps);
    if !deps.is_empty() {
        v.method = Method::Dependence;
        v.decision = if deps.iter().any(|d| d.implies_minimal()) {
            Decision::Minimal
        } else {
            Decision::NotMinimal
        };
        return Ok(v);
    }
    let w = w_vector(c.c1, c.c2, a.alpha, b.alpha, jp.gamma);
    v.record("w", w);
    v.method = Method::WCondition;
    v.decision = wmin_condition(&w, tol.boundary);
    Ok(v)
}

/// Complete closed-form characterization for a pair of dichotomic qubit
/// observables with linearly independent Bloch vectors. NOT_MINIMAL
/// verdicts carry a verified certificate.
pub fn qubit_is_minimal(a: &BlochObservable, b: &BlochObservable, jp: &JointParams, tol: &Tolerance) -> Result<MinimalityVerdict> {
    let mut v = qubit_decision(a, b, jp, tol)?;
    if v.decision == Decision::NotMinimal {
        let inst = QubitInstance::from_parts(a, b, jp).joint_instance(tol)?;
        v.certificate = Some(closed_form_certificate(&inst, a, b, jp, tol)?);
    }
    Ok(v)
}

/// Replays the cone construction with `u_+ = ±w` for whichever marginal
/// admits the sign pattern; falls back to the general path's certificate
/// when `G` has a dependent pair.
fn closed_form_certificate(
    inst: &JointInstance,
    a: &BlochObservable,
    b: &BlochObservable,
    jp: &JointParams,
    tol: &Tolerance,
) -> Result<Certificate> {
    if let Some(c) = span_coefficients(&jp.g, &a.a, &b.a, tol)? {
        let w = w_vector(c.c1, c.c2, a.alpha, b.alpha, jp.gamma).as_array();
        let scale = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        // (++, +−, −+, −−): first coordinate for ℓ = 0, second for ℓ = 1.
        let plus = [[true, true, false, false], [true, false, true, false]];
        for (l, pat) in plus.iter().enumerate() {
            for sigma in [1.0, -1.0] {
                let fits = (0..4).all(|i| {
                    let x = sigma * w[i];
                    if pat[i] {
                        x <= 1e-12 * scale
                    } else {
                        x >= -1e-12 * scale
                    }
                });
                if !fits || scale == 0.0 {
                    continue;
                }
                let mut u = vec![0.0; 8];
                for i in 0..4 {
                    u[i] = sigma * w[i];
                    u[4 + i] = -sigma * w[i];
                }
                let k = kernel_from_cone_direction(inst, l, &u)?;
                if let Some(cert) = verify_certificate(inst, k)? {
                    return Ok(cert);
                }
            }
        }
    }
    is_minimal(inst)?
        .certificate
        .ok_or_else(|| Error::Consistency("closed form says NOT_MINIMAL, general path finds no certificate".into()))
}

/// Unbiased specialization (`α = β = 1`): strips `γ < c₁+c₂ < 2−γ` and
/// `|c₁ − c₂| < γ`, plus the dependence lines.
pub fn unbiased_decision(a: &Vec3, b: &Vec3, jp: &JointParams, tol: &Tolerance) -> Result<MinimalityVerdict> {
    let (oa, ob) = (BlochObservable::unbiased(*a), BlochObservable::unbiased(*b));
    if !vectors_independent(a, b, tol) {
        return Err(Error::OutOfScope("a and b are linearly dependent".into()));
    }
    if !(jp.gamma > 0.0 && jp.gamma < 1.0) {
        return Err(Error::Consistency(format!(
            "gamma = {} outside (0, 1) for an unbiased joint with independent a, b",
            jp.gamma
        )));
    }
    check_scope(&oa, &ob, jp, tol)?;
    let zeros = zero_elements(&oa, &ob, jp, tol);
    if !zeros.is_empty() {
        return Err(Error::Consistency(format!(
            "unbiased joint with independent a, b has zero elements {zeros:?}"
        )));
    }
    let mut v = MinimalityVerdict::new(Decision::Minimal, Method::Independent);
    let Some(c) = span_coefficients(&jp.g, a, b, tol)? else {
        v.maximal = true;
        v.record("span", "NOT_IN_SPAN");
        return Ok(v);
    };
    v.record("span", c);
    let deps = dep_conditions(&oa, &ob, jp, &c, tol);
    v.record("dependence", &deps);
    if deps.iter().any(|d| d.implies_minimal()) {
        v.method = Method::Dependence;
        return Ok(v);
    }
    let (g, d) = (jp.gamma, tol.boundary);
    let s = c.c1 + c.c2;
    let diff = c.c1 - c.c2;
    let margins = [s - g, 2.0 - g - s, g - diff.abs()];
    v.record("wmin2_margins", margins);
    v.method = Method::WCondition;
    v.decision = if (margins[0] > d && margins[1] > d) || margins[2] > d {
        Decision::Minimal
    } else if margins.iter().any(|m| m.abs() <= d) {
        Decision::Boundary
    } else {
        Decision::NotMinimal
    };
    Ok(v)
}

/// [`unbiased_decision`] with a certificate on NOT_MINIMAL.
pub fn unbiased_is_minimal(a: &Vec3, b: &Vec3, jp: &JointParams, tol: &Tolerance) -> Result<MinimalityVerdict> {
    let mut v = unbiased_decision(a, b, jp, tol)?;
    if v.decision == Decision::NotMinimal {
        let (oa, ob) = (BlochObservable::unbiased(*a), BlochObservable::unbiased(*b));
        let inst = QubitInstance::from_parts(&oa, &ob, jp).joint_instance(tol)?;
        v.certificate = Some(closed_form_certificate(&inst, &oa, &ob, jp, tol)?);
    }
    Ok(v)
}

/// Smallest distance of any closed-form decision quantity from its
/// threshold: positivity slacks, zero-element norms, span residual,
/// dependence mismatches and guards, and the `w` products.
pub fn closed_form_margin(inst: &QubitInstance, tol: &Tolerance) -> Result<f64> {
    let (a, b, jp) = (inst.obs_a(), inst.obs_b(), inst.params());
    let mut m = joint_positivity(&a, &b, &jp)
        .iter()
        .fold(f64::INFINITY, |m, s| m.min(s.abs()));
    for (s, v) in joint_elements(&a, &b, &jp) {
        m = m.min(s.abs().max(norm3(&v)));
    }
    let c = match span_coefficients(&jp.g, &a.a, &b.a, tol)? {
        None => return Ok(m),
        Some(c) => c,
    };
    for guard in [a.alpha + b.alpha - 2.0, a.alpha - b.alpha, 2.0 - a.alpha, 2.0 - b.alpha] {
        if guard.abs() > tol.boundary {
            m = m.min(guard.abs());
        }
    }
    for (_, dist) in dep_distances(&a, &b, &jp, &c, tol) {
        if dist > tol.boundary {
            m = m.min(dist);
        }
    }
    let w = w_vector(c.c1, c.c2, a.alpha, b.alpha, jp.gamma);
    m = m.min((w.w_pp * w.w_mm).abs()).min((w.w_pm * w.w_mp).abs());
    Ok(m)
}
