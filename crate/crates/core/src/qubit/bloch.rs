use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::minimality::JointInstance;
use crate::observables::{Effect, Observable, OutcomeSet};
use crate::tolerance::Tolerance;

pub type Vec3 = [f64; 3];

pub(crate) fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

pub(crate) fn lin3(ca: f64, a: &Vec3, cb: f64, b: &Vec3) -> Vec3 {
    [ca * a[0] + cb * b[0], ca * a[1] + cb * b[1], ca * a[2] + cb * b[2]]
}

/// `½(s I + v·σ)`.
pub fn bloch_matrix(s: f64, v: &Vec3) -> CMatrix {
    let c = |re: f64, im: f64| Complex64::new(re / 2.0, im / 2.0);
    CMatrix::from_row_slice(
        2,
        2,
        &[c(s + v[2], 0.0), c(v[0], -v[1]), c(v[0], v[1]), c(s - v[2], 0.0)],
    )
}

/// `(tr E, tr(E σ₁), tr(E σ₂), tr(E σ₃))`, inverting [`bloch_matrix`] up to
/// the factor ½.
pub fn bloch_coordinates(e: &CMatrix) -> Result<(f64, Vec3)> {
    if e.shape() != (2, 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: e.nrows(),
        });
    }
    let s = (e[(0, 0)] + e[(1, 1)]).re;
    let v = [
        (e[(0, 1)] + e[(1, 0)]).re,
        (e[(1, 0)] - e[(0, 1)]).im,
        (e[(0, 0)] - e[(1, 1)]).re,
    ];
    Ok((s, v))
}

/// Dichotomic qubit observable `E(+) = ½(α I + a·σ)`, `E(−) = I − E(+)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochObservable {
    pub alpha: f64,
    pub a: Vec3,
}

impl BlochObservable {
    pub fn new(alpha: f64, a: Vec3) -> Self {
        BlochObservable { alpha, a }
    }

    pub fn unbiased(a: Vec3) -> Self {
        Self::new(1.0, a)
    }

    /// `0 ≤ α ≤ 2` and `‖a‖ ≤ min(α, 2 − α)`, within `tol.norm`.
    pub fn check(&self, tol: &Tolerance) -> Result<()> {
        let finite = self.alpha.is_finite() && self.a.iter().all(|v| v.is_finite());
        let bound = self.alpha.min(2.0 - self.alpha);
        if !finite || norm3(&self.a) > bound + tol.norm {
            return Err(Error::InvalidObservable(format!(
                "alpha = {}, |a| = {} exceeds min(alpha, 2 - alpha)",
                self.alpha,
                norm3(&self.a)
            )));
        }
        Ok(())
    }
}

/// Parameters of the joint `G(+,+) = ½(γ I + g·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointParams {
    pub gamma: f64,
    pub g: Vec3,
}

/// The qubit-instance JSON format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitInstance {
    pub alpha: f64,
    pub a: Vec3,
    pub beta: f64,
    pub b: Vec3,
    pub gamma: f64,
    pub g: Vec3,
}

impl QubitInstance {
    pub fn from_parts(a: &BlochObservable, b: &BlochObservable, jp: &JointParams) -> Self {
        QubitInstance {
            alpha: a.alpha,
            a: a.a,
            beta: b.alpha,
            b: b.a,
            gamma: jp.gamma,
            g: jp.g,
        }
    }

    pub fn obs_a(&self) -> BlochObservable {
        BlochObservable::new(self.alpha, self.a)
    }

    pub fn obs_b(&self) -> BlochObservable {
        BlochObservable::new(self.beta, self.b)
    }

    pub fn params(&self) -> JointParams {
        JointParams {
            gamma: self.gamma,
            g: self.g,
        }
    }

    /// Exchanges the roles of the two marginals.
    pub fn swapped(&self) -> Self {
        QubitInstance {
            alpha: self.beta,
            a: self.b,
            beta: self.alpha,
            b: self.a,
            gamma: self.gamma,
            g: self.g,
        }
    }

    /// The general-path instance `(E^{α,a}, E^{β,b}; G)`.
    pub fn joint_instance(&self, tol: &Tolerance) -> Result<JointInstance> {
        let a = bloch_to_observable(&self.obs_a())?;
        let b = bloch_to_observable(&self.obs_b())?;
        let g = joint_from_params(&self.obs_a(), &self.obs_b(), &self.params(), tol)?;
        JointInstance::new(vec![a, b], g, *tol)
    }
}

fn sign_set() -> OutcomeSet {
    OutcomeSet::new(["+", "-"]).expect("two distinct labels")
}

pub fn bloch_to_observable(obs: &BlochObservable) -> Result<Observable> {
    obs.check(&Tolerance::default())?;
    let neg = [-obs.a[0], -obs.a[1], -obs.a[2]];
    Observable::new(
        sign_set(),
        vec![
            Effect::new(bloch_matrix(obs.alpha, &obs.a))?,
            Effect::new(bloch_matrix(2.0 - obs.alpha, &neg))?,
        ],
    )
}

/// `(α, a)` from `A(+)` of a two-outcome qubit observable.
pub fn observable_to_bloch(a: &Observable) -> Result<BlochObservable> {
    if a.len() != 2 {
        return Err(Error::InvalidInput(format!("{} outcomes, expected 2", a.len())));
    }
    let (alpha, v) = bloch_coordinates(a.effect(0).matrix())?;
    Ok(BlochObservable::new(alpha, v))
}

/// `(γ, g)` from `G(+,+)`.
pub fn params_from_joint(g: &Observable) -> Result<JointParams> {
    if g.len() != 4 {
        return Err(Error::InvalidInput(format!("{} outcomes, expected 4", g.len())));
    }
    let (gamma, v) = bloch_coordinates(g.effect(0).matrix())?;
    Ok(JointParams { gamma, g: v })
}

/// Bloch coordinates `(scalar, vector)` of `G(++), G(+−), G(−+), G(−−)`.
pub fn joint_elements(a: &BlochObservable, b: &BlochObservable, jp: &JointParams) -> [(f64, Vec3); 4] {
    let (al, be, ga) = (a.alpha, b.alpha, jp.gamma);
    let g = jp.g;
    [
        (ga, g),
        (al - ga, lin3(1.0, &a.a, -1.0, &g)),
        (be - ga, lin3(1.0, &b.a, -1.0, &g)),
        (
            2.0 + ga - al - be,
            [g[0] - a.a[0] - b.a[0], g[1] - a.a[1] - b.a[1], g[2] - a.a[2] - b.a[2]],
        ),
    ]
}

/// Slacks of `‖g‖ ≤ γ`, `‖a−g‖ ≤ α−γ`, `‖b−g‖ ≤ β−γ`,
/// `‖a+b−g‖ ≤ 2+γ−α−β`, in that order.
pub fn joint_positivity(a: &BlochObservable, b: &BlochObservable, jp: &JointParams) -> [f64; 4] {
    joint_elements(a, b, jp).map(|(s, v)| s - norm3(&v))
}

pub fn joint_from_params(
    a: &BlochObservable,
    b: &BlochObservable,
    jp: &JointParams,
    tol: &Tolerance,
) -> Result<Observable> {
    a.check(tol)?;
    b.check(tol)?;
    let slacks = joint_positivity(a, b, jp);
    let failed: Vec<String> = slacks
        .iter()
        .enumerate()
        .filter(|(_, s)| **s < -tol.norm)
        .map(|(i, s)| format!("(g{}) violated by {:e}", i + 1, -s))
        .collect();
    if !failed.is_empty() {
        return Err(Error::Positivity(failed.join(", ")));
    }
    let effects = joint_elements(a, b, jp)
        .iter()
        .map(|(s, v)| Effect::new(bloch_matrix(*s, v)))
        .collect::<Result<Vec<_>>>()?;
    Observable::new(OutcomeSet::product(&[sign_set(), sign_set()])?, effects)
}

/// `‖a − b‖ + ‖a + b‖ ≤ 2` within `δ`.
pub fn unbiased_compatible(a: &Vec3, b: &Vec3, tol: &Tolerance) -> bool {
    norm3(&lin3(1.0, a, -1.0, b)) + norm3(&lin3(1.0, a, 1.0, b)) <= 2.0 + tol.boundary
}
