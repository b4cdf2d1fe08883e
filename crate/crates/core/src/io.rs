//! JSON formats.
//!
//! Observable: `{"dim": d, "outcomes": [...], "effects": [[[[re, im], ...], ...], ...]}`
//! with an optional `"factors"` list of per-coordinate label lists for
//! product outcome sets.
//! Kernel: `{"out": [...], "in": [...], "entries": [[...], ...]}`, rows
//! indexed by `out`.
//! Linear system: `{"n": n, "eq": [[a..., alpha], ...], "ineq": [...]}`.
//! Joint instance: `{"marginals": [observable...], "joint": observable}`
//! with optional `"tol"`.
//!
//! Floats are written in shortest round-trip form, so parsing an emitted
//! document reproduces every number bit for bit.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::minimality::JointInstance;
use crate::observables::{Effect, MarkovKernel, Observable, OutcomeSet};
use crate::polyhedra::{LinearSystem, Row};
use crate::qubit::QubitInstance;
use crate::tolerance::Tolerance;

#[derive(Serialize, Deserialize)]
struct ObservableJson {
    dim: usize,
    outcomes: Vec<String>,
    effects: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    factors: Option<Vec<Vec<String>>>,
}

impl From<&Observable> for ObservableJson {
    fn from(a: &Observable) -> Self {
        let d = a.dim();
        ObservableJson {
            dim: d,
            outcomes: a.outcomes().labels().to_vec(),
            effects: a
                .effects()
                .iter()
                .map(|e| {
                    (0..d)
                        .map(|i| (0..d).map(|j| [e.matrix()[(i, j)].re, e.matrix()[(i, j)].im]).collect())
                        .collect()
                })
                .collect(),
            factors: a.outcomes().factors().map(<[_]>::to_vec),
        }
    }
}

impl TryFrom<ObservableJson> for Observable {
    type Error = Error;

    fn try_from(j: ObservableJson) -> Result<Self> {
        let d = j.dim;
        if d == 0 {
            return Err(Error::InvalidInput("dim must be positive".into()));
        }
        let effects = j
            .effects
            .iter()
            .map(|rows| {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: rows.len(),
                    });
                }
                let m = CMatrix::from_fn(d, d, |i, k| Complex64::new(rows[i][k][0], rows[i][k][1]));
                if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::InvalidInput("non-finite matrix entry".into()));
                }
                Effect::new(m)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut outcomes = OutcomeSet::new(j.outcomes)?;
        if let Some(f) = j.factors {
            let expected = OutcomeSet::product(
                &f.iter()
                    .map(|l| OutcomeSet::new(l.clone()))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            if !expected.same_labels(&outcomes) {
                return Err(Error::LabelMismatch(
                    "outcome labels are not the row-major product of the factors".into(),
                ));
            }
            outcomes = outcomes.with_factors(f)?;
        }
        Observable::new(outcomes, effects)
    }
}

impl Serialize for Observable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ObservableJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Observable::try_from(ObservableJson::deserialize(d)?).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct KernelJson {
    out: Vec<String>,
    #[serde(rename = "in")]
    inputs: Vec<String>,
    entries: Vec<Vec<f64>>,
}

impl Serialize for MarkovKernel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m = self.entries();
        KernelJson {
            out: self.out_set().labels().to_vec(),
            inputs: self.in_set().labels().to_vec(),
            entries: (0..m.nrows()).map(|i| m.row(i).iter().cloned().collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MarkovKernel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = KernelJson::deserialize(d)?;
        let build = || -> Result<MarkovKernel> {
            let out = OutcomeSet::new(j.out)?;
            let inp = OutcomeSet::new(j.inputs)?;
            if j.entries.len() != out.len() || j.entries.iter().any(|r| r.len() != inp.len()) {
                return Err(Error::InvalidKernel("entries do not match the label sets".into()));
            }
            let m = DMatrix::from_fn(out.len(), inp.len(), |i, k| j.entries[i][k]);
            MarkovKernel::new(out, inp, m, &Tolerance::default())
        };
        build().map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    n: usize,
    #[serde(default)]
    eq: Vec<Vec<f64>>,
    #[serde(default)]
    ineq: Vec<Vec<f64>>,
}

fn split_rows(n: usize, rows: Vec<Vec<f64>>) -> Result<Vec<Row>> {
    rows.into_iter()
        .map(|mut r| {
            if r.len() != n + 1 {
                return Err(Error::DimensionMismatch {
                    expected: n + 1,
                    found: r.len(),
                });
            }
            let rhs = r.pop().expect("nonempty row");
            Ok(Row::new(r, rhs))
        })
        .collect()
}

impl Serialize for LinearSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let join = |rows: &[Row]| -> Vec<Vec<f64>> {
            rows.iter()
                .map(|r| r.coeffs.iter().cloned().chain([r.rhs]).collect())
                .collect()
        };
        SystemJson {
            n: self.dim(),
            eq: join(self.eq_rows()),
            ineq: join(self.ineq_rows()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SystemJson::deserialize(d)?;
        let build = || -> Result<LinearSystem> {
            LinearSystem::from_rows(j.n, split_rows(j.n, j.eq)?, split_rows(j.n, j.ineq)?)
        };
        build().map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    marginals: Vec<Observable>,
    joint: Observable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tol: Option<Tolerance>,
}

impl Serialize for JointInstance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceJson {
            marginals: self.marginals().to_vec(),
            joint: self.joint().clone(),
            tol: Some(*self.tol()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JointInstance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = InstanceJson::deserialize(d)?;
        JointInstance::new(j.marginals, j.joint, j.tol.unwrap_or_default()).map_err(D::Error::custom)
    }
}

/// Input accepted by the minimality check: either an explicit joint
/// instance or a qubit parameter set.
#[derive(Debug, Clone)]
pub enum InstanceInput {
    Joint(Box<JointInstance>),
    Qubit(QubitInstance),
}

/// Distinguishes the two instance formats by their keys.
pub fn parse_instance(text: &str, tol: &Tolerance) -> Result<InstanceInput> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
    if v.get("joint").is_some() {
        let j: InstanceJson = serde_json::from_value(v).map_err(json_err)?;
        let t = j.tol.map(|t| t.with_boundary(tol.boundary)).unwrap_or(*tol);
        Ok(InstanceInput::Joint(Box::new(JointInstance::new(j.marginals, j.joint, t)?)))
    } else if v.get("gamma").is_some() {
        Ok(InstanceInput::Qubit(serde_json::from_value(v).map_err(json_err)?))
    } else {
        Err(Error::InvalidInput(
            "expected a joint instance (\"marginals\", \"joint\") or a qubit instance (\"gamma\", \"g\", ...)".into(),
        ))
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::InvalidInput(format!("JSON: {e}"))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(json_err)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Numerical(format!("JSON encoding: {e}")))
}
