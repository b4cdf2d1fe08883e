use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::observables::{MarkovKernel, Observable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    Minimal,
    NotMinimal,
    /// A strict inequality sits within the boundary band; not decided.
    Boundary,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Minimal => "MINIMAL",
            Decision::NotMinimal => "NOT_MINIMAL",
            Decision::Boundary => "BOUNDARY",
        }
    }

    /// Two decisions conflict when both are definite and differ.
    pub fn conflicts_with(self, other: Decision) -> bool {
        self != Decision::Boundary && other != Decision::Boundary && self != other
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which criterion produced the decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Nonzero effects of `G` are linearly independent.
    Independent,
    /// Triviality of the cones `C_ℓ(G)`.
    Cones,
    /// Support of the averaged `K_G` vertex kernel.
    PStar,
    /// Support of the product of averaged marginal kernels.
    QStar,
    /// Qubit joint with exactly one zero effect.
    ZeroElement,
    /// Qubit pairwise dependence conditions.
    Dependence,
    /// Qubit sign condition on the `w` vector.
    WCondition,
}

/// Outcomes `x̃₁, x̃₂` with linearly independent effects and an output
/// `x̃′` receiving weight from both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triple {
    pub x1: String,
    pub x2: String,
    pub x_prime: String,
    /// `k(x̃′, x̃₁) · k(x̃′, x̃₂)`.
    pub product: f64,
}

/// Evidence for NOT_MINIMAL: `kernel ∈ K_G` merges two independent
/// effects, so `lower_joint = kernel ∗ G` lies strictly below `G`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kernel: MarkovKernel,
    pub triple: Triple,
    pub lower_joint: Observable,
    /// Largest equality residual of `kernel` in the `K_G` system.
    pub kg_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalityVerdict {
    pub decision: Decision,
    pub method: Method,
    pub certificate: Option<Certificate>,
    /// Set when every effect is nonzero and the family is linearly
    /// independent, which also makes `G` maximal.
    #[serde(default)]
    pub maximal: bool,
    #[serde(default)]
    pub trace: BTreeMap<String, serde_json::Value>,
}

impl MinimalityVerdict {
    pub fn new(decision: Decision, method: Method) -> Self {
        MinimalityVerdict {
            decision,
            method,
            certificate: None,
            maximal: false,
            trace: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.trace.insert(key.to_string(), v);
    }
}
