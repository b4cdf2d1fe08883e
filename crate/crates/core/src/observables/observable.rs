use num_complex::Complex64;
use serde::Serialize;

use super::outcomes::OutcomeSet;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tolerance::Tolerance;

/// A single POVM element: a Hermitian positive semidefinite matrix.
///
/// Construction only checks that the matrix is square; Hermiticity and
/// positivity are tolerance-dependent and reported by
/// [`validate_observable`].
#[derive(Debug, Clone, PartialEq)]
pub struct Effect(CMatrix);

impl Effect {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "effect must be a nonempty square matrix, got {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Effect(m))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut m = CMatrix::zeros(d, d);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        Effect(m)
    }

    pub fn scaled_identity(dim: usize, c: f64) -> Self {
        Effect(linalg::identity(dim).scale(c))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn hs_norm(&self) -> f64 {
        linalg::hs_norm(&self.0)
    }

    pub fn flatten(&self) -> Vec<f64> {
        linalg::flatten_hermitian(&self.0)
    }
}

/// A finite-outcome observable (POVM): one effect per outcome, summing to
/// the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    outcomes: OutcomeSet,
    effects: Vec<Effect>,
}

impl Observable {
    pub fn new(outcomes: OutcomeSet, effects: Vec<Effect>) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::EmptyOutcomes);
        }
        if outcomes.len() != effects.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} effects",
                outcomes.len(),
                effects.len()
            )));
        }
        let d = effects[0].dim();
        if let Some(e) = effects.iter().find(|e| e.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: e.dim(),
            });
        }
        Ok(Observable { outcomes, effects })
    }

    /// Effects given as matrices, with labels `"1"`, …, `"n"`.
    pub fn from_matrices(matrices: Vec<CMatrix>) -> Result<Self> {
        let outcomes = OutcomeSet::indexed(matrices.len())?;
        let effects = matrices
            .into_iter()
            .map(Effect::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(outcomes, effects)
    }

    /// `weights[i] · I` per outcome.
    pub fn trivial(dim: usize, weights: &[f64]) -> Result<Self> {
        let effects = weights
            .iter()
            .map(|&w| Effect::scaled_identity(dim, w))
            .collect();
        Self::new(OutcomeSet::indexed(weights.len())?, effects)
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn outcomes(&self) -> &OutcomeSet {
        &self.outcomes
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn effect(&self, i: usize) -> &Effect {
        &self.effects[i]
    }

    pub fn with_outcomes(mut self, outcomes: OutcomeSet) -> Result<Self> {
        if outcomes.len() != self.effects.len() {
            return Err(Error::InvalidInput("outcome count changed".into()));
        }
        self.outcomes = outcomes;
        Ok(self)
    }

    /// Largest entrywise distance to `other`, effect by effect.
    pub fn max_distance(&self, other: &Observable) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::InvalidInput(format!(
                "{} vs {} outcomes",
                self.len(),
                other.len()
            )));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .effects
            .iter()
            .zip(&other.effects)
            .map(|(a, b)| linalg::max_abs_entry(&(a.matrix() - b.matrix())))
            .fold(0.0, f64::max))
    }

    pub fn sum(&self) -> CMatrix {
        let mut s = CMatrix::zeros(self.dim(), self.dim());
        for e in &self.effects {
            s += e.matrix();
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectReport {
    pub label: String,
    pub hermiticity_residual: f64,
    pub min_eigenvalue: f64,
    pub hermitian: bool,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub effects: Vec<EffectReport>,
    pub normalization_residual: f64,
    pub normalized: bool,
    pub passed: bool,
}

/// Per-effect Hermiticity and positivity plus normalization.
pub fn validate_observable(a: &Observable, tol: &Tolerance) -> ValidationReport {
    let effects: Vec<EffectReport> = a
        .effects
        .iter()
        .zip(a.outcomes.labels())
        .map(|(e, label)| {
            let herm = linalg::hermiticity_residual(e.matrix());
            let min_eig = linalg::min_eigenvalue(e.matrix());
            EffectReport {
                label: label.clone(),
                hermiticity_residual: herm,
                min_eigenvalue: min_eig,
                hermitian: herm <= tol.herm,
                positive: min_eig >= -tol.pos,
            }
        })
        .collect();
    let residual = linalg::max_abs_entry(&(a.sum() - linalg::identity(a.dim())));
    let normalized = residual <= tol.norm;
    let passed = normalized && effects.iter().all(|e| e.hermitian && e.positive);
    ValidationReport {
        effects,
        normalization_residual: residual,
        normalized,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn z_projectors() -> (CMatrix, CMatrix) {
        (
            CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]),
            CMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(1.0)]),
        )
    }

    #[test]
    fn projective_measurement_passes() {
        let (p, m) = z_projectors();
        let a = Observable::from_matrices(vec![p, m]).unwrap();
        assert!(validate_observable(&a, &Tolerance::default()).passed);
    }

    #[test]
    fn doubled_effect_fails_normalization() {
        let (p, _) = z_projectors();
        let a = Observable::from_matrices(vec![p.clone(), p]).unwrap();
        let r = validate_observable(&a, &Tolerance::default());
        assert!(!r.passed);
        // Sum is I + σ₃ = diag(2, 0): residual 1 entrywise.
        assert!((r.normalization_residual - 1.0).abs() < 1e-15);
    }

    #[test]
    fn negative_effect_fails_positivity() {
        let a = Observable::new(
            OutcomeSet::indexed(2).unwrap(),
            vec![
                Effect::from_real_diagonal(&[1.2, 0.5]),
                Effect::from_real_diagonal(&[-0.2, 0.5]),
            ],
        )
        .unwrap();
        let r = validate_observable(&a, &Tolerance::default());
        assert!(r.normalized && !r.passed && !r.effects[1].positive);
    }

    #[test]
    fn empty_and_mismatched_rejected() {
        assert!(matches!(
            Observable::from_matrices(vec![]),
            Err(Error::EmptyOutcomes)
        ));
        let e = Observable::from_matrices(vec![CMatrix::identity(2, 2), CMatrix::identity(3, 3)]);
        assert!(matches!(e, Err(Error::DimensionMismatch { .. })));
    }
}
