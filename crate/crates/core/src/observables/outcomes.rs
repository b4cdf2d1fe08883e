use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered set of outcome labels, optionally carrying the structure of a
/// Cartesian product `Ω₁ × … × Ωₙ` enumerated in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeSet {
    labels: Vec<String>,
    factors: Option<Vec<Vec<String>>>,
}

impl OutcomeSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyOutcomes);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidInput(format!("duplicate outcome label {l:?}")));
            }
        }
        Ok(OutcomeSet {
            labels,
            factors: None,
        })
    }

    /// Labels `"1"`, …, `"n"`.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    /// Cartesian product; labels are the factor labels joined by `,`.
    pub fn product(factors: &[OutcomeSet]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyOutcomes);
        }
        let mut labels = vec![String::new()];
        for (k, f) in factors.iter().enumerate() {
            let mut next = Vec::with_capacity(labels.len() * f.len());
            for prefix in &labels {
                for l in &f.labels {
                    next.push(if k == 0 {
                        l.clone()
                    } else {
                        format!("{prefix},{l}")
                    });
                }
            }
            labels = next;
        }
        Ok(OutcomeSet {
            labels,
            factors: Some(factors.iter().map(|f| f.labels.clone()).collect()),
        })
    }

    /// Attaches product structure given by `factors` to existing labels.
    pub fn with_factors(mut self, factors: Vec<Vec<String>>) -> Result<Self> {
        let total: usize = factors.iter().map(Vec::len).product();
        if factors.is_empty() || total != self.labels.len() {
            return Err(Error::NonProduct);
        }
        self.factors = Some(factors);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn factors(&self) -> Option<&[Vec<String>]> {
        self.factors.as_deref()
    }

    pub fn same_labels(&self, other: &OutcomeSet) -> bool {
        self.labels == other.labels
    }

    pub(crate) fn expect_same(&self, other: &OutcomeSet, what: &str) -> Result<()> {
        if self.same_labels(other) {
            Ok(())
        } else {
            Err(Error::LabelMismatch(format!(
                "{what}: {:?} vs {:?}",
                self.labels, other.labels
            )))
        }
    }

    pub fn factor_sizes(&self) -> Result<Vec<usize>> {
        self.factors
            .as_ref()
            .map(|f| f.iter().map(Vec::len).collect())
            .ok_or(Error::NonProduct)
    }

    /// Coordinate projection `π_coord(index)`.
    pub fn project(&self, index: usize, coord: usize) -> Result<usize> {
        let sizes = self.factor_sizes()?;
        if coord >= sizes.len() {
            return Err(Error::InvalidInput(format!(
                "coordinate {coord} out of range for {} factors",
                sizes.len()
            )));
        }
        let stride: usize = sizes[coord + 1..].iter().product();
        Ok((index / stride) % sizes[coord])
    }

    /// All coordinates of `index`.
    pub fn coords(&self, index: usize) -> Result<Vec<usize>> {
        let sizes = self.factor_sizes()?;
        let mut out = vec![0; sizes.len()];
        let mut rest = index;
        for k in (0..sizes.len()).rev() {
            out[k] = rest % sizes[k];
            rest /= sizes[k];
        }
        Ok(out)
    }

    pub fn index_of(&self, coords: &[usize]) -> Result<usize> {
        let sizes = self.factor_sizes()?;
        Ok(coords.iter().zip(&sizes).fold(0, |acc, (c, s)| acc * s + c))
    }
}
