use crate::error::{Error, Result};
use crate::observables::{is_joint_observable, with_product_structure, Observable, OutcomeSet};
use crate::tolerance::Tolerance;

/// A joint observable `G` of marginals `A₁, …, Aₙ`, checked on
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct JointInstance {
    marginals: Vec<Observable>,
    joint: Observable,
    tol: Tolerance,
}

impl JointInstance {
    /// `joint` takes the product structure of the marginals' outcome sets
    /// when it carries none.
    pub fn new(marginals: Vec<Observable>, joint: Observable, tol: Tolerance) -> Result<Self> {
        if !tol.is_valid() {
            return Err(Error::InvalidInput("tolerances must be finite and nonnegative".into()));
        }
        let joint = with_product_structure(&joint, &marginals)?;
        if !is_joint_observable(&joint, &marginals, &tol)? {
            return Err(Error::InvalidInput(
                "joint is not a valid joint observable of the marginals".into(),
            ));
        }
        Ok(JointInstance {
            marginals,
            joint,
            tol,
        })
    }

    /// Same marginals, new joint.
    pub fn with_joint(&self, joint: Observable) -> Result<Self> {
        Self::new(self.marginals.clone(), joint, self.tol)
    }

    pub fn with_tol(&self, tol: Tolerance) -> Result<Self> {
        Self::new(self.marginals.clone(), self.joint.clone(), tol)
    }

    pub fn marginals(&self) -> &[Observable] {
        &self.marginals
    }

    pub fn marginal(&self, l: usize) -> &Observable {
        &self.marginals[l]
    }

    pub fn joint(&self) -> &Observable {
        &self.joint
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    /// Number of marginals `n`.
    pub fn n(&self) -> usize {
        self.marginals.len()
    }

    /// `Ω̃ = Ω₁ × … × Ωₙ`.
    pub fn outcomes(&self) -> &OutcomeSet {
        self.joint.outcomes()
    }

    pub(crate) fn project(&self, index: usize, l: usize) -> usize {
        self.joint
            .outcomes()
            .project(index, l)
            .expect("instance joint carries product structure")
    }
}
