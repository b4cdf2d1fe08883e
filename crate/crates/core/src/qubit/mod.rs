//! Closed-form minimality for pairs of dichotomic qubit observables.

mod bloch;
mod closed_form;
mod region;
pub mod sample;

pub use bloch::{
    bloch_coordinates, bloch_matrix, bloch_to_observable, joint_elements, joint_from_params, joint_positivity,
    observable_to_bloch, params_from_joint, unbiased_compatible, BlochObservable, JointParams, QubitInstance, Vec3,
};
pub use closed_form::{
    closed_form_margin, dep_conditions, dep_distances, qubit_decision, qubit_is_minimal, span_coefficients,
    unbiased_decision, unbiased_is_minimal, vectors_independent, w_vector, wmin_condition, zero_elements,
    DepCondition, SpanCoefficients, WVector,
};
pub use region::{region_scan, CellVerdict, RegionCell, RegionGrid, DEFAULT_GRID, DEFAULT_RANGE};

use crate::error::{Error, Result};
use crate::minimality::{is_minimal, MinimalityVerdict};
use crate::tolerance::Tolerance;

/// Closed form and general path on the same instance. Returns both
/// verdicts; a conflicting pair of decisions is an error.
pub fn cross_validate(inst: &QubitInstance, tol: &Tolerance) -> Result<(MinimalityVerdict, MinimalityVerdict)> {
    let closed = qubit_is_minimal(&inst.obs_a(), &inst.obs_b(), &inst.params(), tol)?;
    let general = is_minimal(&inst.joint_instance(tol)?)?;
    if closed.decision.conflicts_with(general.decision) {
        return Err(Error::Consistency(format!(
            "closed form {} vs general {}",
            closed.decision, general.decision
        )));
    }
    Ok((closed, general))
}
