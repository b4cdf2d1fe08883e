//! Minimality of joint observables: the `K_G`, `K(A, B)` and cone systems,
//! the averaged kernels `p∗`, `q̄_ℓ`, `q∗`, and the decision procedure.

mod decide;
mod descend;
mod instance;
mod kernels;
mod support;
mod systems;
mod verdict;

pub use decide::{
    is_minimal, is_minimal_with, kernel_from_cone_direction, verify_certificate, MinimalityOptions,
};
pub use descend::{descend_to_minimal, descend_to_minimal_with, Descent, DescentStatus, DEFAULT_DESCENT_CAP};
pub use instance::JointInstance;
pub use kernels::{kg_residual, p_star, p_star_with, q_bar, q_bar_with, q_star, q_star_from};
pub use support::{check_support_condition, SupportReport};
pub use systems::{build_cone_system, build_k_system, build_kg_system};
pub use verdict::{Certificate, Decision, Method, MinimalityVerdict, Triple};
