//! Observables, Markov kernels, joint observables and post-processing
//! equivalence.

mod equivalence;
mod joint;
mod kernel;
mod observable;
mod outcomes;

pub use equivalence::{
    are_equivalent, independence_matrix, is_pairwise_linearly_independent, is_postprocessing_of,
    is_zero_effect, k_system, kernel_preserves_equivalence, pair_linearly_independent,
    pairwise_reduce, PairwiseReduction,
};
pub use joint::{is_joint_observable, joint_from_common, marginal, with_product_structure};
pub use kernel::{compose_kernels, post_process, product_kernel, MarkovKernel};
pub use observable::{validate_observable, Effect, EffectReport, Observable, ValidationReport};
pub use outcomes::OutcomeSet;
