//! Finite-outcome quantum observables, Markov-kernel post-processing, and
//! decision procedures for post-processing minimality of joint observables.
//!
//! The general procedures live in [`minimality`] and work for any finite
//! family of marginals through polytope vertex and cone ray enumeration
//! ([`polyhedra`]). [`qubit`] carries the closed-form characterization for
//! pairs of dichotomic qubit observables, which the acceptance suite uses as
//! an independent oracle for the general path.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod io;
pub mod linalg;
pub mod minimality;
pub mod observables;
pub mod polyhedra;
pub mod qubit;
pub mod tolerance;

pub use error::{Error, Result};
pub use minimality::{is_minimal, Decision, JointInstance, Method, MinimalityVerdict};
pub use observables::{Effect, MarkovKernel, Observable, OutcomeSet};
pub use polyhedra::LinearSystem;
pub use tolerance::Tolerance;
