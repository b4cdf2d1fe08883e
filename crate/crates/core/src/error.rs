use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("observable has no outcomes")]
    EmptyOutcomes,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("label sets do not match: {0}")]
    LabelMismatch(String),

    #[error("outcome set has no product structure")]
    NonProduct,

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("invalid Markov kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("linear system has no solution: {0}")]
    Infeasible(String),

    #[error("polyhedron is unbounded: {0}")]
    Unbounded(String),

    #[error("enumeration cap exceeded in {context}: {detail}")]
    CapExceeded { context: String, detail: String },

    #[error("simplex exceeded {0} pivots")]
    CyclingGuard(usize),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("decision paths disagree: {0}")]
    Consistency(String),

    #[error("outside the closed-form scope: {0}")]
    OutOfScope(String),

    #[error("positivity violated: {0}")]
    Positivity(String),
}

impl Error {
    pub(crate) fn cap(context: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::CapExceeded {
            context: context.into(),
            detail: detail.into(),
        }
    }

    /// Whether the error comes from numerics or enumeration budgets rather
    /// than from malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Unbounded(_)
                | Error::CapExceeded { .. }
                | Error::CyclingGuard(_)
                | Error::Numerical(_)
        )
    }
}
