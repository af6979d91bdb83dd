use thiserror::Error;

use crate::kernel::Enclosure;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("malformed rational {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not reach width {target} within depth cap {cap} (tail bound {tail})")]
    Convergence {
        target: String,
        cap: usize,
        tail: String,
    },

    #[error("Bernoulli index {requested} exceeds cap {cap}")]
    Resource { requested: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no witness found for derivative order {order} below the domain end")]
    WitnessSearch { order: usize },

    #[error("sign of derivative order {order} indeterminate at {point}; best bracket {bracket}")]
    Indeterminate {
        order: usize,
        point: String,
        bracket: Box<Enclosure>,
    },

    #[error("zero bracket stayed below x0 after {escalations} refinements")]
    RefinementExhausted { escalations: usize },

    #[error("certificate check failed: {0}")]
    Invariant(String),
}

impl Error {
    /// True for failures of the certification machinery itself, as opposed
    /// to bad input.
    pub fn is_certification_failure(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::Resource { .. }
                | Error::WitnessSearch { .. }
                | Error::Indeterminate { .. }
                | Error::RefinementExhausted { .. }
                | Error::Invariant(_)
        )
    }
}
