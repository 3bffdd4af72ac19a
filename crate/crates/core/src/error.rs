use thiserror::Error;

use crate::rational::{Bound, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("entry {value} lies above the completeness bound {bound}")]
    EntryAboveBound { value: Rational, bound: Bound },

    #[error("multiplicity of {value} must be positive")]
    NonPositiveMultiplicity { value: Rational },

    #[error("scale factor {0} must be positive")]
    NonPositiveScale(Rational),

    /// The truncated spectrum cannot certify a statement about `requested`.
    #[error("{context}: needs completeness up to {requested}, available bound is {available}")]
    BoundExceeded {
        context: String,
        requested: Rational,
        available: Bound,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("isoparametric hypersurfaces have g in {{1, 2, 3, 4, 6}}, got {0}")]
    InvalidG(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("descriptor schema error: {0}")]
    Schema(String),

    #[error("descriptor invariant violated: {0}")]
    InvariantViolation(String),

    #[error("S is only known as an average for {0}")]
    NotConstant(String),

    #[error(transparent)]
    Parse(#[from] crate::parse::ParseError),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn bound_exceeded(
        context: impl Into<String>,
        requested: &Rational,
        available: &Bound,
    ) -> Self {
        Error::BoundExceeded {
            context: context.into(),
            requested: requested.clone(),
            available: available.clone(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
