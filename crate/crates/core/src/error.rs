use thiserror::Error;

use crate::info::{VarSet, VariableId};

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet {0} must have at least one symbol")]
    EmptyAlphabet(&'static str),

    #[error("dense tensor would hold {size} entries, above the limit of {limit}")]
    AlphabetTooLarge { size: usize, limit: usize },

    #[error("dimension mismatch at {path}: expected {expected} entries, found {found}")]
    DimensionMismatch {
        path: String,
        expected: usize,
        found: usize,
    },

    #[error("negative transition probability {value} at [x1,x2,xr1,y1,y2] = {index:?}")]
    NegativeEntry { index: [usize; 5], value: f64 },

    #[error("slice p(.,.|x1,x2,xr1) at {index:?} sums to {sum}, deviation {deviation:e}")]
    SliceSum {
        index: [usize; 3],
        sum: f64,
        deviation: f64,
    },

    #[error("variable {0} is not an axis of the distribution")]
    MissingAxis(VariableId),

    #[error("variable {0} appears on more than one axis")]
    DuplicateAxis(VariableId),

    #[error("variable sets must be disjoint, overlap is {0:?}")]
    OverlappingSets(VarSet),

    #[error("invalid probability mass function: {0}")]
    InvalidPmf(String),

    #[error("information measure evaluated to {0:e} bits, beyond rounding slack")]
    NegativeInformation(f64),

    #[error("parameter vector has {found} entries, layout expects {expected}")]
    ParamLength { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("channel is not semideterministic: p(y1|x1,x2,xr1) is {deviation:e} away from a 0/1 law")]
    NotSemideterministic { deviation: f64 },

    #[error("channel is not degraded: no kernel q(y2|y1,xr1) reproduces the transition law (deviation {deviation:e})")]
    NotDegraded { deviation: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("oracle grid needs {size} evaluations, above the cap of {cap}")]
    GridTooLarge { size: u128, cap: u64 },

    #[error("invalid search configuration: {0}")]
    Config(String),

    #[error("malformed channel file: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by unreadable or syntactically malformed input,
    /// as opposed to well-formed input that fails validation.
    pub fn is_malformed_input(&self) -> bool {
        matches!(self, Error::Json(_) | Error::Io(_))
    }

    /// True when a theorem was requested for a channel outside its class.
    pub fn is_class_mismatch(&self) -> bool {
        matches!(
            self,
            Error::NotSemideterministic { .. } | Error::NotDegraded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
