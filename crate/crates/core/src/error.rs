use thiserror::Error;

use crate::epistemic::Space;
use crate::model::{Observable, Sign};
use crate::sequences::ContextId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("expected a state on the {expected} space, got one on the {found} space")]
    SpaceMismatch { expected: Space, found: Space },

    #[error("not a probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("non-local setting {0}&{1} has no post-measurement table")]
    UnsupportedNonLocal(Observable, Observable),

    #[error("setting {setting} is not part of the measurement family of context {context}")]
    OutsideContext { context: ContextId, setting: String },

    #[error("observable {observable} of context {context} is never measured in the trace")]
    Unmeasured {
        context: ContextId,
        observable: Observable,
    },

    #[error("observable {observable} read {first} and later {later} at step {step}")]
    Inconsistent {
        observable: Observable,
        first: Sign,
        later: Sign,
        step: usize,
    },

    #[error("trace has no measurement steps")]
    EmptyTrace,

    #[error("sequence length cap must be at least 2, got {0}")]
    LengthCapTooSmall(usize),

    #[error("measurement family is empty")]
    EmptyFamily,

    #[error("context {0} gives different products on different outcome branches")]
    BranchDependentProduct(ContextId),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
