use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A self-contained description of a `(G, S, S', n)` instance, written out
/// whenever a step that the theory guarantees fails so the run can be replayed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDump {
    pub group: Vec<usize>,
    pub seq: Vec<u32>,
    pub seq_prime: Option<Vec<u32>>,
    pub n: usize,
    pub mode: Option<String>,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group factor {0}: factors must be at least 1")]
    InvalidFactor(i64),
    #[error("empty factor list")]
    EmptyFactors,
    #[error("operands belong to different groups ({left} vs {right})")]
    MismatchedGroups { left: String, right: String },
    #[error("{0} must be nonempty")]
    Empty(&'static str),
    #[error("{what} = {value} is out of range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("group of order {order} exceeds the cap of {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypotheses unmet: {0}")]
    HypothesesUnmet(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error at {step}: {detail}")]
    Internal {
        step: String,
        detail: String,
        instance: Option<Box<InstanceDump>>,
    },
}

impl Error {
    pub(crate) fn internal(step: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Internal {
            step: step.into(),
            detail: detail.into(),
            instance: None,
        }
    }

    /// Attaches an instance dump to an internal error; other variants pass through.
    pub fn with_instance(self, dump: InstanceDump) -> Self {
        match self {
            Error::Internal {
                step,
                detail,
                instance: None,
            } => Error::Internal {
                step,
                detail,
                instance: Some(Box::new(dump)),
            },
            other => other,
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
