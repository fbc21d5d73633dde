use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// The first broken axiom found by a validator, with the offending witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub witness: String,
}

impl Violation {
    pub fn new(rule: &'static str, witness: impl Into<String>) -> Self {
        Violation {
            rule,
            witness: witness.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.witness)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("malformed chain complex: {0}")]
    MalformedComplex(String),
    #[error("not a cycle map: {0}")]
    NotACycleMap(String),
    #[error("validation failed: {0}")]
    Invalid(Violation),
    #[error("degree {degree} out of range (available up to {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("index {index} out of range for {context} (bound {bound})")]
    IndexOutOfRange {
        context: &'static str,
        index: usize,
        bound: usize,
    },
    #[error("groupoid mismatch: {0}")]
    GroupoidMismatch(String),
    #[error("lift failed: {0}")]
    LiftFailed(String),
    #[error("triangle identity failed: {0}")]
    TriangleIdentity(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unresolved reference: {0}")]
    Unresolved(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Invalid(v)
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
