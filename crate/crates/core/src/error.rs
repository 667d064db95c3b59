use std::fmt;

use thiserror::Error;

use crate::atom::{format_set, AtomSet};
use crate::module::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why two modules cannot be composed (or joined).
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CompositionError {
    #[error("output signatures overlap on {}", format_set(.0))]
    OutputClash(AtomSet),
    #[error("hidden atoms {} are used by the other module", format_set(.0))]
    HiddenLeak(AtomSet),
    #[error("MutualDependence({})", format_set(.0))]
    MutualDependence(AtomSet),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{location}: syntax error: {message}")]
    Syntax { location: Location, message: String },

    #[error("invalid module: {}", join_violations(.0))]
    InvalidModule(Vec<Violation>),

    #[error("malformed numeric input at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("module {index} in stream: {source}")]
    Stream {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unsupported feature: {0}")]
    Unsupported(String),

    #[error("desugaring failed: {0}")]
    Desugar(String),

    #[error("actual input {} is not a subset of the input signature", format_set(.0))]
    InputMismatch(AtomSet),

    #[error("signature error: {0}")]
    Signature(String),

    #[error(transparent)]
    Composition(#[from] CompositionError),

    #[error("enumeration cap exceeded: {what} needs {needed} atoms, cap is {cap}")]
    CapExceeded { what: String, needed: usize, cap: usize },

    #[error("not a splitting set: {0}")]
    NotSplittingSet(String),

    #[error("rule is not normal: {0}")]
    NonNormalRule(String),

    #[error("weak equivalence needs modules without input atoms")]
    NonGroundInput,

    #[error("modules do not share the same input/output interface")]
    InterfaceMismatch,

    #[error("atom name collision: {0}")]
    NameCollision(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, needed: usize, cap: usize) -> Error {
        Error::CapExceeded {
            what: what.into(),
            needed,
            cap,
        }
    }
}
