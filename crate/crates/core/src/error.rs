use thiserror::Error;

use crate::model::{Label, NumericExpression, Phenomenon, Role};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("template syntax error at line {line}: {message}")]
    TemplateSyntax { line: usize, message: String },

    #[error("duplicate slot id `{0}`")]
    DuplicateSlot(String),

    #[error("missing anchor declaration")]
    MissingAnchor,

    #[error("template has {found} slots, at least {required} are required")]
    TooFewSlots { found: usize, required: usize },

    #[error("template `{id}` is malformed: {reason}")]
    InvalidTemplate { id: String, reason: String },

    #[error("template `{id}` violates its invariants: {}", violations.join("; "))]
    TemplateViolations { id: String, violations: Vec<String> },

    #[error("no assignment for slot `{0}`")]
    MissingAssignment(String),

    #[error("`{0}` denotes the empty set in the configured domain")]
    EmptyDenotation(NumericExpression),

    #[error("cannot fill the {label} quota: needed {needed}, only {found} realizable")]
    QuotaUnsatisfiable {
        label: Label,
        needed: usize,
        found: usize,
    },

    #[error("template `{template}` has no {role:?} slot")]
    MissingRole { template: String, role: Role },

    #[error("template `{template}` is {found:?}, expected {expected:?}")]
    WrongPhenomenon {
        template: String,
        expected: Phenomenon,
        found: Phenomenon,
    },

    #[error("templates mix phenomena ({0:?} and {1:?})")]
    MixedPhenomena(Phenomenon, Phenomenon),

    #[error("requested {requested} samples but only {available} are available")]
    SampleTooLarge { requested: u64, available: u64 },

    #[error("slot `{slot}` of template `{template}` has {found} candidates, at least 2 are required")]
    TooFewCandidates {
        template: String,
        slot: String,
        found: usize,
    },

    #[error("template `{0}` has no alternate verb")]
    MissingAlternateVerb(String),

    #[error("unknown template `{0}`")]
    UnknownTemplate(String),

    #[error("invalid example id `{0}`")]
    InvalidExampleId(String),

    #[error("{0} is empty")]
    EmptyInput(&'static str),

    #[error("worksheet: {0}")]
    Worksheet(String),

    #[error("split error: {0}")]
    Split(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidConfig(_) | Error::SampleTooLarge { .. } | Error::MixedPhenomena(..) => {
                ErrorKind::Config
            }
            Error::Io(_) => ErrorKind::Io,
            _ => ErrorKind::Data,
        }
    }
}
