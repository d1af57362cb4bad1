use thiserror::Error;

use crate::system::LString;

/// Errors raised while parsing, validating or transforming rewrite artifacts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("letter `{0}` declared twice")]
    DuplicateLetter(String),
    #[error("rule `{0}` defined twice")]
    DuplicateRule(String),
    #[error("rule name `{0}` clashes with a letter of the alphabet")]
    NameClash(String),
    #[error("rule `{rule}` uses undeclared letter `{letter}`")]
    UndeclaredLetter { rule: String, letter: String },
    #[error("rule `{0}` has an empty side; ex nihilo and collapsing rules are not allowed")]
    EmptyRuleSide(String),
    #[error("unresolved identifier `{name}` at column {column}")]
    UnresolvedIdentifier { name: String, column: usize },
    #[error("target `{upper_target}` of the upper term does not match source `{lower_source}` of the lower term")]
    CompositionMismatch {
        upper_target: LString,
        lower_source: LString,
    },
    #[error("proof term contains a vertical composition")]
    NotAMultistep,
    #[error("proof term is not reduction-shaped: {0}")]
    NotAReduction(String),
    #[error("invalid multistep reduction: {0}")]
    InvalidReduction(String),
    #[error("occurrence index {0} does not point at a rule occurrence")]
    InvalidOccurrence(usize),
    #[error("target `{left}` does not match source `{right}`")]
    NotComposable { left: LString, right: LString },
    #[error("swap witness does not match the given multisteps")]
    StaleWitness,
    #[error("malformed tragr document: {0}")]
    MalformedDocument(String),
    #[error("not a planar, well-formed tragr: {0}")]
    NotPlanarOrIllFormed(String),
}

impl Error {
    /// Stable diagnostic code, the variant name.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "Syntax",
            Error::InvalidIdentifier(_) => "InvalidIdentifier",
            Error::DuplicateLetter(_) => "DuplicateLetter",
            Error::DuplicateRule(_) => "DuplicateRule",
            Error::NameClash(_) => "NameClash",
            Error::UndeclaredLetter { .. } => "UndeclaredLetter",
            Error::EmptyRuleSide(_) => "EmptyRuleSide",
            Error::UnresolvedIdentifier { .. } => "UnresolvedIdentifier",
            Error::CompositionMismatch { .. } => "CompositionMismatch",
            Error::NotAMultistep => "NotAMultistep",
            Error::NotAReduction(_) => "NotAReduction",
            Error::InvalidReduction(_) => "InvalidReduction",
            Error::InvalidOccurrence(_) => "InvalidOccurrence",
            Error::NotComposable { .. } => "NotComposable",
            Error::StaleWitness => "StaleWitness",
            Error::MalformedDocument(_) => "MalformedDocument",
            Error::NotPlanarOrIllFormed(_) => "NotPlanarOrIllFormed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
