use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid generator name `{0}`")]
    InvalidGeneratorName(String),
    #[error("letter exponent must be +1 or -1, got {0}")]
    InvalidExponent(i64),
}

/// A syntax or semantic error in presentation text, with a 1-based location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected {found}, expected {expected}")]
    Unexpected { found: String, expected: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("ambiguous juxtaposition `{0}`: more than one way to split it into generators")]
    AmbiguousWord(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("exponent out of range: {0}")]
    BadExponent(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relator {index} uses generator `{generator}` which is not declared")]
    UndeclaredGenerator { index: usize, generator: String },
    #[error("generator `{0}` is not part of this presentation")]
    UnknownGenerator(String),
    #[error(
        "no relator isolates `{generator}` (it must occur exactly once); relators containing it: {candidates:?}"
    )]
    NoDefiningRelator { generator: String, candidates: Vec<usize> },
    #[error("relator index {index} out of range ({count} relators)")]
    RelatorIndex { index: usize, count: usize },
    #[error("move does not apply: {0}")]
    MoveMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("factor {factor} refers to relator {index}, but only {count} relators exist")]
    RelatorIndex { factor: usize, index: usize, count: usize },
    #[error("factor {factor} has sign {sign}; expected 1 or -1")]
    BadSign { factor: usize, sign: i8 },
    #[error("step {step} refers to step {refers}, which does not precede it")]
    StepReference { step: usize, refers: usize },
    #[error("dictionary has no entry for generator `{0}`")]
    MissingDictionaryEntry(String),
    #[error("expected {expected} certificates (one per relator), got {got}")]
    CertificateCount { expected: usize, got: usize },
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("corpus file `{file}`: {source}")]
    Parse {
        file: String,
        #[source]
        source: ParseError,
    },
    #[error("corpus file `{file}`: {source}")]
    Json {
        file: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("corpus file `{0}` is not registered")]
    MissingFile(String),
    #[error("scenario `{id}`: {message}")]
    Invalid { id: String, message: String },
}
