use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants split into input problems (parse/format), mathematical domain
/// violations (the CLI maps these to exit code 3) and internal limits.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("FormatError: {0}")]
    Format(String),
    #[error("NotEven: {0}")]
    NotEven(String),
    #[error("Degenerate: {0}")]
    Degenerate(String),
    #[error("WrongCase: {0}")]
    WrongCase(String),
    #[error("SizeMismatch: {0}")]
    SizeMismatch(String),
    #[error("InvalidGenerator: {0}")]
    InvalidGenerator(String),
    #[error("NotUnimodular: {0}")]
    NotUnimodular(String),
    #[error("NoConsistentIndex: {0}")]
    NoConsistentIndex(String),
    #[error("IndefiniteLattice: {0}")]
    IndefiniteLattice(String),
    #[error("NotPosDef: {0}")]
    NotPosDef(String),
    #[error("NotPosDefSpan: {0}")]
    NotPosDefSpan(String),
    #[error("DegenerateForm: {0}")]
    DegenerateForm(String),
    #[error("NotIsotropic: {0}")]
    NotIsotropic(String),
    #[error("BadDiscriminant: {0}")]
    BadDiscriminant(String),
    #[error("NotInHalfSpace: {0}")]
    NotInHalfSpace(String),
    #[error("BranchAmbiguity: {0}")]
    BranchAmbiguity(String),
    #[error("Overflow: {0}")]
    Overflow(String),
}

impl Error {
    /// Short machine-readable name, as printed on the diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::Format(_) => "FormatError",
            Error::NotEven(_) => "NotEven",
            Error::Degenerate(_) => "Degenerate",
            Error::WrongCase(_) => "WrongCase",
            Error::SizeMismatch(_) => "SizeMismatch",
            Error::InvalidGenerator(_) => "InvalidGenerator",
            Error::NotUnimodular(_) => "NotUnimodular",
            Error::NoConsistentIndex(_) => "NoConsistentIndex",
            Error::IndefiniteLattice(_) => "IndefiniteLattice",
            Error::NotPosDef(_) => "NotPosDef",
            Error::NotPosDefSpan(_) => "NotPosDefSpan",
            Error::DegenerateForm(_) => "DegenerateForm",
            Error::NotIsotropic(_) => "NotIsotropic",
            Error::BadDiscriminant(_) => "BadDiscriminant",
            Error::NotInHalfSpace(_) => "NotInHalfSpace",
            Error::BranchAmbiguity(_) => "BranchAmbiguity",
            Error::Overflow(_) => "Overflow",
        }
    }

    /// True for errors that describe a mathematical domain violation rather
    /// than malformed input.
    pub fn is_math_domain(&self) -> bool {
        !matches!(self, Error::Parse(_) | Error::Format(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
