use thiserror::Error;

use crate::field::FieldError;
use crate::groebner::GroebnerError;
use crate::logmonomial::NcError;
use crate::microdiff::MicrodiffError;
use crate::mpoly::ParseError;

/// Every failure the engine can report, with a stable machine-readable kind.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum Error {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Groebner(#[from] GroebnerError),
    #[error("{0}")]
    Field(FieldError),
    #[error("{0}")]
    Microdiff(MicrodiffError),
    #[error("{0}")]
    Nc(#[from] NcError),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Io,
    Syntax,
    UnknownVariable,
    InvalidProblem,
    NotIsolated,
    IrreducibleFactor,
    NonrationalExponent,
    FactorizationLimit,
    PrecisionExhausted,
    NoStabilization,
    Internal,
}

impl ErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::Io => "io",
            ErrorKind::Syntax => "syntax-error",
            ErrorKind::UnknownVariable => "unknown-variable",
            ErrorKind::InvalidProblem => "invalid-problem",
            ErrorKind::NotIsolated => "not-isolated",
            ErrorKind::IrreducibleFactor => "irreducible-factor",
            ErrorKind::NonrationalExponent => "nonrational-exponent",
            ErrorKind::FactorizationLimit => "factorization-limit",
            ErrorKind::PrecisionExhausted => "precision-exhausted",
            ErrorKind::NoStabilization => "no-stabilization",
            ErrorKind::Internal => "internal",
        }
    }

    /// 1 for unusable input, 2 for diagnosed mathematical input outside the
    /// supported class, 3 for internal precision failures.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Io | ErrorKind::Syntax | ErrorKind::UnknownVariable | ErrorKind::InvalidProblem => 1,
            ErrorKind::NotIsolated
            | ErrorKind::IrreducibleFactor
            | ErrorKind::NonrationalExponent
            | ErrorKind::FactorizationLimit => 2,
            ErrorKind::PrecisionExhausted | ErrorKind::NoStabilization | ErrorKind::Internal => 3,
        }
    }
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(ParseError::Syntax { .. }) => ErrorKind::Syntax,
            Error::Parse(ParseError::UnknownVariable { .. }) => ErrorKind::UnknownVariable,
            Error::Groebner(GroebnerError::NotIsolated { .. }) => ErrorKind::NotIsolated,
            Error::Field(e) | Error::Microdiff(MicrodiffError::Field(e)) => match e {
                FieldError::IrreducibleFactor(_) => ErrorKind::IrreducibleFactor,
                FieldError::FactorizationLimit(_) => ErrorKind::FactorizationLimit,
                FieldError::SingularSylvester => ErrorKind::Internal,
            },
            Error::Microdiff(e) => match e {
                MicrodiffError::PrecisionExhausted { .. } => ErrorKind::PrecisionExhausted,
                MicrodiffError::NoStabilization { .. } => ErrorKind::NoStabilization,
                MicrodiffError::NonrationalExponent(_) => ErrorKind::NonrationalExponent,
                MicrodiffError::Field(_) => unreachable!(),
                MicrodiffError::InvalidBlock(_) => ErrorKind::Internal,
            },
            Error::Nc(_) | Error::InvalidProblem(_) => ErrorKind::InvalidProblem,
            Error::Io(_) => ErrorKind::Io,
            Error::Internal(_) => ErrorKind::Internal,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind().exit_code()
    }
}

impl From<FieldError> for Error {
    fn from(e: FieldError) -> Self {
        Error::Field(e)
    }
}

impl From<MicrodiffError> for Error {
    fn from(e: MicrodiffError) -> Self {
        match e {
            MicrodiffError::Field(f) => Error::Field(f),
            other => Error::Microdiff(other),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
