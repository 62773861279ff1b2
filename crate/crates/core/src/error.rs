use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("phase winding exceeded the guard of {0} turns")]
    WindingGuardExceeded(u64),
    #[error("truncation did not converge: {0}")]
    TruncationNotConverged(String),
    #[error("endpoint classification is indeterminate (tail ratio {0:.3})")]
    IndeterminateClassification(f64),
    #[error("Hilbert-Schmidt norm exceeds ceiling {0}")]
    DivergentNorm(f64),
    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),
    #[error("found {found} roots, expected {expected}")]
    RootCountMismatch { found: usize, expected: usize },
    #[error("denominator 1 - gamma vanishes at index {0}")]
    DenominatorBlowup(usize),
    #[error("rejection sampler stalled after {0} proposals")]
    RejectionStall(u64),
    #[error("window mismatch: {0}")]
    WindowMismatch(String),
    #[error("counts still change when the horizon doubles ({0} vs {1})")]
    HorizonTooShort(i64, i64),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Short variant name, used by the CLI when reporting failures.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::WindingGuardExceeded(_) => "WindingGuardExceeded",
            Error::TruncationNotConverged(_) => "TruncationNotConverged",
            Error::IndeterminateClassification(_) => "IndeterminateClassification",
            Error::DivergentNorm(_) => "DivergentNorm",
            Error::DegenerateMeasure(_) => "DegenerateMeasure",
            Error::RootCountMismatch { .. } => "RootCountMismatch",
            Error::DenominatorBlowup(_) => "DenominatorBlowup",
            Error::RejectionStall(_) => "RejectionStall",
            Error::WindowMismatch(_) => "WindowMismatch",
            Error::HorizonTooShort(..) => "HorizonTooShort",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
