use thiserror::Error;

/// Every failure the library can report.
///
/// Variants fall into three groups that the CLI maps onto exit codes: bad
/// input (`is_input_error`), results that are undefined for the given
/// arguments (`is_undefined_result`), and internal consistency failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("bound outside frame: {0}")]
    BoundOutsideFrame(i64),
    #[error("rate does not align with frame: {rate} * {size} is not an integer")]
    RateMisaligned { rate: String, size: i64 },
    #[error("rate must lie in [0, 1], got {0}")]
    RateOutOfRange(String),
    #[error("unknown label {0} in frame")]
    UnknownLabel(i64),
    #[error("frame mismatch: operands live on different frames")]
    FrameMismatch,
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("invalid mass function: {0}")]
    InvalidMass(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unknown outcome {0:?}")]
    UnknownOutcome(String),
    #[error("empty tally: at least one observation count must be positive")]
    EmptyTally,
    #[error("empty hypothesis")]
    EmptyHypothesis,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("focal-set limit exceeded: more than {0} focal sets")]
    FocalLimitExceeded(usize),
    #[error("observation impossible under model: {0:?}")]
    ObservationImpossible(String),
    #[error("incompatible evidence: total conflict in combination")]
    IncompatibleEvidence,
    #[error("undefined support ratio: likelihood of the alternative is zero")]
    UndefinedSupportRatio,
    #[error("weight undefined: both plausibilities are zero")]
    WeightUndefined,
    #[error("no supporting interpretation: weight must be finite and greater than 1")]
    NoSupportingInterpretation,
    #[error("proportionality violated at label {0}")]
    ProportionalityViolated(i64),
}

impl Error {
    /// Malformed or out-of-range user input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidFrame(_)
                | Error::BoundOutsideFrame(_)
                | Error::RateMisaligned { .. }
                | Error::RateOutOfRange(_)
                | Error::UnknownLabel(_)
                | Error::FrameMismatch
                | Error::ParseRational(_)
                | Error::InvalidMass(_)
                | Error::InvalidModel(_)
                | Error::UnknownOutcome(_)
                | Error::EmptyTally
                | Error::EmptyHypothesis
                | Error::InvalidArgument(_)
                | Error::FocalLimitExceeded(_)
        )
    }

    /// Well-formed input for which the requested quantity does not exist.
    pub fn is_undefined_result(&self) -> bool {
        matches!(
            self,
            Error::ObservationImpossible(_)
                | Error::IncompatibleEvidence
                | Error::UndefinedSupportRatio
                | Error::WeightUndefined
                | Error::NoSupportingInterpretation
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
