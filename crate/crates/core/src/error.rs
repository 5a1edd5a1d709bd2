use thiserror::Error;

/// Errors surfaced by every layer of the library. The variant names double as
/// the stable error codes printed by the command line tool.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("SPEC_MISMATCH: {0}")]
    SpecMismatch(String),
    #[error("NOT_A_UNIT: element {0} is not invertible")]
    NotAUnit(u32),
    #[error("NOT_M_CLOSE: {0}")]
    NotMClose(String),
    #[error("GALOIS_CONDITION_FAILED: {l} does not divide {p} - 1")]
    GaloisConditionFailed { p: u32, l: u32 },
    #[error("SAME_PRIME: extension degree {0} equals the residue characteristic")]
    SamePrime(u32),
    #[error("KIND_MISMATCH: {0}")]
    KindMismatch(String),
    #[error("INSUFFICIENT_PRECISION: need {needed}, have {available}")]
    InsufficientPrecision { needed: u32, available: u32 },
    #[error("BUDGET_EXCEEDED: {required} exceeds budget {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("SIDE_MISMATCH: {0}")]
    SideMismatch(String),
    #[error("NOT_SIGMA_INVARIANT")]
    NotSigmaInvariant,
    #[error("WINDOW_TOO_SMALL: cocharacter {0:?} lies outside the restriction window")]
    WindowTooSmall(Vec<i64>),
    #[error("NOT_ORDER_L: operator does not satisfy T^l = id")]
    NotOrderL,
    #[error("MISSING_ACTION")]
    MissingAction,
    #[error("DIM_BOUND_EXCEEDED: dimension {dim} exceeds bound {bound}")]
    DimBoundExceeded { dim: usize, bound: usize },
    #[error("GENERATOR_NAME_MISMATCH: {0}")]
    GeneratorNameMismatch(String),
    #[error("UNDECIDED: {0}")]
    Undecided(String),
    #[error("NOT_COMPATIBLE: {0}")]
    NotCompatible(String),
    #[error("CONFIG_INVALID: {0}")]
    ConfigInvalid(String),
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable code (the prefix of the display string).
    pub fn code(&self) -> &'static str {
        match self {
            Error::SpecMismatch(_) => "SPEC_MISMATCH",
            Error::NotAUnit(_) => "NOT_A_UNIT",
            Error::NotMClose(_) => "NOT_M_CLOSE",
            Error::GaloisConditionFailed { .. } => "GALOIS_CONDITION_FAILED",
            Error::SamePrime(_) => "SAME_PRIME",
            Error::KindMismatch(_) => "KIND_MISMATCH",
            Error::InsufficientPrecision { .. } => "INSUFFICIENT_PRECISION",
            Error::BudgetExceeded { .. } => "BUDGET_EXCEEDED",
            Error::SideMismatch(_) => "SIDE_MISMATCH",
            Error::NotSigmaInvariant => "NOT_SIGMA_INVARIANT",
            Error::WindowTooSmall(_) => "WINDOW_TOO_SMALL",
            Error::NotOrderL => "NOT_ORDER_L",
            Error::MissingAction => "MISSING_ACTION",
            Error::DimBoundExceeded { .. } => "DIM_BOUND_EXCEEDED",
            Error::GeneratorNameMismatch(_) => "GENERATOR_NAME_MISMATCH",
            Error::Undecided(_) => "UNDECIDED",
            Error::NotCompatible(_) => "NOT_COMPATIBLE",
            Error::ConfigInvalid(_) => "CONFIG_INVALID",
            Error::Parse(_) => "PARSE_ERROR",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
