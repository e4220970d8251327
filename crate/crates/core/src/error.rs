use thiserror::Error;

/// Errors raised by code construction, analysis and exploration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("symbols must be nonempty")]
    EmptySymbol,
    #[error("probability of `{0}` must be strictly positive")]
    NonPositiveProbability(String),
    #[error("probabilities sum to {0}, expected 1")]
    BadProbabilitySum(String),
    #[error("a source needs at least 2 symbols, got {0}")]
    TooFewSymbols(usize),
    #[error("codeword for `{0}` is empty")]
    EmptyCodeword(String),
    #[error("codeword for `{0}` contains characters other than 0 and 1")]
    InvalidCodeword(String),
    #[error("codeword of `{0}` is a prefix of the codeword of `{1}`")]
    PrefixViolation(String, String),
    #[error("code alphabet does not match the source alphabet")]
    AlphabetMismatch,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("Kraft sum {0} exceeds 1")]
    KraftExceeded(String),
    #[error("more than {0} distinct trees")]
    CapExceeded(usize),
    #[error("code tree is not complete")]
    NotComplete,
    #[error("code is not optimal for the source")]
    NotOptimal,
    #[error("alphabet of size {size} exceeds the limit of {limit}")]
    AlphabetTooLarge { size: usize, limit: usize },
    #[error("invalid monotonicity witness: {0}")]
    InvalidWitness(&'static str),
    #[error("nodes {0} and {1} are related by ancestry")]
    AncestryViolation(usize, usize),
    #[error("nodes {0} and {1} do not satisfy the swap condition")]
    KindViolation(usize, usize),
    #[error("node {0} does not exist")]
    NoSuchNode(usize),
    #[error("node {0} is not an internal node")]
    NotInternal(usize),
    #[error("decoder has {0} states, at most 64 are supported")]
    TooManyStates(usize),
    #[error("subset search exceeded {0} explored state sets")]
    SubsetCapExceeded(usize),
    #[error("swap exploration truncated at {0} states before a decision")]
    Truncated(usize),
    #[error("property report is inconsistent: {0}")]
    InconsistentReport(String),
}

pub type Result<T> = std::result::Result<T, Error>;
