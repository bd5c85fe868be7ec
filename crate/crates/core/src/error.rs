use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // codes
    #[error("alphabet needs at least two distinct single-character symbols: {0}")]
    BadAlphabet(String),
    #[error("codebook has no entry for message {0:?}")]
    MissingMessage(String),
    #[error("symbol {symbol:?} is not in the alphabet (in {context})")]
    BadSymbol { symbol: String, context: String },
    #[error("length mismatch in {context}: expected {expected}, got {actual}")]
    LengthMismatch {
        context: String,
        expected: usize,
        actual: usize,
    },
    #[error("codebook is not injective: {0:?} and {1:?} share a codeword")]
    NotInjective(String, String),
    #[error("code has a single codeword, minimum distance is undefined")]
    EmptyPairSet,
    #[error("radius {radius} exceeds block length {n}")]
    RadiusTooLarge { radius: usize, n: usize },
    #[error("code too large for exact enumeration: {0}")]
    CodeTooLarge(String),

    // decoders
    #[error("weights for target {target} sum to {sum}, not 1")]
    WeightsNotNormalized { target: usize, sum: String },
    #[error("weight {0} is not positive")]
    NonPositiveWeight(String),
    #[error("table for target {target}, query {query:?} has no entry for view {view:?}")]
    PartialTable {
        target: usize,
        query: Vec<usize>,
        view: String,
    },
    #[error("coordinate {coord} is outside [1, {n}]")]
    CoordOutOfRange { coord: usize, n: usize },
    #[error("query {0:?} is not a strictly increasing nonempty coordinate list")]
    BadQuery(Vec<usize>),
    #[error("query {query:?} has more than q = {q} coordinates")]
    QueryTooLong { query: Vec<usize>, q: usize },
    #[error("target {target} is outside [1, {max}]")]
    TargetOutOfRange { target: usize, max: usize },
    #[error("decoder has no rules")]
    NoRules,
    #[error("target kind mismatch: {0}")]
    TargetKindMismatch(String),

    // transform
    #[error("delta must satisfy 0 < delta <= 1, got {0}")]
    DeltaOutOfRange(String),
    #[error("view has {actual} symbols but the coordinate list has {expected}")]
    ViewLengthMismatch { expected: usize, actual: usize },
    #[error("coordinates {sub:?} are not a subset of query {query:?}")]
    NotSubset { sub: Vec<usize>, query: Vec<usize> },
    #[error("word {0:?} is not a codeword")]
    NotACodeword(String),
    #[error("decoder is not canonical for this code ({0} table entries differ)")]
    NotCanonical(usize),
    #[error("repetition count must be at least 1, got {0}")]
    BadT(usize),
    #[error("product decoder would have {entries} entries, budget is {budget}")]
    EntryExplosion { entries: u128, budget: u128 },
    #[error("decoder emits bot for target {target}; majority amplification needs an LDC decoder")]
    HasBotOutputs { target: usize },

    // verify
    #[error("exact sweep needs {needed} evaluations, budget is {budget}; use the heuristic adversary")]
    BallTooLarge { needed: u128, budget: u128 },
    #[error("query {0:?} is smoothable at this codeword")]
    NotNonsmoothable(Vec<usize>),
    #[error("invalid Chernoff parameters: {0}")]
    BadParameters(String),

    // bounds
    #[error("soundness {s} is not below |Sigma|^-q = {limit}")]
    SoundnessTooLarge { s: String, limit: String },
    #[error("invalid bound parameters: {0}")]
    BadBoundParams(String),

    // fixtures and files
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("fixture oracle rejected {name}: {reason}")]
    FixtureOracleFailure { name: String, reason: String },
    #[error("{path}: {message}")]
    Malformed { path: String, message: String },
    #[error("cannot parse rational {0:?} (expected num/den)")]
    BadRational(String),
    #[error("I/O failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn length(context: impl Into<String>, expected: usize, actual: usize) -> Self {
        Error::LengthMismatch {
            context: context.into(),
            expected,
            actual,
        }
    }
}
