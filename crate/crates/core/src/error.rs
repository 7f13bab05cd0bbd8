use thiserror::Error;

/// Errors produced by the codecs, the sequence constructors and the analysis helpers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("value {value} does not fit in {len} bits")]
    Overflow { value: String, len: usize },

    #[error("index out of range: {0}")]
    Domain(String),

    #[error("codeword has no ones, so no gaps are defined")]
    EmptyCodeword,

    #[error("message length mismatch: expected {expected} bits, got {got}")]
    LengthMismatch { expected: u64, got: u64 },

    #[error("encoder wrote position {position} twice; the sequence cannot give a constant weight")]
    WeightCollision { position: String },

    #[error("weight mismatch: expected {expected}, got {got}")]
    WeightMismatch { expected: usize, got: usize },

    #[error("blocklength mismatch: expected {expected}, got {got}")]
    BlocklengthMismatch { expected: String, got: String },

    #[error("not a codeword: {0}")]
    NotACodeword(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("2^{needed_log2} items exceed the exhaustive budget of 2^{budget_log2}; use sampled verification")]
    Budget { needed_log2: u32, budget_log2: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
