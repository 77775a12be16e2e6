use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid base '{found}' at line {line}, column {column}")]
    InvalidBase {
        line: usize,
        column: usize,
        found: char,
    },

    #[error("empty sequence")]
    EmptySequence,

    #[error("record '{id}' starting at line {line} has an empty body")]
    EmptyRecord { id: String, line: usize },

    #[error("line {line}: sequence data before the first '>' header")]
    MissingHeader { line: usize },

    #[error("line {line}: origin offset {found} does not match expected {expected}")]
    OriginOffset {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}, column {column}: base group of length {len} (allowed 1-10)")]
    OriginGroup {
        line: usize,
        column: usize,
        len: usize,
    },

    #[error("line {line}: {message}")]
    OriginLine { line: usize, message: String },

    #[error("origin block is not terminated by '//'")]
    OriginUnterminated,

    #[error("features line {line}: {message}")]
    Feature { line: usize, message: String },

    #[error("duplicate feature id '{0}'")]
    DuplicateFeature(String),

    #[error("region '{id}' ({start}..{end}) is out of bounds for a sequence of length {len}")]
    RegionOutOfBounds {
        id: String,
        start: usize,
        end: usize,
        len: usize,
    },

    #[error("block length must be at least 1")]
    ZeroBlockLength,

    #[error("block longer than sequence (L = {block_len}, N = {len})")]
    BlockTooLong { block_len: usize, len: usize },

    #[error("block length {0} exceeds the supported maximum of 32")]
    BlockLengthUnsupported(usize),

    #[error("block '{block}' does not have length {block_len}")]
    BlockMismatch { block: String, block_len: usize },

    #[error("distribution has no blocks")]
    NoBlocks,

    #[error("invalid block-length range: {0}")]
    InvalidRange(String),

    #[error("ensemble size must be at least 1")]
    EmptyEnsemble,

    #[error("degenerate ensemble: mean random entropy is zero at L = {0}")]
    DegenerateEnsemble(usize),

    #[error("correction table is missing L = {0:?}")]
    RangeMismatch(Vec<usize>),

    #[error("correction table built for length {table} but profile has length {profile}")]
    LengthMismatch { table: usize, profile: usize },

    #[error("max lag {max_lag} must be smaller than the signal length {len}")]
    LagTooLarge { max_lag: usize, len: usize },

    #[error("transform length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("{context}: {inner}")]
    Context { context: String, inner: Box<Error> },
}

impl Error {
    pub fn in_file(self, path: impl AsRef<std::path::Path>) -> Error {
        Error::Context {
            context: path.as_ref().display().to_string(),
            inner: Box::new(self),
        }
    }

    pub fn in_sequence(self, id: &str) -> Error {
        Error::Context {
            context: format!("sequence '{id}'"),
            inner: Box::new(self),
        }
    }

    /// The innermost error, without file or sequence context.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { inner, .. } => inner.root(),
            other => other,
        }
    }
}
