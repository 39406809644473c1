use std::collections::BTreeSet;

use thiserror::Error;

/// Errors raised by the symbolic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },

    #[error("differential polynomial is not an exact x-derivative: {0}")]
    NotExact(String),

    #[error("differential polynomial is not homogeneous (degrees {0:?})")]
    NotHomogeneous(BTreeSet<i64>),

    #[error("insufficient truncation depth: requested floor {requested}, inputs only guarantee {achievable}")]
    InsufficientDepth { requested: i64, achievable: i64 },

    #[error("time index {index} is divisible by r = {r}")]
    IndexDivisible { r: u32, index: u32 },

    #[error("flow t_{0} is not available in the flow table")]
    MissingFlow(u32),

    #[error("weight {requested} exceeds the available window {available}")]
    WeightExceeded { requested: i64, available: i64 },

    #[error("map is not triangular in {0}")]
    NotTriangular(String),

    #[error("correlator {indices:?} is not stable: r={r1} gives {v1}, r={r2} gives {v2}")]
    NotStable { indices: Vec<u32>, r1: u32, v1: String, r2: u32, v2: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
