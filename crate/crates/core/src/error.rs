use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("not a planar embedding: {0}")]
    NotPlanar(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid splitter parameters: {0}")]
    Spec(String),

    #[error("splitter composition: {0}")]
    Composition(String),

    #[error("no out-branching: {0}")]
    NoOutBranching(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("class index {index} out of range for {classes} classes")]
    ClassOutOfRange { index: usize, classes: usize },

    #[error("sieve table of {needed} bytes exceeds memory budget of {budget} bytes; use polynomial-space mode with a perfect hash family instead")]
    Capacity { needed: u128, budget: u64 },

    #[error("size guard exceeded: {0}")]
    Guard(String),

    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
