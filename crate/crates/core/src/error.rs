use thiserror::Error;

/// Errors raised by the library. Variants that carry an `invariant` name it
/// the way the CLI reports it (`chain`, `star-chain`, `automorphism`, ...).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set must be non-empty")]
    EmptyGround,

    #[error("size {size} exceeds the {what} cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("ground set mismatch: {left} vs {right}")]
    GroundMismatch { left: usize, right: usize },

    #[error("element {element} outside ground set of size {ground}")]
    ElementOutOfRange { element: usize, ground: usize },

    #[error("not a covering: elements {missing} are not covered")]
    NotACovering { missing: String },

    #[error("empty list of coverings")]
    EmptyList,

    #[error("invariant `{invariant}` violated: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },

    #[error("precondition `{precondition}` violated: {detail}")]
    Precondition {
        precondition: &'static str,
        detail: String,
    },

    #[error("covering {covering} is not admissible")]
    Inadmissible { covering: String },

    #[error(
        "zero classes overlap at {point}: the base chain is a truncation without a partition limit"
    )]
    ZeroClassesOverlap { point: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid subshift: {0}")]
    InvalidSubshift(String),

    #[error("word-count table has {available} entries, length {requested} requested")]
    TableExhausted { available: usize, requested: usize },

    #[error("stable index not found within the truncation: {0}")]
    NotFound(String),

    /// A proof step that must hold whenever the preconditions do.
    #[error("internal assertion failed: {0}")]
    Assertion(String),
}

pub type Result<T> = std::result::Result<T, Error>;
