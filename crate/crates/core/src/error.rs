//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong when building or transforming the objects of
/// this crate. Variants carry a human-readable description of the offending
/// object; parse errors additionally carry a source location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("cross-type equation between {0} and {1}")]
    CrossTypeEquation(String, String),

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("invalid interpretation: {0}")]
    InvalidInterpretation(String),

    #[error("invalid union gadget: {0}")]
    InvalidUnionGadget(String),

    #[error("invalid gadget: {0}")]
    InvalidGadget(String),

    #[error("symbol `{0}` is not binary; projective gadgets need an all-binary input signature")]
    NotBinary(String),

    #[error("signature is not single-sorted ({0} types)")]
    NotSingleSorted(usize),

    #[error("invalid label cover instance: {0}")]
    InvalidLabelCover(String),

    #[error("invalid minion: {0}")]
    InvalidMinion(String),

    #[error("arity {arity} exceeds the truncation arity {max}")]
    Truncation { arity: usize, max: usize },

    #[error("invalid linear system: {0}")]
    InvalidSystem(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
