use crate::ground::Subset;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("subset {subset:?} does not fit a ground set of size {n}")]
    WidthMismatch { subset: Subset, n: usize },

    #[error("ground set size {n} exceeds the limit of {cap} for {what}")]
    OverCap { what: &'static str, n: usize, cap: usize },

    #[error("invalid argument: {0}")]
    Argument(&'static str),

    #[error("decomposed function is not submodular: pair ({a:?}, {b:?}) violates the inequality by {violation}")]
    NotSubmodular { a: Subset, b: Subset, violation: f64 },

    #[error("contract violation: {0}")]
    Contract(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
