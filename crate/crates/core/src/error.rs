use thiserror::Error;

/// Everything that can go wrong while parsing diagrams or computing invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed token `{token}`: {reason}")]
    MalformedToken { token: String, reason: String },

    #[error("crossing {id} occurs {count} time(s); every crossing must occur exactly twice")]
    CrossingCount { id: u32, count: usize },

    #[error("code mixes flat and classical passages")]
    MixedFlat,

    #[error("crossing {id} carries different signs at its two passages")]
    SignMismatch { id: u32 },

    #[error("crossing {id} must have one over and one under passage")]
    KindMismatch { id: u32 },

    #[error("unknown crossing {id}")]
    UnknownCrossing { id: u32 },

    #[error("operation requires a virtual (non-flat) code")]
    FlatCode,

    #[error("operation requires a flat code")]
    NotFlat,

    #[error("operation requires a long code")]
    NotLong,

    #[error("operation requires a closed code")]
    NotClosed,

    #[error("code is already closed")]
    AlreadyClosed,

    #[error("{crossings} crossings exceeds the configured cap of {cap}")]
    SizeCapExceeded { crossings: usize, cap: usize },

    #[error("invalid move site: {0}")]
    InvalidSite(String),

    #[error("product of two monomials that both carry a long-segment word")]
    DoubleLongSegment,

    #[error("cannot evaluate to a constant: variable {0} has no assignment")]
    IncompleteAssignment(String),

    #[error("differential does not square to zero ({0})")]
    DifferentialSquare(String),

    #[error("no corpus entry named `{0}`")]
    UnknownEntry(String),

    #[error("polynomial parse error: {0}")]
    PolyParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
