use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("field {0} is not finite; enumeration is unavailable")]
    FieldNotFinite(String),

    #[error("enumeration bound exceeded: {what} needs {required}, limit is {limit}")]
    BoundExceeded {
        what: String,
        required: u128,
        limit: u128,
    },

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("typing mismatch: {0}")]
    Typing(String),

    #[error("invalid {kind}: {detail}")]
    Invalid { kind: &'static str, detail: String },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn invalid(kind: &'static str, detail: impl Into<String>) -> Self {
        Error::Invalid {
            kind,
            detail: detail.into(),
        }
    }

    pub(crate) fn bound(what: impl Into<String>, required: u128, limit: u128) -> Self {
        Error::BoundExceeded {
            what: what.into(),
            required,
            limit,
        }
    }
}

/// Enumeration limits shared by every search in the crate.
///
/// Exceeding any of them is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest vector space (as a count of vectors) that may be enumerated.
    pub max_vectors: u128,
    /// Largest sieve lattice per object.
    pub max_sieves: usize,
    /// Largest candidate space for functor and transformation searches.
    pub max_functors: u128,
    /// Number of closure rounds when saturating a diagram of presentations.
    pub closure_depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_vectors: 1 << 16,
            max_sieves: 4096,
            max_functors: 100_000,
            closure_depth: 8,
        }
    }
}
