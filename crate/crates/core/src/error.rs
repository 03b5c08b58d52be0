use thiserror::Error;

/// Errors raised while building or querying systems.
///
/// Every variant maps to CLI exit code 2 (invalid input) except
/// [`ShadowError::InternalInvariant`], which signals a theorem-level
/// contradiction and maps to exit code 1.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShadowError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a uniformity: minimal entourage is not transitive ({x},{z}),({z},{y}) but not ({x},{y}); maximal equivalence sub-relations: {hints:?}")]
    NotAUniformity {
        x: usize,
        z: usize,
        y: usize,
        /// Each hint is a partition of the points into W-cliques.
        hints: Vec<Vec<Vec<usize>>>,
    },

    #[error("map is not continuous: {a} and {b} share a cell but f({a})={fa} and f({b})={fb} do not")]
    Discontinuous {
        a: usize,
        b: usize,
        fa: usize,
        fb: usize,
    },

    #[error("map is not onto: point {0} has no preimage")]
    NotSurjective(usize),

    #[error("relation does not contain the minimal entourage W")]
    NotAnEntourage,

    #[error("unsupported dual: {0}")]
    UnsupportedDual(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

pub type Result<T> = std::result::Result<T, ShadowError>;

pub(crate) fn invalid(msg: impl Into<String>) -> ShadowError {
    ShadowError::InvalidInput(msg.into())
}
