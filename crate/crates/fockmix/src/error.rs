use thiserror::Error;

/// Errors surfaced by the series engine, state constructors and solvers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A certified series tail bound could not be established within the
    /// configured term budget. Callers may retry with a larger budget.
    #[error("series for Z^({order}) at y1 = {y1} did not certify a tail below {tolerance:e} within {max_terms} terms (last bound {last_bound:e})")]
    SeriesDivergence {
        y1: f64,
        order: u32,
        max_terms: usize,
        tolerance: f64,
        last_bound: f64,
    },

    /// The requested Fock truncation leaves more squared-amplitude mass in the
    /// tail than the normalization contract allows.
    #[error("truncation {requested} leaves a squared-amplitude tail of {tail:e} (limit {limit:e})")]
    TruncationTooSmall {
        requested: usize,
        tail: f64,
        limit: f64,
    },

    /// A two-mode state has support touching the truncation boundary, so a
    /// beam-splitter application would spill photons out of the retained space.
    #[error("two-mode support reaches {support} total photons but the retained space holds only {capacity}")]
    TruncationOverflow { support: usize, capacity: usize },

    /// a0 = 0 leaves the distortion factor b' = a1 b / a0 undefined.
    #[error("degenerate photonic qubit: a0 = 0")]
    DegenerateQubit,

    /// The outcomes of a gate scenario do not share a common distortion factor.
    #[error("distortion factors disagree beyond {tolerance:e}: {values:?} (spread {spread:e})")]
    InconsistentDistortion {
        values: Vec<(u32, f64)>,
        spread: f64,
        tolerance: f64,
    },

    /// A density matrix handed to the negativity routine is not positive
    /// semidefinite within tolerance.
    #[error("density matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NonPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
