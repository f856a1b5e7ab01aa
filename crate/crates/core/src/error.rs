use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised by the operator kernel and everything built on it.
///
/// Each variant maps to a stable kebab-case code (see [`Error::code`]) that the
/// command-line front end prints alongside the message.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("matrix is not square or has zero size (got {rows} rows, {len} entries)")]
    BadShape { rows: usize, len: usize },

    #[error("matrix has a non-finite entry")]
    NonFinite,

    #[error("operator is not Hermitian (residual {residual:e})")]
    NonHermitian { residual: f64 },

    #[error("Jacobi eigenvalue iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    EigNoConvergence { sweeps: usize, off: f64 },

    #[error("trace has imaginary residue {imag:e}")]
    NonHermitianTrace { imag: f64 },

    #[error("Bloch vector has norm {norm} > 1")]
    UnphysicalBloch { norm: f64 },

    #[error("direction norm {norm:e} is outside [1e-6, 1e6]")]
    InvalidDirection { norm: f64 },

    #[error("outcome label must be +1 or -1, got {0}")]
    InvalidOutcome(i32),

    #[error("operator is not a projector (idempotency residual {residual:e})")]
    NotAProjector { residual: f64 },

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("density matrix check failed: {0}")]
    NotADensity(String),

    #[error("{n} projectors requested; at most 8 are supported")]
    OrderingExplosion { n: usize },

    #[error("at least {min} projectors required, got {n}")]
    TooFewProjectors { n: usize, min: usize },

    #[error("invalid convex weights: {0}")]
    InvalidConvexWeights(String),

    #[error("invalid ordering recipe: {0}")]
    InvalidRecipe(String),

    #[error("invalid observable subset: {0}")]
    InvalidSubset(String),

    #[error("scheme entry {value} is outside the sanity range [-1, 2]")]
    EntryOutOfBounds { value: f64 },

    #[error("event space of {n} outcomes exceeds the exhaustive-search limit of 16")]
    PartitionSearchTooLarge { n: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("subsystem index must be 0 or 1, got {0}")]
    InvalidSubsystem(usize),

    #[error("state is not normalized (norm^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimMismatch { .. } => "dim-mismatch",
            Error::BadShape { .. } => "bad-shape",
            Error::NonFinite => "non-finite",
            Error::NonHermitian { .. } => "non-hermitian",
            Error::EigNoConvergence { .. } => "eig-no-convergence",
            Error::NonHermitianTrace { .. } => "non-hermitian-trace",
            Error::UnphysicalBloch { .. } => "unphysical-bloch",
            Error::InvalidDirection { .. } => "invalid-direction",
            Error::InvalidOutcome(_) => "invalid-outcome",
            Error::NotAProjector { .. } => "not-a-projector",
            Error::InvalidObservable(_) => "invalid-observable",
            Error::NotADensity(_) => "not-a-density",
            Error::OrderingExplosion { .. } => "ordering-explosion",
            Error::TooFewProjectors { .. } => "too-few-projectors",
            Error::InvalidConvexWeights(_) => "invalid-convex-weights",
            Error::InvalidRecipe(_) => "invalid-recipe",
            Error::InvalidSubset(_) => "invalid-subset",
            Error::EntryOutOfBounds { .. } => "entry-out-of-bounds",
            Error::PartitionSearchTooLarge { .. } => "partition-search-too-large",
            Error::OutOfRange(_) => "out-of-range",
            Error::InvalidSubsystem(_) => "invalid-subsystem",
            Error::NotNormalized { .. } => "not-normalized",
        }
    }
}
