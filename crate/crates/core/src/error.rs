use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("elements belong to different groups: {0} vs {1}")]
    MismatchedGroups(String, String),

    #[error("operation requires {required}, got {found}")]
    UnsupportedGroup { required: &'static str, found: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("insufficient samples: need {needed}, found {found}")]
    InsufficientSamples { needed: usize, found: usize },

    #[error("insufficient radius span: samples cover [{min}, {max}], need at least two decades")]
    InsufficientSpan { min: f64, max: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("zero denominator: cocycle vanishes on the generating set")]
    ZeroDenominator,

    #[error("lipschitz bound violated at {witness}: ratio {ratio} > bound {bound}")]
    LipschitzViolation { witness: String, ratio: f64, bound: f64 },

    #[error("group closure exceeded {cap} elements and no uniform bound was supplied")]
    ClosureCapExceeded { cap: usize },

    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("invariant/complement decomposition refused: {0}")]
    DecompositionRefused(String),

    #[error("complement of the invariant vectors is trivial; Kazhdan constant is vacuous")]
    VacuousComplement,

    #[error(
        "no spectral gap: the Markov operator restricted to the complement of the invariant \
         vectors has spectral radius {radius:.12} (need < 1 - 1e-8), so the averaged affine \
         map has no unique fixed point"
    )]
    NoSpectralGap { radius: f64 },

    #[error("averaged cocycle has a component of size {0:e} in the invariant subspace")]
    InvariantDrift(f64),

    #[error("matrix is singular")]
    Singular,

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
