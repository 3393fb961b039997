use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has no rows")]
    EmptyMatrix,
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("difference depth {depth} needs more than {window} samples")]
    DepthTooLarge { depth: usize, window: usize },
    #[error("window of {window} samples is shorter than the required {min}")]
    WindowTooShort { window: usize, min: usize },
    #[error("sequence is not a polynomial within the {window}-sample window")]
    NotPolynomial { window: usize },
    #[error("operator is not a {m}-isometry")]
    NotMIsometry { m: usize },
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("orbit norm vanishes at step {step}: operator is not injective on the orbit")]
    VanishingOrbit { step: usize },
    #[error("polynomial has a non-real coefficient at power {power}")]
    NonRealCoefficient { power: usize },
    #[error("polynomial is not positive at n = {n}")]
    NonPositive { n: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("weight {n} is not available (prefix length {prefix})")]
    WeightOutOfRange { n: usize, prefix: usize },
    #[error("weight {n} has no exact square root; only squared weights are stored")]
    IrrationalWeight { n: usize },
    #[error("exact mode needs eigenvalue hints")]
    MissingHints,
    #[error("hint {hint} is not an eigenvalue")]
    HintNotEigenvalue { hint: String },
    #[error("generalized eigenspaces span {found} of {dim} dimensions; eigenvalues are missing")]
    MissingEigenvalues { found: usize, dim: usize },
    #[error("operators do not commute")]
    NonCommuting,
    #[error("operator is not nilpotent")]
    NotNilpotent,
    #[error("operator is not an m-isometry for any m <= {m_max}")]
    NotIsometricWithinBound { m_max: usize },
    #[error("eigenvalue {z} is not unimodular")]
    NotUnimodular { z: String },
    #[error("eigenvalues coincide")]
    EqualEigenvalues,
    #[error("vector is not in the generalized eigenspace of {z}")]
    NotInGeneralizedEigenspace { z: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
