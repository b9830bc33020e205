use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("feature vector has zero norm")]
    ZeroNorm,
    #[error("non-finite value encountered")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("feature vector must have at least one entry")]
    EmptyFeatures,
    #[error("copy count must be positive and finite, got {0}")]
    InvalidCopyCount(f64),
    #[error("copy count must be an integer >= 1 for the Kronecker oracle, got {0}")]
    NonIntegerK(f64),
    #[error("states are indistinguishable (pair eigenvalue {0:e} below threshold)")]
    DegeneratePair(f64),
    #[error("tensor power needs {required} entries, cap is {cap}")]
    SizeCap { required: u128, cap: usize },
    #[error("class {0} has no samples")]
    EmptyClass(u8),
    #[error("symmetric eigensolver did not converge after {0} sweeps")]
    EigenFailure(usize),
    #[error("too few samples: need {needed}, have {available}")]
    TooFewSamples { needed: usize, available: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("invalid k grid: min {min}, max {max}, step {step}")]
    InvalidGrid { min: f64, max: f64, step: f64 },
    #[error("need at least 3 curve points, got {0}")]
    TooFewPoints(usize),
    #[error("attribute statistics do not match the sample (expected {expected} attributes, found {found})")]
    StatsMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("fold plan does not match the dataset ({plan} assignments for {samples} samples)")]
    PlanMismatch { plan: usize, samples: usize },
}
