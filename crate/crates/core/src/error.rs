use thiserror::Error;

/// Errors surfaced by curve parsing, classification, enumeration and the
/// implicitization oracles.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("zero polynomial as numerator or denominator")]
    ZeroPolynomial,
    #[error("non-rational coefficient literal: {0}")]
    NonRationalCoefficient(String),
    #[error("parameterization is a substitution t -> t^{0}")]
    DegreeSubstitutionDetected(u64),
    #[error("numerator cancels entirely after reduction")]
    EmptyAfterReduction,
    #[error("supports do not match any case of the classification")]
    UnclassifiableConfiguration,
    #[error("lower chain exceeds upper chain")]
    InconsistentChains,
    #[error("fast-path polygon disagrees with enumeration: fast {fast:?}, enumerated {enumerated:?}")]
    ChainMismatch {
        fast: Vec<(i64, i64)>,
        enumerated: Vec<(i64, i64)>,
    },
    #[error("staircase enumeration cap exceeded; {count} triangulations would be generated")]
    CapExceeded { count: u128 },
    #[error("lifting is not sufficiently generic (tie in cell certification)")]
    NonGenericLifting,
    #[error("subdivision exponents violate e0+e1+e2 = u")]
    DegreeInvariantViolated,
    #[error("interpolation kernel has dimension {0}, expected 1")]
    KernelDimensionNotOne(usize),
    #[error("Sylvester resultant is identically zero")]
    ZeroResultant,
    #[error("more than one candidate factor vanishes on the curve samples")]
    FactorSelectionAmbiguous,
    #[error("coefficient resampling budget exhausted")]
    ResamplingExhausted,
    #[error("internal invariant violation: {0}")]
    InternalInvariant(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
