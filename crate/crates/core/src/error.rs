use thiserror::Error;

/// Errors produced by the counting, certification and search routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible domains: Z/{left} vs Z/{right}")]
    IncompatibleDomains { left: usize, right: usize },

    #[error("group Z/{modulus} is not 2-divisible (modulus must be odd)")]
    NotTwoDivisible { modulus: usize },

    #[error("modulus must be at least 1")]
    EmptyGroup,

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("radius {0} outside (0, 1]")]
    RadiusOutOfRange(f64),

    #[error("epsilon {0} outside (0, 1]")]
    EpsilonOutOfRange(f64),

    #[error("argument {value} outside the admissible range: {what}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("frequency set does not contain the distinguishing frequency 1")]
    MissingDistinguishingFrequency,

    #[error("function values must lie in {range}; found {value} at index {index}")]
    ValueOutOfRange { range: &'static str, value: f64, index: usize },

    #[error("grid side must be at least 1")]
    EmptyGrid,

    #[error("unsupported field order q = {0} (supported: 2, 3, 4, 5, 7, 8, 9)")]
    UnsupportedField(u32),

    #[error("field vector dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("set contains a configuration: {0}")]
    ConfigurationFound(String),

    #[error("certificate failed: lambda {lambda} < mean^3 {mean_cubed} - eps {epsilon}")]
    CertificateFailed { lambda: f64, mean_cubed: f64, epsilon: f64 },

    #[error("frequency tower exceeded {levels} levels without an admissible index")]
    TowerExhausted { levels: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
