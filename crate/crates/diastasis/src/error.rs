//! Error type shared across the crate.
//!
//! Every fallible operation returns [`Result`]. Variants distinguish caller
//! mistakes (dimension mismatches, malformed input) from precondition
//! violations on the mathematical objects (non-Hermitian data, degenerate
//! metrics, insufficient truncation order) and from internal invariant
//! breaches, which should never surface in correct code.

use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("multi-index has {got} entries but the series has {expected} variables")]
    IndexLength { expected: usize, got: usize },

    #[error("variable index {var} out of range for {vars} variables")]
    VariableOutOfRange { var: usize, vars: usize },

    #[error("series has a nonzero constant term where zero is required")]
    NonzeroConstantTerm,

    #[error("series constant term must be 1, found {found}")]
    ConstantTermNotOne { found: String },

    #[error("coefficient data is not Hermitian: c[{j},{k}] != conj(c[{k},{j}])")]
    NotHermitian { j: String, k: String },

    #[error("potential is not diastasis-normalized: nonzero coefficient at [{j},{k}]")]
    NotNormalized { j: String, k: String },

    #[error("metric is degenerate at the origin: {detail}")]
    DegenerateMetric { detail: String },

    #[error("{what} must be positive, got {got}")]
    NonPositive { what: String, got: String },

    #[error("substitution leaves a negative exponent on monomial {monomial}")]
    ResidualNegativeExponent { monomial: String },

    #[error("insufficient truncation order for {what}: need {needed}, have {have}")]
    InsufficientOrder {
        what: String,
        needed: u32,
        have: u32,
    },

    #[error("epsilon^(2c) is not rational for epsilon = {epsilon} and c = {weight}")]
    IrrationalPower { epsilon: String, weight: String },

    #[error("cone weight {weight} is not a positive integer; ambient series requires one")]
    FractionalWeight { weight: String },

    #[error("at least one factor is required")]
    EmptyFactors,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid sample plan: {0}")]
    InvalidSamplePlan(String),

    #[error("numeric cross-check tolerance breached: max relative error {max_rel:e} exceeds {tolerance:e}")]
    ToleranceBreach { max_rel: f64, tolerance: f64 },

    #[error("oracle expression exceeds size limits: {0}")]
    OracleLimit(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl Error {
    /// Convenience constructor for [`Error::NonPositive`] with a rational value.
    pub fn non_positive(what: &str, got: &BigRational) -> Self {
        Error::NonPositive {
            what: what.to_string(),
            got: got.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
