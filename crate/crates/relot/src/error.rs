//! Crate-wide error type.
//!
//! One flat enum covers construction, validation, arithmetic, and solver
//! failures. The CLI maps variants to process exit codes: everything caused
//! by bad input data exits with 2, internal solver failures exit with 3
//! (see [`crate::cli`]).

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All the ways an operation in this crate can fail.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must share a metric pair were built on different pairs.
    #[error("operands live on different metric pairs")]
    PairMismatch,

    /// A point index referenced a point outside the pair's point list.
    #[error("point index {index} out of range (pair has {len} points)")]
    IndexOutOfRange {
        /// The offending index.
        index: usize,
        /// Number of points in the pair.
        len: usize,
    },

    /// A measure or coupling weight was negative.
    #[error("negative weight {value} for {what}")]
    NegativeWeight {
        /// Human-readable location of the weight.
        what: String,
        /// The offending value, rendered as text.
        value: String,
    },

    /// A floating-point input was NaN or infinite.
    #[error("non-finite number in {what}")]
    NonFiniteNumber {
        /// Human-readable location of the number.
        what: String,
    },

    /// The cost exponent `p` was outside `[1, ∞)` or otherwise unusable.
    #[error("invalid cost exponent p = {p}: {reason}")]
    InvalidExponent {
        /// The offending exponent.
        p: f64,
        /// Why it was rejected.
        reason: String,
    },

    /// An exact `p`-th root does not exist in the scalar type.
    ///
    /// Raised only in rational mode, e.g. when `W_2^2 = 2` and `sqrt(2)` is
    /// requested as an exact rational. The `p`-th power itself is always
    /// representable; use the cost accessor instead of the value.
    #[error("exact {degree}-th root of {value} is irrational; use the p-th power (cost) instead")]
    InexactRoot {
        /// Root degree requested.
        degree: u32,
        /// The radicand, rendered as text.
        value: String,
    },

    /// An operation is not available for the scalar type.
    ///
    /// Raised in rational mode for constructions whose distances are
    /// irrational (euclidean geometry in dimension ≥ 2, the half-plane with
    /// the L2 ground metric) and for non-integer cost exponents.
    #[error("not representable in exact rational arithmetic: {what}")]
    ExactUnsupported {
        /// What was attempted.
        what: String,
    },

    /// An explicit distance matrix failed a metric-pair axiom.
    #[error("metric validation failed: {reason}")]
    MetricValidation {
        /// Which axiom failed and where.
        reason: String,
    },

    /// A brute-force oracle was asked to handle an instance beyond its cap.
    #[error("instance too large for {oracle}: {size} exceeds cap {cap}")]
    InstanceTooLarge {
        /// Which oracle refused.
        oracle: String,
        /// Measured instance size.
        size: usize,
        /// The oracle's hard cap.
        cap: usize,
    },

    /// The enumeration oracle requires all weights equal to one.
    #[error("enumeration oracle requires unit weights, found {value}")]
    NonUnitWeights {
        /// The offending weight, rendered as text.
        value: String,
    },

    /// A function (integrand or dual potential) is missing a value at a
    /// support point.
    #[error("function has no value at point {index}")]
    MissingFunctionValue {
        /// The point with no assigned value.
        index: usize,
    },

    /// A truncation or retraction threshold was negative.
    #[error("negative threshold {value} for {what}")]
    NegativeThreshold {
        /// Human-readable location of the threshold.
        what: String,
        /// The offending value, rendered as text.
        value: String,
    },

    /// A band's lower threshold exceeded its upper threshold.
    #[error("band lower threshold {lo} exceeds upper threshold {hi}")]
    InvalidBand {
        /// Lower threshold, rendered as text.
        lo: String,
        /// Upper threshold, rendered as text.
        hi: String,
    },

    /// The LP solver detected an unbounded objective.
    ///
    /// Cannot happen for well-posed transport instances; indicates an
    /// internal formulation bug or corrupted cost data.
    #[error("linear program is unbounded")]
    LpUnbounded,

    /// The LP or network-simplex solver exceeded its pivot budget.
    #[error("solver exceeded {limit} pivots without converging")]
    PivotLimit {
        /// The pivot budget that was exhausted.
        limit: usize,
    },

    /// A computed solution failed a post-solve sanity check.
    #[error("solver produced an inconsistent solution: {reason}")]
    SolverInconsistency {
        /// Which check failed.
        reason: String,
    },

    /// An instance file or inline value could not be parsed.
    #[error("parse error: {reason}")]
    Parse {
        /// What went wrong.
        reason: String,
    },

    /// Underlying I/O failure while reading or writing files.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI should use for this error.
    ///
    /// `2` means the input was at fault, `3` means the solver failed
    /// internally on valid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::LpUnbounded
            | Error::PivotLimit { .. }
            | Error::SolverInconsistency { .. } => 3,
            _ => 2,
        }
    }
}
