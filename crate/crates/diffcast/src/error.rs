//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An operation received an empty input where at least one element is
    /// required.
    #[error("empty input: {0}")]
    Empty(&'static str),

    /// A requested index range falls outside the span of the series.
    #[error("range [{from}, {to}) outside series span [{start}, {end}]")]
    OutOfRange { from: i64, to: i64, start: i64, end: i64 },

    /// Two series that must share start index and length do not.
    #[error(
        "series are not aligned: left spans [{left_start}, len {left_len}], \
         right spans [{right_start}, len {right_len}]"
    )]
    Misaligned {
        left_start: i64,
        left_len: usize,
        right_start: i64,
        right_len: usize,
    },

    /// A configuration value is outside its documented domain.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The input is structurally valid but numerically degenerate for the
    /// requested operation.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A forecast origin does not have enough history for the requested
    /// windows.
    #[error(
        "insufficient history at origin {origin}: {constraint} \
         (needs {needed} samples, {available} available)"
    )]
    InsufficientHistory {
        origin: i64,
        needed: usize,
        available: usize,
        constraint: String,
    },

    /// A generating function whose numerator degree exceeds its denominator
    /// degree does not expand into a causal sequence starting at t = 0.
    #[error(
        "improper generating function: numerator degree {num_degree} exceeds \
         denominator degree {den_degree}"
    )]
    Improper { num_degree: usize, den_degree: usize },

    /// A rational function was constructed with a zero denominator.
    #[error("zero denominator")]
    ZeroDenominator,

    /// A certificate was requested above the supported model order.
    #[error("order {n} exceeds the supported maximum {max}")]
    UnsupportedOrder { n: usize, max: usize },

    /// No pole-free evaluation point was found within the retry budget.
    #[error(
        "no pole-free evaluation point after {attempts} attempts; \
         poles are the roots of {denominator}"
    )]
    Evaluation { attempts: u32, denominator: String },
}
