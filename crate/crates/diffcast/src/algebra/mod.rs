//! Exact rational-arithmetic kernel: generating functions of linear
//! recursions, annihilators of structured forcing terms, and Wronskian-rank
//! identifiability certificates.
//!
//! Everything in this module computes over arbitrary-precision rationals;
//! floating point is deliberately absent. The generating function of a
//! sequence x(0), x(1), ... is the formal series X(z) = sum x(t) z^-t, which
//! is rational exactly when x satisfies a linear difference equation with
//! constant coefficients.

mod annihilator;
mod polynomial;
mod rational;
mod recursion;
mod wronskian;

pub use annihilator::{annihilating_recursion, ForcingTerm};
pub use polynomial::Polynomial;
pub use rational::RationalFunction;
pub use recursion::{
    generating_function_to_recursion, recursion_to_generating_function, RecoveredRecursion,
};
pub use wronskian::{
    wronskian_certificate, wronskian_certificate_with, CertificateOptions, WronskianCertificate,
    WronskianKind, MAX_CERTIFICATE_ORDER,
};

use num::BigRational;

/// Shorthand for building a rational from an integer.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Shorthand for building the rational `p / q`. Panics when `q` is zero.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}
