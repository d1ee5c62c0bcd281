//! Conversions between linear recursions and rational generating functions.

use num::{BigRational, One, Zero};

use super::polynomial::Polynomial;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

/// Generating function `X(z) = sum x(t) z^-t` of the sequence defined by
/// `x(t+n) = a_1 x(t+n-1) + ... + a_n x(t)` with the given initial
/// conditions `x(0), ..., x(n-1)`.
///
/// The result is `P(z) / Q(z)` with `Q(z) = z^n - a_1 z^(n-1) - ... - a_n`
/// and `P` collecting the initial conditions; it is returned fully reduced,
/// so a non-minimal recursion cancels down to the minimal one. All-zero
/// initial conditions reduce to the zero function, which is a valid
/// generating function, not an error.
pub fn recursion_to_generating_function(
    coefficients: &[BigRational],
    initial_conditions: &[BigRational],
) -> Result<RationalFunction> {
    let n = coefficients.len();
    if n == 0 {
        return Err(Error::Empty("recursion coefficients"));
    }
    if initial_conditions.len() != n {
        return Err(Error::Config(format!(
            "{} initial conditions for order {n}",
            initial_conditions.len()
        )));
    }

    let mut q = vec![BigRational::zero(); n + 1];
    q[n] = BigRational::one();
    for (i, a) in coefficients.iter().enumerate() {
        q[n - 1 - i] = -a;
    }

    // P(z) = sum_{j=0}^{n-1} c_j sum_{k=0}^{n-1-j} x(k) z^(n-j-k) with
    // c_0 = 1 and c_j = -a_j, which is the polynomial part of Q(z) X(z).
    let mut p = vec![BigRational::zero(); n + 1];
    for j in 0..n {
        let c = if j == 0 { BigRational::one() } else { -&coefficients[j - 1] };
        if c.is_zero() {
            continue;
        }
        for (k, x0) in initial_conditions.iter().enumerate().take(n - j) {
            p[n - j - k] = &p[n - j - k] + &c * x0;
        }
    }

    RationalFunction::new(Polynomial::new(p), Polynomial::new(q))
}

/// A recursion recovered from a generating function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveredRecursion {
    /// Minimal order; zero only for the zero function.
    pub order: usize,
    /// `coefficients[i-1]` is `a_i`.
    pub coefficients: Vec<BigRational>,
    /// `x(0), ..., x(order-1)` from the power-series expansion.
    pub initial_conditions: Vec<BigRational>,
}

/// Recovers the minimal recursion and its initial conditions from a proper
/// rational generating function.
///
/// The minimal order is the denominator degree of the reduced form of
/// `X(z)/z`; on any output of [`recursion_to_generating_function`] (whose
/// numerator is always divisible by `z`) this equals the denominator degree
/// of `X` itself, and the recursion holds from `t = 0`. Initial conditions
/// come from polynomial long division of the expansion.
pub fn generating_function_to_recursion(x: &RationalFunction) -> Result<RecoveredRecursion> {
    if !x.is_proper() {
        return Err(Error::Improper {
            num_degree: x.numerator().degree().unwrap_or(0),
            den_degree: x.denominator().degree().unwrap_or(0),
        });
    }
    if x.is_zero() {
        return Ok(RecoveredRecursion {
            order: 0,
            coefficients: vec![],
            initial_conditions: vec![],
        });
    }

    let shifted = RationalFunction::new(
        x.numerator().clone(),
        &Polynomial::monomial(BigRational::one(), 1) * x.denominator(),
    )?;
    let q = shifted.denominator();
    let n = q.degree().expect("nonzero denominator");
    let coefficients: Vec<BigRational> = (1..=n).map(|i| -q.coeff(n - i)).collect();
    let initial_conditions = x.power_series(n)?;
    Ok(RecoveredRecursion { order: n, coefficients, initial_conditions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_integers(num), Polynomial::from_integers(den))
            .unwrap()
    }

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn constant_series_gives_z_over_z_minus_one() {
        let x = recursion_to_generating_function(&rats(&[1]), &rats(&[1])).unwrap();
        assert_eq!(x, rf(&[0, 1], &[-1, 1]));
    }

    #[test]
    fn geometric_series_gives_z_over_z_minus_two() {
        let x = recursion_to_generating_function(&rats(&[2]), &rats(&[1])).unwrap();
        assert_eq!(x, rf(&[0, 1], &[-2, 1]));
    }

    #[test]
    fn fibonacci_gives_z_over_characteristic() {
        let x = recursion_to_generating_function(&rats(&[1, 1]), &rats(&[0, 1])).unwrap();
        assert_eq!(x, rf(&[0, 1], &[-1, -1, 1]));
    }

    #[test]
    fn non_minimal_recursion_reduces() {
        // Constant series fed as an order-2 recursion with a double root at 1.
        let x = recursion_to_generating_function(&rats(&[2, -1]), &rats(&[1, 1])).unwrap();
        assert_eq!(x, rf(&[0, 1], &[-1, 1]));
    }

    #[test]
    fn all_zero_initials_reduce_to_zero_function() {
        let x = recursion_to_generating_function(&rats(&[3, 0]), &rats(&[0, 0])).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            recursion_to_generating_function(&[], &[]),
            Err(Error::Empty(_))
        ));
        assert!(matches!(
            recursion_to_generating_function(&rats(&[1]), &rats(&[1, 2])),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn recovers_constant_series() {
        let r = generating_function_to_recursion(&rf(&[0, 1], &[-1, 1])).unwrap();
        assert_eq!(r.order, 1);
        assert_eq!(r.coefficients, rats(&[1]));
        assert_eq!(r.initial_conditions, rats(&[1]));
    }

    #[test]
    fn recovers_alternating_series_from_reducible_input() {
        // (z^2 - z)/(z^2 - 1) reduces to z/(z+1): order 1, a_1 = -1, x(0) = 1.
        let r = generating_function_to_recursion(&rf(&[0, -1, 1], &[-1, 0, 1])).unwrap();
        assert_eq!(r.order, 1);
        assert_eq!(r.coefficients, rats(&[-1]));
        assert_eq!(r.initial_conditions, rats(&[1]));
    }

    #[test]
    fn recovers_fibonacci() {
        let r = generating_function_to_recursion(&rf(&[0, 1], &[-1, -1, 1])).unwrap();
        assert_eq!(r.order, 2);
        assert_eq!(r.coefficients, rats(&[1, 1]));
        assert_eq!(r.initial_conditions, rats(&[0, 1]));
    }

    #[test]
    fn zero_function_recovers_order_zero() {
        let r = generating_function_to_recursion(&RationalFunction::zero()).unwrap();
        assert_eq!(r.order, 0);
        assert!(r.coefficients.is_empty());
    }

    #[test]
    fn rejects_improper_input() {
        let x = rf(&[0, 0, 1], &[-1, 1]);
        assert!(matches!(
            generating_function_to_recursion(&x),
            Err(Error::Improper { .. })
        ));
    }

    #[test]
    fn numerator_with_nonzero_constant_term_needs_higher_order() {
        // (z+3)/(z-2) expands to 1, 5, 10, 20, ...: the one-step relation
        // only holds from t = 1, so the minimal from-zero order is 2.
        let x = rf(&[3, 1], &[-2, 1]);
        let r = generating_function_to_recursion(&x).unwrap();
        assert_eq!(r.order, 2);
        assert_eq!(r.coefficients, rats(&[2, 0]));
        assert_eq!(r.initial_conditions, rats(&[1, 5]));
        // Round-trip through the recovered recursion reproduces X.
        let back =
            recursion_to_generating_function(&r.coefficients, &r.initial_conditions).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn round_trip_is_identity_for_minimal_recursions() {
        let cases: Vec<(Vec<BigRational>, Vec<BigRational>)> = vec![
            (rats(&[1]), rats(&[1])),
            (rats(&[2]), rats(&[1])),
            (rats(&[-1]), rats(&[1])),
            (rats(&[1, 1]), rats(&[0, 1])),
            // Roots 1 and 1/2; the seeds keep both modes present, since
            // (2, 1) would collapse to the pure geometric half sequence.
            (vec![ratio(3, 2), ratio(-1, 2)], vec![rat(2), rat(3)]),
            (rats(&[0, 0, 6]), rats(&[1, 2, 3])),
        ];
        for (a, x0) in cases {
            let x = recursion_to_generating_function(&a, &x0).unwrap();
            let r = generating_function_to_recursion(&x).unwrap();
            assert_eq!(r.order, a.len(), "order changed for {a:?}");
            assert_eq!(r.coefficients, a);
            assert_eq!(r.initial_conditions, x0);
        }
    }

    #[test]
    fn round_trip_of_non_minimal_recursion_returns_reduced_order() {
        // Order-3 encoding of the Fibonacci sequence: extra root at z = 2.
        // (z - 2)(z^2 - z - 1) = z^3 - 3z^2 + z + 2.
        let a = rats(&[3, -1, -2]);
        let x0 = rats(&[0, 1, 1]);
        let x = recursion_to_generating_function(&a, &x0).unwrap();
        let r = generating_function_to_recursion(&x).unwrap();
        assert_eq!(r.order, 2);
        assert_eq!(r.coefficients, rats(&[1, 1]));
        assert_eq!(r.initial_conditions, rats(&[0, 1]));
    }
}
