//! Annihilating recursions for structured forcing terms.

use num::{BigRational, One, Signed};

use super::polynomial::Polynomial;
use crate::error::{Error, Result};

/// A forcing term with a known finite-order annihilator.
///
/// A polynomial of degree d times alpha^t is killed by (z - alpha)^(d+1)
/// applied in the shift operator; a polynomial of degree d times
/// sin(omega t + phi) is killed by (z^2 - 2 cos(omega) z + 1)^(d+1) for any
/// phase, which is why no phase is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForcingTerm {
    /// `p(t) * base^t` with `deg p = degree`.
    PolynomialExponential { degree: usize, base: BigRational },
    /// `p(t) * sin(omega t + phi)` with `deg p = degree` and rational
    /// `cos(omega)`.
    Sinusoid { degree: usize, cos_omega: BigRational },
}

impl ForcingTerm {
    pub fn polynomial_exponential(degree: usize, base: BigRational) -> Self {
        ForcingTerm::PolynomialExponential { degree, base }
    }

    /// Builds a sinusoidal term. The phase argument is accepted for symmetry
    /// with the signal definition but discarded: the annihilator does not
    /// depend on it. `cos_omega` must lie in [-1, 1].
    pub fn sinusoid(degree: usize, cos_omega: BigRational, _phase: f64) -> Result<Self> {
        if cos_omega.abs() > BigRational::one() {
            return Err(Error::Config(format!(
                "cos(omega) = {cos_omega} outside [-1, 1]"
            )));
        }
        Ok(ForcingTerm::Sinusoid { degree, cos_omega })
    }

    /// The characteristic factor annihilating this single term.
    fn characteristic_factor(&self) -> Polynomial {
        match self {
            ForcingTerm::PolynomialExponential { degree, base } => {
                let linear = Polynomial::new(vec![-base, BigRational::one()]);
                linear.pow(degree + 1)
            }
            ForcingTerm::Sinusoid { degree, cos_omega } => {
                let quad = Polynomial::new(vec![
                    BigRational::one(),
                    -(cos_omega + cos_omega),
                    BigRational::one(),
                ]);
                quad.pow(degree + 1)
            }
        }
    }
}

/// Monic characteristic polynomial of the lowest-order recursion that
/// annihilates every given forcing term: the least common multiple of the
/// per-term factors.
pub fn annihilating_recursion(terms: &[ForcingTerm]) -> Result<Polynomial> {
    if terms.is_empty() {
        return Err(Error::Empty("forcing terms"));
    }
    let mut acc = Polynomial::one();
    for term in terms {
        acc = Polynomial::lcm(&acc, &term.characteristic_factor());
    }
    Ok(acc.into_monic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};
    use num::Zero;

    #[test]
    fn constant_term_gives_z_minus_one() {
        let a = annihilating_recursion(&[ForcingTerm::polynomial_exponential(0, rat(1))])
            .unwrap();
        assert_eq!(a, Polynomial::from_integers(&[-1, 1]));
    }

    #[test]
    fn linear_times_geometric_gives_squared_factor() {
        // t * 3^t needs (z - 3)^2.
        let a = annihilating_recursion(&[ForcingTerm::polynomial_exponential(1, rat(3))])
            .unwrap();
        assert_eq!(a, Polynomial::from_integers(&[9, -6, 1]));
    }

    #[test]
    fn sinusoid_with_cos_one_half_gives_quadratic() {
        // cos(omega) = 1/2: z^2 - z + 1, independent of the phase.
        let a = annihilating_recursion(&[ForcingTerm::sinusoid(0, ratio(1, 2), 0.7).unwrap()])
            .unwrap();
        assert_eq!(a, Polynomial::from_integers(&[1, -1, 1]));
        let b = annihilating_recursion(&[ForcingTerm::sinusoid(0, ratio(1, 2), -2.4).unwrap()])
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sinusoid_validates_cosine_bound() {
        assert!(ForcingTerm::sinusoid(0, ratio(3, 2), 0.0).is_err());
        assert!(ForcingTerm::sinusoid(0, rat(-1), 0.0).is_ok());
    }

    #[test]
    fn mixed_terms_take_the_lcm() {
        // Constant plus t*3^t: (z - 1)(z - 3)^2.
        let a = annihilating_recursion(&[
            ForcingTerm::polynomial_exponential(0, rat(1)),
            ForcingTerm::polynomial_exponential(1, rat(3)),
        ])
        .unwrap();
        let expect = &Polynomial::from_integers(&[-1, 1])
            * &Polynomial::from_integers(&[9, -6, 1]);
        assert_eq!(a, expect);
        assert!(a.is_monic());
    }

    #[test]
    fn overlapping_factors_are_not_duplicated() {
        // 2^t and t*2^t share the factor (z - 2); the lcm is (z - 2)^2.
        let a = annihilating_recursion(&[
            ForcingTerm::polynomial_exponential(0, rat(2)),
            ForcingTerm::polynomial_exponential(1, rat(2)),
        ])
        .unwrap();
        assert_eq!(a, Polynomial::from_integers(&[4, -4, 1]));
    }

    #[test]
    fn empty_term_list_is_an_error() {
        assert!(matches!(annihilating_recursion(&[]), Err(Error::Empty(_))));
    }

    /// Applies the annihilator in the shift operator to exactly generated
    /// sequences and checks for identical zero.
    #[test]
    fn annihilates_explicit_sequences_exactly() {
        // t^2 * (5/3)^t over 50 terms.
        let term = ForcingTerm::polynomial_exponential(2, ratio(5, 3));
        let ann = annihilating_recursion(&[term]).unwrap();
        let seq: Vec<BigRational> = (0..60)
            .map(|t| rat((t * t) as i64) * ratio(5, 3).pow(t))
            .collect();
        for t in 0..50 {
            assert!(ann.apply_shift(&seq, t).is_zero(), "nonzero at t = {t}");
        }

        // t * w(t) where w solves w(t+2) = 2 cos(omega) w(t+1) - w(t) with
        // rational cos(omega) = 3/5 and rational seeds; this spans every
        // phase of the underlying sinusoid.
        let c = ratio(3, 5);
        let mut w = vec![rat(2), ratio(1, 7)];
        for t in 0..70 {
            let next = (&c + &c) * &w[t + 1] - &w[t];
            w.push(next);
        }
        let seq: Vec<BigRational> =
            w.iter().enumerate().map(|(t, v)| rat(t as i64) * v).collect();
        let ann = annihilating_recursion(&[ForcingTerm::sinusoid(1, c, 1.0).unwrap()]).unwrap();
        for t in 0..50 {
            assert!(ann.apply_shift(&seq, t).is_zero(), "nonzero at t = {t}");
        }
    }
}
