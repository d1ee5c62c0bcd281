//! Rational functions kept reduced with a monic denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num::{BigRational, One, Zero};

use super::polynomial::Polynomial;
use crate::error::{Error, Result};

/// Ratio of two polynomials. The stored pair is always fully reduced and the
/// denominator is monic, so equality of values is structural equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Polynomial::one() });
        }
        let g = Polynomial::gcd(&num, &den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lead = den.leading();
        if !lead.is_one() {
            let inv = BigRational::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn zero() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// True when the numerator degree does not exceed the denominator degree,
    /// so the expansion in powers of 1/z has no positive powers of z.
    pub fn is_proper(&self) -> bool {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => true,
            (Some(n), Some(d)) => n <= d,
            (Some(_), None) => unreachable!("denominator is never zero"),
        }
    }

    /// Quotient-rule derivative, reduced on construction.
    pub fn derivative(&self) -> RationalFunction {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let den = &self.den * &self.den;
        RationalFunction::new(num, den).expect("denominator square is nonzero")
    }

    /// Value at `z`, or `None` when `z` is a pole.
    pub fn eval(&self, z: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(z) / d)
    }

    /// First `count` coefficients of the expansion `sum x(t) z^-t`.
    ///
    /// Requires a proper function; an improper one has no causal expansion
    /// starting at t = 0.
    pub fn power_series(&self, count: usize) -> Result<Vec<BigRational>> {
        if !self.is_proper() {
            return Err(Error::Improper {
                num_degree: self.num.degree().unwrap_or(0),
                den_degree: self.den.degree().unwrap_or(0),
            });
        }
        if self.is_zero() {
            return Ok(vec![BigRational::zero(); count]);
        }
        // Substitute w = 1/z and divide power series: with q = deg den, the
        // w-polynomials are den*(w) = sum den[q-m] w^m (constant term 1 by
        // monicity) and num*(w) = sum num[q-m] w^m.
        let q = self.den.degree().unwrap();
        let mut out = Vec::with_capacity(count);
        for t in 0..count {
            let mut x = if t <= q { self.num.coeff(q - t) } else { BigRational::zero() };
            for m in 1..=q.min(t) {
                let d = self.den.coeff(q - m);
                if !d.is_zero() {
                    x -= d * &out[t - m];
                }
            }
            out.push(x);
        }
        Ok(out)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalFunction::new(num, den).expect("product of nonzero denominators")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalFunction::new(num, den).expect("product of nonzero denominators")
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("product of nonzero denominators")
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
            .expect("nonzero divisor numerator")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) || self.den.is_monic() && self.den.degree().is_none() {
            return write!(f, "{}", self.num);
        }
        if self.den == Polynomial::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_integers(num), Polynomial::from_integers(den))
            .unwrap()
    }

    #[test]
    fn zero_denominator_is_an_error() {
        let r = RationalFunction::new(Polynomial::one(), Polynomial::zero());
        assert!(matches!(r, Err(Error::ZeroDenominator)));
    }

    #[test]
    fn reduces_and_normalizes_to_monic_denominator() {
        // (z^2 - z) / (z^2 - 1) reduces to z / (z + 1).
        let x = rf(&[0, -1, 1], &[-1, 0, 1]);
        assert_eq!(x, rf(&[0, 1], &[1, 1]));
        // (2z) / (2z - 2) normalizes to z / (z - 1).
        let y = rf(&[0, 2], &[-2, 2]);
        assert_eq!(y.denominator(), &Polynomial::from_integers(&[-1, 1]));
        assert_eq!(y.numerator(), &Polynomial::from_integers(&[0, 1]));
    }

    #[test]
    fn zero_numerator_collapses_to_canonical_zero() {
        let x = rf(&[0], &[-1, 0, 1]);
        assert!(x.is_zero());
        assert_eq!(x.denominator(), &Polynomial::one());
    }

    #[test]
    fn arithmetic_reduces_results() {
        let a = rf(&[1], &[-1, 1]); // 1/(z-1)
        let b = rf(&[1], &[1, 1]); // 1/(z+1)
        let s = &a + &b;
        assert_eq!(s, rf(&[0, 2], &[-1, 0, 1])); // 2z/(z^2-1)
        let p = &a * &b;
        assert_eq!(p, rf(&[1], &[-1, 0, 1]));
        let d = &a - &a;
        assert!(d.is_zero());
        let q = &p / &b;
        assert_eq!(q, a);
    }

    #[test]
    fn derivative_matches_hand_computation() {
        // d/dz [z/(z-2)] = -2/(z-2)^2
        let x = rf(&[0, 1], &[-2, 1]);
        assert_eq!(x.derivative(), rf(&[-2], &[4, -4, 1]));
        // Second derivative: 4/(z-2)^3.
        assert_eq!(x.derivative().derivative(), rf(&[4], &[-8, 12, -6, 1]));
    }

    #[test]
    fn eval_detects_poles() {
        let x = rf(&[0, 1], &[-2, 1]);
        assert_eq!(x.eval(&rat(3)), Some(rat(3)));
        assert_eq!(x.eval(&rat(2)), None);
    }

    #[test]
    fn propriety_is_degree_comparison() {
        assert!(rf(&[0, 1], &[-1, 1]).is_proper()); // z/(z-1)
        assert!(rf(&[1], &[-1, 0, 1]).is_proper());
        assert!(!rf(&[0, 0, 1], &[-1, 1]).is_proper()); // z^2/(z-1)
        assert!(RationalFunction::zero().is_proper());
    }

    #[test]
    fn power_series_of_geometric() {
        // z/(z-2) expands to sum 2^t z^-t.
        let x = rf(&[0, 1], &[-2, 1]);
        let s = x.power_series(6).unwrap();
        let expect: Vec<_> = (0..6).map(|t| rat(1 << t)).collect();
        assert_eq!(s, expect);
    }

    #[test]
    fn power_series_of_fibonacci() {
        let x = rf(&[0, 1], &[-1, -1, 1]); // z/(z^2-z-1)
        let s = x.power_series(8).unwrap();
        let expect: Vec<_> = [0, 1, 1, 2, 3, 5, 8, 13].iter().map(|&v| rat(v)).collect();
        assert_eq!(s, expect);
    }

    #[test]
    fn power_series_with_equal_degrees_starts_at_leading_ratio() {
        // (z+3)/(z-2): x(0) = 1, then x(t+1) = 2 x(t) + leftover forcing at
        // the first step only: series is 1, 5, 10, 20, ...
        let x = rf(&[3, 1], &[-2, 1]);
        let s = x.power_series(4).unwrap();
        assert_eq!(s, vec![rat(1), rat(5), rat(10), rat(20)]);
    }

    #[test]
    fn power_series_rejects_improper_input() {
        let x = rf(&[0, 0, 1], &[-1, 1]);
        assert!(matches!(x.power_series(3), Err(Error::Improper { .. })));
    }
}
