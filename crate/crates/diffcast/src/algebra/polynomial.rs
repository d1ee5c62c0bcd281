//! Dense univariate polynomials over arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Polynomial in `z` with rational coefficients, stored ascending:
/// `coeffs[k]` multiplies `z^k`. Trailing zeros are trimmed; the zero
/// polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Polynomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Polynomial::new(vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Polynomial { coeffs }
    }

    /// Convenience constructor from ascending integer coefficients.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Coefficient of `z^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(k.into()))
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Divides every coefficient by the leading one. Panics on zero.
    pub fn into_monic(self) -> Polynomial {
        let lead = self.leading();
        assert!(!lead.is_zero(), "cannot normalize the zero polynomial");
        if lead.is_one() {
            return self;
        }
        Polynomial { coeffs: self.coeffs.iter().map(|a| a / &lead).collect() }
    }

    pub fn pow(&self, mut e: usize) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: returns `(quotient, remainder)` with
    /// `self = quotient * divisor + remainder` and
    /// `deg remainder < deg divisor`. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        let lead = divisor.leading();
        for k in (dd..rem.len()).rev() {
            let c = &rem[k] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = d * &c;
                rem[k - dd + j] = &rem[k - dd + j] - t;
            }
            quot[k - dd] = c;
        }
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Exact division; panics if the divisor does not divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Polynomial {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor. `gcd(0, b)` is monic `b`.
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
        if a.is_zero() && b.is_zero() {
            return Polynomial::zero();
        }
        if a.is_zero() {
            return b.clone().into_monic();
        }
        if b.is_zero() {
            return a.clone().into_monic();
        }
        let ia = a.primitive_integer();
        let ib = b.primitive_integer();
        // A single modular image almost always certifies coprimality and
        // skips the exact remainder sequence entirely.
        if coprime_mod_p(&ia, &ib) {
            return Polynomial::one();
        }
        let g = integer_gcd(ia, ib);
        Polynomial::new(g.iter().map(|c| BigRational::from_integer(c.clone())).collect())
            .into_monic()
    }

    pub fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
        if a.is_zero() || b.is_zero() {
            return Polynomial::zero();
        }
        let g = Polynomial::gcd(a, b);
        (a * &b.div_exact(&g)).into_monic()
    }

    /// Applies the polynomial in the shift operator to a sequence:
    /// `sum_k coeff(k) * seq[t + k]`.
    pub fn apply_shift(&self, seq: &[BigRational], t: usize) -> BigRational {
        let mut acc = BigRational::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &seq[t + k];
            }
        }
        acc
    }

    /// Clears denominators and content, yielding primitive integer
    /// coefficients with positive leading sign.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let mut denom_lcm = BigInt::one();
        for c in &self.coeffs {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        if !content.is_zero() && !content.is_one() {
            for c in &mut ints {
                *c = &*c / &content;
            }
        }
        if ints.last().is_some_and(|c| c.sign() == Sign::Minus) {
            for c in &mut ints {
                *c = -&*c;
            }
        }
        ints
    }
}

/// GCD of primitive integer polynomials via the primitive pseudo-remainder
/// sequence; keeps intermediate coefficients bounded.
fn integer_gcd(mut a: Vec<BigInt>, mut b: Vec<BigInt>) -> Vec<BigInt> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_empty() {
            return a;
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive_part(r);
    }
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn primitive_part(v: Vec<BigInt>) -> Vec<BigInt> {
    let v = trim(v);
    if v.is_empty() {
        return v;
    }
    let mut content = BigInt::zero();
    for c in &v {
        content = content.gcd(c);
    }
    v.into_iter().map(|c| c / &content).collect()
}

/// Remainder of `lc(b)^(deg a - deg b + 1) * a` divided by `b` over the
/// integers.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut rem: Vec<BigInt> = a.to_vec();
    while rem.len() > db {
        let k = rem.len() - 1;
        let c = rem[k].clone();
        for r in rem.iter_mut() {
            *r = &*r * &lead;
        }
        for j in 0..=db {
            rem[k - db + j] = &rem[k - db + j] - &c * &b[j];
        }
        rem = trim(rem);
        if rem.len() <= db {
            break;
        }
    }
    rem
}

const GCD_PROBE_PRIME: u64 = 1_000_003;

/// True when the images of `a` and `b` modulo a fixed prime are coprime,
/// which certifies coprimality over the rationals. False is inconclusive.
fn coprime_mod_p(a: &[BigInt], b: &[BigInt]) -> bool {
    let p = GCD_PROBE_PRIME;
    let ra = mod_p(a, p);
    let rb = mod_p(b, p);
    // Degree loss under reduction would invalidate the certificate.
    if ra.len() != a.len() || rb.len() != b.len() {
        return false;
    }
    let mut x = ra;
    let mut y = rb;
    while !y.is_empty() {
        let r = mod_p_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x.len() == 1
}

fn mod_p(a: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut out: Vec<u64> = a
        .iter()
        .map(|c| {
            let m = c.mod_floor(&pb);
            let (_, digits) = m.to_u64_digits();
            digits.first().copied().unwrap_or(0)
        })
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn mod_p_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let lead_inv = mod_p_inv(b[db], p);
    let mut rem = a.to_vec();
    while rem.len() > db {
        let k = rem.len() - 1;
        let c = mulmod(rem[k], lead_inv, p);
        for j in 0..=db {
            let t = mulmod(c, b[j], p);
            rem[k - db + j] = (rem[k - db + j] + p - t) % p;
        }
        while rem.last() == Some(&0) {
            rem.pop();
        }
    }
    rem
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_p_inv(a: u64, p: u64) -> u64 {
    // Fermat: p is prime.
    let mut result: u64 = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(result, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    result
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - rhs.coeff(k));
        }
        Polynomial::new(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag} z")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{mag} z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};

    fn poly(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_integers(coeffs)
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = Polynomial::new(vec![rat(1), rat(0), rat(0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(Polynomial::new(vec![rat(0)]).is_zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn arithmetic_basics() {
        let a = poly(&[1, 2]); // 1 + 2z
        let b = poly(&[3, 0, 1]); // 3 + z^2
        assert_eq!(&a + &b, poly(&[4, 2, 1]));
        assert_eq!(&b - &a, poly(&[2, -2, 1]));
        assert_eq!(&a * &b, poly(&[3, 6, 1, 2]));
        assert_eq!(&a - &a, Polynomial::zero());
    }

    #[test]
    fn evaluation_uses_horner() {
        let p = poly(&[-1, 0, 1]); // z^2 - 1
        assert_eq!(p.eval(&rat(3)), rat(8));
        assert_eq!(p.eval(&ratio(1, 2)), ratio(-3, 4));
    }

    #[test]
    fn derivative_drops_degree() {
        let p = poly(&[5, -1, 0, 2]); // 2z^3 - z + 5
        assert_eq!(p.derivative(), poly(&[-1, 0, 6]));
        assert_eq!(Polynomial::one().derivative(), Polynomial::zero());
    }

    #[test]
    fn div_rem_is_euclidean() {
        let a = poly(&[-1, 0, 0, 1]); // z^3 - 1
        let b = poly(&[-1, 1]); // z - 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, poly(&[1, 1, 1]));
        assert!(r.is_zero());

        let (q, r) = poly(&[1, 1]).div_rem(&poly(&[0, 0, 1]));
        assert!(q.is_zero());
        assert_eq!(r, poly(&[1, 1]));
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (z - 1)(z + 2) and (z - 1)(z - 3)
        let a = poly(&[-2, 1, 1]);
        let b = poly(&[3, -4, 1]);
        assert_eq!(Polynomial::gcd(&a, &b), poly(&[-1, 1]));
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let a = poly(&[1, 1]);
        let b = poly(&[2, 1]);
        assert_eq!(Polynomial::gcd(&a, &b), Polynomial::one());
    }

    #[test]
    fn gcd_handles_rational_coefficients_and_zero() {
        let a = Polynomial::new(vec![ratio(-1, 2), ratio(1, 2)]); // (z - 1)/2
        let b = poly(&[1, -2, 1]); // (z - 1)^2
        assert_eq!(Polynomial::gcd(&a, &b), poly(&[-1, 1]));
        assert_eq!(Polynomial::gcd(&Polynomial::zero(), &poly(&[0, 2])), poly(&[0, 1]));
    }

    #[test]
    fn gcd_with_repeated_factors() {
        let f = poly(&[-1, 1]); // z - 1
        let g = poly(&[2, 1]); // z + 2
        let a = &f.pow(3) * &g;
        let b = &f.pow(2) * &g.pow(2);
        assert_eq!(Polynomial::gcd(&a, &b), &f.pow(2) * &g);
    }

    #[test]
    fn lcm_contains_both_factors() {
        let a = poly(&[-1, 1]); // z - 1
        let b = poly(&[1, -2, 1]); // (z - 1)^2
        assert_eq!(Polynomial::lcm(&a, &b), b);
        let c = poly(&[2, 1]);
        assert_eq!(Polynomial::lcm(&a, &c), &a * &c);
    }

    #[test]
    fn pow_small_cases() {
        let p = poly(&[-1, 1]);
        assert_eq!(p.pow(0), Polynomial::one());
        assert_eq!(p.pow(1), p);
        assert_eq!(p.pow(2), poly(&[1, -2, 1]));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(poly(&[-1, 0, 1]).to_string(), "z^2 - 1");
        assert_eq!(poly(&[1, -2]).to_string(), "-2 z + 1");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(
            Polynomial::new(vec![ratio(1, 2), rat(1)]).to_string(),
            "z + 1/2"
        );
    }
}
