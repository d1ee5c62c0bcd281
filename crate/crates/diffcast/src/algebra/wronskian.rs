//! Wronskian-rank certificates of model-order identifiability.

use num::{BigRational, One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::polynomial::Polynomial;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

/// Largest claimed order a certificate will evaluate. The full matrix for
/// order n has 2n+1 rows of derivatives up to order 2n; beyond n = 6 the
/// exact arithmetic stops being interactive.
pub const MAX_CERTIFICATE_ORDER: usize = 6;

/// Which Wronskian matrix to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WronskianKind {
    /// Order 2n+1: row chi (0 <= chi <= 2n) holds the chi-th derivatives of
    /// z^n X~, ..., X~, z^(n-1), ..., 1. Rank 2n exactly when the claimed
    /// order n is the minimal order of the sequence.
    Full,
    /// Order n+1: row mu (0 <= mu <= n) holds the (n+mu)-th derivatives of
    /// z^n X~, ..., X~. Rank n exactly when the claimed order is minimal.
    Dynamics,
}

/// Evaluation parameters for a certificate.
#[derive(Debug, Clone)]
pub struct CertificateOptions {
    /// Seed for the evaluation-point generator.
    pub seed: u64,
    /// Evaluation attempts before giving up; each picks a fresh rational
    /// point and the maximum observed rank is kept.
    pub retry_budget: u32,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions { seed: 0, retry_budget: 8 }
    }
}

/// Outcome of a rank evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WronskianCertificate {
    pub kind: WronskianKind,
    /// The claimed model order n.
    pub claimed_order: usize,
    /// Side length of the evaluated square matrix: 2n+1 or n+1.
    pub matrix_order: usize,
    /// Maximum rank observed over the evaluation attempts. Never exceeds the
    /// symbolic rank; equals it for all but finitely many points.
    pub rank: usize,
    /// The evaluation point that achieved `rank`.
    pub evaluation_point: BigRational,
    /// Whether `rank` equals the value predicted for a minimal order: 2n for
    /// the full matrix, n for the dynamics matrix.
    pub identifiable: bool,
}

/// Evaluates a certificate with default options. See
/// [`wronskian_certificate_with`].
pub fn wronskian_certificate(
    x: &RationalFunction,
    n: usize,
    kind: WronskianKind,
) -> Result<WronskianCertificate> {
    wronskian_certificate_with(x, n, kind, &CertificateOptions::default())
}

/// Decides whether the sequence generated by the proper rational function
/// `x` is identifiable at claimed order `n`.
///
/// The matrices are built from the shifted function X~ = X/z, whose reduced
/// denominator degree is the minimal from-zero order of the sequence and
/// whose numerator degree is strictly smaller; this keeps the non-X columns
/// z^(n-1), ..., 1 able to absorb the polynomial part of Q X~ at every
/// claimed order. Each column's derivatives are evaluated at a random
/// rational point with numerator and denominator bounded by 997 that avoids
/// every pole, through exact Taylor expansions at the point rather than
/// symbolic differentiation, and the rank of the resulting matrix is
/// computed by Gaussian elimination over the rationals. Evaluation can only
/// lose rank, never gain it, so the maximum over the retry budget is
/// reported.
pub fn wronskian_certificate_with(
    x: &RationalFunction,
    n: usize,
    kind: WronskianKind,
    options: &CertificateOptions,
) -> Result<WronskianCertificate> {
    if n == 0 {
        return Err(Error::Config("claimed order must be at least 1".into()));
    }
    if n > MAX_CERTIFICATE_ORDER {
        return Err(Error::UnsupportedOrder { n, max: MAX_CERTIFICATE_ORDER });
    }
    if !x.is_proper() {
        return Err(Error::Improper {
            num_degree: x.numerator().degree().unwrap_or(0),
            den_degree: x.denominator().degree().unwrap_or(0),
        });
    }

    let z = Polynomial::monomial(BigRational::one(), 1);
    let shifted = RationalFunction::new(x.numerator().clone(), &z * x.denominator())?;

    let (lo, hi) = match kind {
        WronskianKind::Full => (0, 2 * n),
        WronskianKind::Dynamics => (n, 2 * n),
    };
    let matrix_order = hi - lo + 1;

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut best: Option<(usize, BigRational)> = None;
    for _ in 0..options.retry_budget {
        let p: i64 = rng.random_range(-997..=997);
        let q: i64 = rng.random_range(1..=997);
        let point = BigRational::new(p.into(), q.into());
        // All entry denominators divide a power of the shifted denominator.
        if shifted.denominator().eval(&point).is_zero() {
            continue;
        }

        // Taylor coefficients of each column at the point, up to order hi.
        // Row chi of the Wronskian holds chi-th derivatives, which are the
        // jet coefficients times chi!; a common row scale does not move the
        // rank, so the jets are used directly.
        let x_jet = divide_jets(
            &polynomial_jet(shifted.numerator(), &point, hi),
            &polynomial_jet(shifted.denominator(), &point, hi),
        );
        let mut jets: Vec<Vec<BigRational>> = Vec::with_capacity(matrix_order);
        for i in (0..=n).rev() {
            let zi = polynomial_jet(&Polynomial::monomial(BigRational::one(), i), &point, hi);
            jets.push(multiply_jets(&zi, &x_jet));
        }
        if kind == WronskianKind::Full {
            for i in (0..n).rev() {
                jets.push(polynomial_jet(
                    &Polynomial::monomial(BigRational::one(), i),
                    &point,
                    hi,
                ));
            }
        }
        debug_assert_eq!(jets.len(), matrix_order);

        let numeric: Vec<Vec<BigRational>> = (lo..=hi)
            .map(|chi| jets.iter().map(|col| col[chi].clone()).collect())
            .collect();
        let rank = exact_rank(numeric);
        if best.as_ref().is_none_or(|(r, _)| rank > *r) {
            best = Some((rank, point));
        }
        if best.as_ref().is_some_and(|(r, _)| *r == matrix_order) {
            break;
        }
    }

    let (rank, evaluation_point) = best.ok_or_else(|| Error::Evaluation {
        attempts: options.retry_budget,
        denominator: shifted.denominator().to_string(),
    })?;
    let expected = match kind {
        WronskianKind::Full => 2 * n,
        WronskianKind::Dynamics => n,
    };
    Ok(WronskianCertificate {
        kind,
        claimed_order: n,
        matrix_order,
        rank,
        evaluation_point,
        identifiable: rank == expected,
    })
}

/// Taylor coefficients of `p` at `a` up to order `k` inclusive: entry `j` is
/// p^(j)(a) / j!. Computed by repeated synthetic division by (z - a), each
/// remainder being the next coefficient.
fn polynomial_jet(p: &Polynomial, a: &BigRational, k: usize) -> Vec<BigRational> {
    let mut work: Vec<BigRational> = p.coeffs().to_vec();
    let mut out = Vec::with_capacity(k + 1);
    for _ in 0..=k {
        if work.is_empty() {
            out.push(BigRational::zero());
            continue;
        }
        for i in (0..work.len() - 1).rev() {
            let t = &work[i + 1] * a;
            work[i] = &work[i] + &t;
        }
        // The constant term is now the remainder; what stays behind is the
        // quotient by (z - a), ready for the next round.
        out.push(work.remove(0));
    }
    out
}

/// Jet of the product of two equally long jets, truncated to their length.
fn multiply_jets(u: &[BigRational], v: &[BigRational]) -> Vec<BigRational> {
    let k = u.len();
    let mut out = vec![BigRational::zero(); k];
    for i in 0..k {
        if u[i].is_zero() {
            continue;
        }
        for j in 0..k - i {
            if v[j].is_zero() {
                continue;
            }
            let t = &u[i] * &v[j];
            out[i + j] = &out[i + j] + &t;
        }
    }
    out
}

/// Jet of the quotient u / v of two equally long jets; v's constant term
/// must be nonzero, which the pole check guarantees at every accepted point.
fn divide_jets(u: &[BigRational], v: &[BigRational]) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(u.len());
    for t in 0..u.len() {
        let mut acc = u[t].clone();
        for j in 1..=t {
            if v[j].is_zero() || out[t - j].is_zero() {
                continue;
            }
            acc -= &v[j] * &out[t - j];
        }
        out.push(acc / &v[0]);
    }
    out
}

/// Rank by Gaussian elimination over the rationals.
fn exact_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot);
        let lead = m[row].clone();
        for target in m.iter_mut().skip(row + 1) {
            if target[col].is_zero() {
                continue;
            }
            let factor = &target[col] / &lead[col];
            for (c, l) in lead.iter().enumerate().skip(col) {
                let t = &factor * l;
                target[c] = &target[c] - &t;
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}
