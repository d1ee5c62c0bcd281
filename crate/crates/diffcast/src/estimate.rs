//! Trendline smoothing and sliding-window identification.
//!
//! The smoother fits a low-degree polynomial to a trailing window by least
//! squares and keeps the fitted value at the window's right endpoint, so the
//! output at time t never depends on samples after t. Identification solves
//! the overdetermined linear system built from shifted copies of the
//! smoothed window for the recursion coefficients, with singular-value
//! truncation guarding near-singular windows.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::core::{DifferenceEquationModel, TimeSeries};
use crate::error::{Error, Result};

/// Causal local-polynomial smoother settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmootherConfig {
    /// Trailing window length W.
    pub window: usize,
    /// Polynomial degree d; capped at the available sample count minus one
    /// on the startup prefix.
    pub degree: usize,
}

impl Default for SmootherConfig {
    fn default() -> Self {
        SmootherConfig { window: 20, degree: 2 }
    }
}

impl SmootherConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window == 0 {
            return Err(Error::Config("smoother window must be at least 1".into()));
        }
        Ok(())
    }
}

/// Sliding-window identification settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentificationConfig {
    /// Model order n.
    pub order: usize,
    /// Window length L; must be at least 2n so the system is overdetermined.
    pub window: usize,
    /// Relative singular-value truncation threshold, in (0, 1).
    pub rank_tolerance: f64,
}

impl Default for IdentificationConfig {
    fn default() -> Self {
        IdentificationConfig { order: 3, window: 45, rank_tolerance: 1e-10 }
    }
}

impl IdentificationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::Config("model order must be at least 1".into()));
        }
        if self.window < 2 * self.order {
            return Err(Error::Config(format!(
                "identification window {} shorter than twice the order {}",
                self.window, self.order
            )));
        }
        if !(self.rank_tolerance > 0.0 && self.rank_tolerance < 1.0) {
            return Err(Error::Config(format!(
                "rank tolerance {} outside (0, 1)",
                self.rank_tolerance
            )));
        }
        Ok(())
    }
}

/// Endpoint weights of the degree-d least-squares fit over `w` trailing
/// samples: the smoothed value is the dot product of the weights with the
/// window, oldest sample first.
fn endpoint_weights(w: usize, degree: usize) -> Vec<f64> {
    let d = degree.min(w - 1);
    // Abscissae -(w-1), ..., 0 put the fit's constant term at the right
    // endpoint, so only the first row of the normal-equation inverse is
    // needed.
    let cols = d + 1;
    let mut g = DMatrix::zeros(cols, cols);
    for i in 0..cols {
        for j in 0..cols {
            let mut s = 0.0;
            for k in 0..w {
                let x = -((w - 1 - k) as f64);
                s += x.powi((i + j) as i32);
            }
            g[(i, j)] = s;
        }
    }
    let mut e0 = DVector::zeros(cols);
    e0[0] = 1.0;
    let u = g
        .lu()
        .solve(&e0)
        .expect("normal-equation matrix of a well-posed fit is invertible");
    (0..w)
        .map(|k| {
            let x = -((w - 1 - k) as f64);
            (0..cols).map(|j| u[j] * x.powi(j as i32)).sum()
        })
        .collect()
}

/// Smooths a series with the causal local-polynomial filter. Output spans
/// the input exactly; the first samples use shortened windows with the
/// degree capped at the available length minus one.
pub fn causal_smooth(series: &TimeSeries, config: &SmootherConfig) -> Result<TimeSeries> {
    config.validate()?;
    let values = series.values();
    let max_w = config.window.min(values.len());
    let mut weights_by_len: Vec<Vec<f64>> = Vec::with_capacity(max_w);
    for w in 1..=max_w {
        weights_by_len.push(endpoint_weights(w, config.degree));
    }
    let smoothed = (0..values.len())
        .map(|i| {
            let w = config.window.min(i + 1);
            let weights = &weights_by_len[w - 1];
            weights
                .iter()
                .zip(&values[i + 1 - w..=i])
                .map(|(c, v)| c * v)
                .sum()
        })
        .collect();
    match series.labels() {
        Some(labels) => TimeSeries::with_labels(series.start_index(), smoothed, labels.to_vec()),
        None => TimeSeries::new(series.start_index(), smoothed),
    }
}

/// Thin singular value decomposition of a tall matrix by one-sided Jacobi
/// rotations. Returns the rotated column matrix B = U * diag(sigma), the
/// singular values (unsorted), and the right factor V with A = B * V^T.
///
/// The identification regressor has few columns, where this method is both
/// cheap and accurate to high relative precision, and it stays exact on
/// rank-deficient input: a dependent column converges to a zero column
/// instead of contaminating the factors.
fn jacobi_svd(a: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let n = a.ncols();
    let mut b = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let tol = 1e-14;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = b.column(p).dot(&b.column(p));
                let beta = b.column(q).dot(&b.column(q));
                let gamma = b.column(p).dot(&b.column(q));
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for m in [&mut b, &mut v] {
                    for i in 0..m.nrows() {
                        let mp = m[(i, p)];
                        let mq = m[(i, q)];
                        m[(i, p)] = c * mp - s * mq;
                        m[(i, q)] = s * mp + c * mq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = (0..n).map(|k| b.column(k).norm()).collect();
    (b, sigma, v)
}

/// Identifies the recursion coefficients on the window of `config.window`
/// samples whose first sample sits at `window_origin`.
///
/// The regressor row for window-relative time t is
/// `(x(t+n-1), ..., x(t))` with target `x(t+n)`; the minimum-norm
/// least-squares solution is taken after discarding singular values below
/// `rank_tolerance` times the largest. The reported condition number is the
/// ratio of the extreme singular values of the regressor, before
/// truncation.
pub fn identify_window(
    series: &TimeSeries,
    window_origin: i64,
    config: &IdentificationConfig,
) -> Result<DifferenceEquationModel> {
    config.validate()?;
    let window = series.slice(window_origin, config.window)?;
    let w = window.values();
    let n = config.order;
    let rows = config.window - n;

    let regressor = DMatrix::from_fn(rows, n, |r, c| w[r + n - 1 - c]);
    let target = DVector::from_fn(rows, |r, _| w[r + n]);

    let (b, sigma, v) = jacobi_svd(&regressor);
    let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
    if sigma_max <= 0.0 {
        return Err(Error::Degenerate(
            "identification window is identically zero; the regressor has no signal".into(),
        ));
    }
    let sigma_min = sigma.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition_number =
        if sigma_min > 0.0 { sigma_max / sigma_min } else { f64::INFINITY };

    let threshold = config.rank_tolerance * sigma_max;
    let mut coeffs = DVector::zeros(n);
    for (k, &s) in sigma.iter().enumerate() {
        if s > threshold {
            // Column k of b is sigma_k times the left singular vector.
            let proj = b.column(k).dot(&target) / (s * s);
            coeffs += v.column(k) * proj;
        }
    }

    DifferenceEquationModel::new(
        n,
        coeffs.iter().copied().collect(),
        condition_number.max(1.0),
        window_origin,
    )
}

/// Smooths the series once, then identifies a model on every full window of
/// smoothed values, ordered by window origin.
pub fn rolling_identify(
    series: &TimeSeries,
    smoother: &SmootherConfig,
    config: &IdentificationConfig,
) -> Result<Vec<DifferenceEquationModel>> {
    config.validate()?;
    if series.len() < config.window {
        return Err(Error::InsufficientHistory {
            origin: series.end_index(),
            needed: config.window,
            available: series.len(),
            constraint: format!(
                "rolling identification needs at least one full window of {} samples",
                config.window
            ),
        });
    }
    let smoothed = causal_smooth(series, smoother)?;
    let first_end = smoothed.start_index() + config.window as i64 - 1;
    let mut models = Vec::with_capacity(series.len() - config.window + 1);
    for end in first_end..=smoothed.end_index() {
        models.push(identify_window(&smoothed, end - config.window as i64 + 1, config)?);
    }
    Ok(models)
}
