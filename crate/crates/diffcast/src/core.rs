//! Time-indexed series and identified difference-equation models.

use crate::error::{Error, Result};

/// A uniformly sampled, gapless series with an absolute start index.
///
/// `values[i]` is the sample at time `start_index + i`. Labels, when present,
/// carry one display date per sample; they are opaque to every computation.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    start_index: i64,
    labels: Option<Vec<String>>,
}

impl TimeSeries {
    /// Builds a series. Rejects empty input so every consumer can rely on at
    /// least one sample.
    pub fn new(start_index: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("time series values"));
        }
        Ok(TimeSeries { values, start_index, labels: None })
    }

    /// Builds a series with one label per sample.
    pub fn with_labels(start_index: i64, values: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("time series values"));
        }
        if labels.len() != values.len() {
            return Err(Error::Config(format!(
                "{} labels for {} values",
                labels.len(),
                values.len()
            )));
        }
        Ok(TimeSeries { values, start_index, labels: Some(labels) })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; emptiness is rejected at construction.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start_index(&self) -> i64 {
        self.start_index
    }

    /// Time index of the last sample.
    pub fn end_index(&self) -> i64 {
        self.start_index + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Offset of absolute time `t` into `values`, when in range.
    pub fn offset_of(&self, t: i64) -> Option<usize> {
        if t < self.start_index || t > self.end_index() {
            None
        } else {
            Some((t - self.start_index) as usize)
        }
    }

    /// Sample at absolute time `t`, when in range.
    pub fn value_at(&self, t: i64) -> Option<f64> {
        self.offset_of(t).map(|i| self.values[i])
    }

    pub fn label_at(&self, t: i64) -> Option<&str> {
        match (&self.labels, self.offset_of(t)) {
            (Some(labels), Some(i)) => Some(&labels[i]),
            _ => None,
        }
    }

    /// Contiguous sub-series of `len` samples starting at absolute time
    /// `from`. Errors name the valid span.
    pub fn slice(&self, from: i64, len: usize) -> Result<TimeSeries> {
        if len == 0 {
            return Err(Error::Empty("slice length"));
        }
        let to = from + len as i64;
        if from < self.start_index || to > self.end_index() + 1 {
            return Err(Error::OutOfRange {
                from,
                to,
                start: self.start_index,
                end: self.end_index(),
            });
        }
        let a = (from - self.start_index) as usize;
        let b = a + len;
        Ok(TimeSeries {
            values: self.values[a..b].to_vec(),
            start_index: from,
            labels: self.labels.as_ref().map(|l| l[a..b].to_vec()),
        })
    }

    /// Prefix of the series through absolute time `t` inclusive.
    pub fn prefix_through(&self, t: i64) -> Result<TimeSeries> {
        if t < self.start_index {
            return Err(Error::OutOfRange {
                from: self.start_index,
                to: t + 1,
                start: self.start_index,
                end: self.end_index(),
            });
        }
        let t = t.min(self.end_index());
        self.slice(self.start_index, (t - self.start_index + 1) as usize)
    }
}

/// An identified linear difference equation
/// `x(t+n) = a_1 x(t+n-1) + ... + a_n x(t)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DifferenceEquationModel {
    /// Model order `n`.
    pub order: usize,
    /// `coefficients[i-1]` is `a_i`; `a_1` multiplies the most recent sample.
    pub coefficients: Vec<f64>,
    /// Ratio of the extreme singular values of the identification regressor.
    /// Infinite when the smallest singular value underflows to zero.
    pub condition_number: f64,
    /// Time index of the first sample of the fit window.
    pub window_origin: i64,
}

impl DifferenceEquationModel {
    pub fn new(
        order: usize,
        coefficients: Vec<f64>,
        condition_number: f64,
        window_origin: i64,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::Config("model order must be at least 1".into()));
        }
        if coefficients.len() != order {
            return Err(Error::Config(format!(
                "{} coefficients for order {order}",
                coefficients.len()
            )));
        }
        if condition_number < 1.0 || condition_number.is_nan() {
            return Err(Error::Config(format!(
                "condition number {condition_number} below 1"
            )));
        }
        Ok(DifferenceEquationModel { order, coefficients, condition_number, window_origin })
    }

    /// One-step prediction from `recent`, ordered oldest to newest.
    /// `recent` must hold exactly `order` values.
    pub fn predict_next(&self, recent: &[f64]) -> f64 {
        assert_eq!(recent.len(), self.order, "seed length must equal the model order");
        self.coefficients
            .iter()
            .zip(recent.iter().rev())
            .map(|(a, x)| a * x)
            .sum()
    }
}

/// Additive split of a raw series into trendline and residual.
///
/// Both parts share the raw series' start index and length, and the residual
/// is stored exactly as computed, so `trendline + residual` reproduces the
/// raw samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualDecomposition {
    trendline: TimeSeries,
    residual: TimeSeries,
}

impl ResidualDecomposition {
    pub fn trendline(&self) -> &TimeSeries {
        &self.trendline
    }

    pub fn residual(&self) -> &TimeSeries {
        &self.residual
    }

    /// Start index shared by trendline and residual.
    pub fn alignment(&self) -> i64 {
        self.trendline.start_index()
    }

    /// Sample-wise sum of trendline and residual.
    pub fn reconstruct(&self) -> TimeSeries {
        let values = self
            .trendline
            .values()
            .iter()
            .zip(self.residual.values())
            .map(|(t, r)| t + r)
            .collect();
        TimeSeries {
            values,
            start_index: self.trendline.start_index(),
            labels: self.trendline.labels.clone(),
        }
    }
}

/// Splits `raw` against a trendline of identical span: residual = raw -
/// trendline, sample by sample.
pub fn decompose(raw: &TimeSeries, trendline: &TimeSeries) -> Result<ResidualDecomposition> {
    if raw.start_index() != trendline.start_index() || raw.len() != trendline.len() {
        return Err(Error::Misaligned {
            left_start: raw.start_index(),
            left_len: raw.len(),
            right_start: trendline.start_index(),
            right_len: trendline.len(),
        });
    }
    let residual_values: Vec<f64> = raw
        .values()
        .iter()
        .zip(trendline.values())
        .map(|(x, t)| x - t)
        .collect();
    Ok(ResidualDecomposition {
        trendline: trendline.clone(),
        residual: TimeSeries {
            values: residual_values,
            start_index: raw.start_index(),
            labels: raw.labels.clone(),
        },
    })
}
