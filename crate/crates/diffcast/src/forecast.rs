//! Multi-step forecasting of trendline, residual drift, and spread.
//!
//! A forecast at origin t splits the history through t into a smoothed
//! trendline and a residual, summarizes the residual by a trailing moving
//! average and a trailing moving standard deviation, identifies a low-order
//! recursion on the recent window of each of the three derived series, and
//! iterates each recursion forward. The point forecast is trendline plus
//! residual average; the spread forecast widens it into interval bands.
//!
//! Every derived series is causal: the value at time t depends only on raw
//! samples at or before t. Forecasts from a prefix therefore agree exactly
//! with forecasts computed from precomputed full-series components, which
//! the backtester exploits.

use serde::Serialize;
use std::fmt;

use crate::core::{decompose, DifferenceEquationModel, TimeSeries};
use crate::error::{Error, Result};
use crate::estimate::{causal_smooth, identify_window, IdentificationConfig, SmootherConfig};

/// Settings for a full forecast run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastConfig {
    /// Number of steps ahead to forecast.
    pub horizon: usize,
    pub smoother: SmootherConfig,
    pub identification: IdentificationConfig,
    /// Trailing window lengths N for the residual moving statistics. The
    /// first entry is the primary window; the rest are alternates reported
    /// alongside it.
    pub ma_windows: Vec<usize>,
}

impl Default for ForecastConfig {
    fn default() -> Self {
        ForecastConfig {
            horizon: 5,
            smoother: SmootherConfig::default(),
            identification: IdentificationConfig::default(),
            ma_windows: vec![100],
        }
    }
}

impl ForecastConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::Config("forecast horizon must be at least 1".into()));
        }
        if self.ma_windows.is_empty() {
            return Err(Error::Config("at least one residual window is required".into()));
        }
        if self.ma_windows.contains(&0) {
            return Err(Error::Config("residual windows must be at least 1".into()));
        }
        self.smoother.validate()?;
        self.identification.validate()
    }

    /// Primary residual window (the first configured one).
    pub fn primary_window(&self) -> usize {
        self.ma_windows[0]
    }

    /// History needed at the forecast origin: the moving-std series lags the
    /// raw series by 2N, and identification needs a full window on top.
    pub fn required_history(&self) -> usize {
        let max_n = self.ma_windows.iter().copied().max().unwrap_or(0);
        self.identification.window + 2 * max_n
    }
}

/// Sign of the forecast residual average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Indicator {
    /// Residual average forecast is at or above zero.
    Above,
    /// Residual average forecast is below zero.
    Below,
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Indicator::Above => write!(f, "above"),
            Indicator::Below => write!(f, "below"),
        }
    }
}

/// One symmetric interval around the point forecast.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalBand {
    /// Spread multiplier k; the band is the point forecast plus or minus k
    /// times the spread forecast.
    pub multiplier: u32,
    pub lower: f64,
    pub upper: f64,
}

/// Forecast for a single target index under a single residual window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastRecord {
    /// Last history index the forecast conditions on.
    pub origin: i64,
    /// Steps ahead of the origin.
    pub horizon: usize,
    /// Index being forecast: origin + horizon.
    pub target_index: i64,
    /// Residual window N used for the moving statistics.
    pub ma_window: usize,
    /// Trendline continuation.
    pub trendline: f64,
    /// Residual moving-average continuation.
    pub ma: f64,
    /// Residual moving-std continuation, clamped to be nonnegative.
    pub mstd: f64,
    /// Point forecast: trendline plus residual average.
    pub point: f64,
    pub indicator: Indicator,
    pub bands: Vec<IntervalBand>,
}

/// Trailing mean over windows of N+1 samples. The output starts N steps
/// after the input and shares its tail labels.
pub fn moving_average(series: &TimeSeries, n: usize) -> Result<TimeSeries> {
    if series.len() < n + 1 {
        return Err(Error::InsufficientHistory {
            origin: series.end_index(),
            needed: n + 1,
            available: series.len(),
            constraint: format!("a moving average over window {n} needs {} samples", n + 1),
        });
    }
    let values = series.values();
    let denom = (n + 1) as f64;
    let out: Vec<f64> = (n..values.len())
        .map(|i| values[i - n..=i].iter().sum::<f64>() / denom)
        .collect();
    let start = series.start_index() + n as i64;
    match series.labels() {
        Some(labels) => TimeSeries::with_labels(start, out, labels[n..].to_vec()),
        None => TimeSeries::new(start, out),
    }
}

/// Trailing root-mean-square deviation from the trailing moving average,
/// over the same window length N+1. The deviation at offset tau uses the
/// moving average at that same offset, so the output starts 2N steps after
/// the input.
pub fn moving_std(series: &TimeSeries, n: usize) -> Result<TimeSeries> {
    if series.len() < 2 * n + 1 {
        return Err(Error::InsufficientHistory {
            origin: series.end_index(),
            needed: 2 * n + 1,
            available: series.len(),
            constraint: format!(
                "a moving std over window {n} needs {} samples: the inner moving average must cover its own window at every deviation",
                2 * n + 1
            ),
        });
    }
    let ma = moving_average(series, n)?;
    let values = series.values();
    let ma_values = ma.values();
    let denom = (n + 1) as f64;
    // Raw offset i pairs with moving-average offset i - n.
    let out: Vec<f64> = (2 * n..values.len())
        .map(|i| {
            let sum: f64 = (0..=n)
                .map(|tau| {
                    let d = values[i - tau] - ma_values[i - tau - n];
                    d * d
                })
                .sum();
            (sum / denom).sqrt()
        })
        .collect();
    let start = series.start_index() + 2 * n as i64;
    match series.labels() {
        Some(labels) => TimeSeries::with_labels(start, out, labels[2 * n..].to_vec()),
        None => TimeSeries::new(start, out),
    }
}

/// Iterates a model forward from the last `order` observed values, oldest
/// first, returning `horizon` continuation values.
pub fn iterate_forecast(
    model: &DifferenceEquationModel,
    seed: &[f64],
    horizon: usize,
) -> Result<Vec<f64>> {
    if seed.len() != model.order {
        return Err(Error::Config(format!(
            "forecast seed has {} values but the model order is {}",
            seed.len(),
            model.order
        )));
    }
    let mut state = seed.to_vec();
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let next = model.predict_next(&state);
        out.push(next);
        state.rotate_left(1);
        *state.last_mut().expect("order is at least 1") = next;
    }
    Ok(out)
}

/// Causal derived series a forecast conditions on, precomputed for the full
/// input so the backtester can reuse them across origins.
#[derive(Debug, Clone)]
pub(crate) struct ForecastComponents {
    pub(crate) smoothed: TimeSeries,
    pub(crate) per_window: Vec<WindowComponents>,
}

#[derive(Debug, Clone)]
pub(crate) struct WindowComponents {
    pub(crate) ma_window: usize,
    pub(crate) ma: TimeSeries,
    pub(crate) mstd: TimeSeries,
}

pub(crate) fn build_components(
    series: &TimeSeries,
    config: &ForecastConfig,
) -> Result<ForecastComponents> {
    let smoothed = causal_smooth(series, &config.smoother)?;
    let residual = decompose(series, &smoothed)?;
    let per_window = config
        .ma_windows
        .iter()
        .map(|&n| {
            Ok(WindowComponents {
                ma_window: n,
                ma: moving_average(residual.residual(), n)?,
                mstd: moving_std(residual.residual(), n)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ForecastComponents { smoothed, per_window })
}

/// Identifies on the trailing window of a derived series and iterates the
/// model forward. A window of exact zeros continues as zero: there is no
/// signal to identify, and zero is the unique shift-invariant continuation.
fn model_forecast(
    component: &TimeSeries,
    origin: i64,
    identification: &IdentificationConfig,
    horizon: usize,
) -> Result<Vec<f64>> {
    let window_origin = origin - identification.window as i64 + 1;
    let window = component.slice(window_origin, identification.window)?;
    if window.values().iter().all(|v| *v == 0.0) {
        return Ok(vec![0.0; horizon]);
    }
    let model = match identify_window(component, window_origin, identification) {
        Ok(model) => model,
        Err(Error::Degenerate(_)) => return Ok(vec![0.0; horizon]),
        Err(e) => return Err(e),
    };
    let seed_origin = origin - identification.order as i64 + 1;
    let seed = component.slice(seed_origin, identification.order)?;
    iterate_forecast(&model, seed.values(), horizon)
}

pub(crate) fn records_at(
    components: &ForecastComponents,
    origin: i64,
    config: &ForecastConfig,
) -> Result<Vec<ForecastRecord>> {
    let trend = model_forecast(&components.smoothed, origin, &config.identification, config.horizon)?;
    let mut records = Vec::with_capacity(config.ma_windows.len() * config.horizon);
    for wc in &components.per_window {
        let ma = model_forecast(&wc.ma, origin, &config.identification, config.horizon)?;
        let mstd = model_forecast(&wc.mstd, origin, &config.identification, config.horizon)?;
        for step in 1..=config.horizon {
            let t = trend[step - 1];
            let m = ma[step - 1];
            let s = mstd[step - 1].max(0.0);
            let point = t + m;
            let indicator = if m >= 0.0 { Indicator::Above } else { Indicator::Below };
            let bands = (1..=3)
                .map(|k| IntervalBand {
                    multiplier: k,
                    lower: point - k as f64 * s,
                    upper: point + k as f64 * s,
                })
                .collect();
            records.push(ForecastRecord {
                origin,
                horizon: step,
                target_index: origin + step as i64,
                ma_window: wc.ma_window,
                trendline: t,
                ma: m,
                mstd: s,
                point,
                indicator,
                bands,
            });
        }
    }
    Ok(records)
}

/// Forecasts from the given origin, conditioning only on samples at or
/// before it. Records are grouped by residual window in configuration
/// order, each group covering horizons 1 through `config.horizon`.
pub fn forecast_series(
    series: &TimeSeries,
    origin: i64,
    config: &ForecastConfig,
) -> Result<Vec<ForecastRecord>> {
    config.validate()?;
    if origin < series.start_index() || origin > series.end_index() {
        return Err(Error::OutOfRange {
            from: origin,
            to: origin,
            start: series.start_index(),
            end: series.end_index(),
        });
    }
    let available = (origin - series.start_index() + 1) as usize;
    let needed = config.required_history();
    if available < needed {
        let max_n = self::max_window(&config.ma_windows);
        return Err(Error::InsufficientHistory {
            origin,
            needed,
            available,
            constraint: format!(
                "residual window {max_n} binds: identification needs {} moving-std samples and the moving std lags the raw series by {}",
                config.identification.window,
                2 * max_n
            ),
        });
    }
    let prefix = series.prefix_through(origin)?;
    let components = build_components(&prefix, config)?;
    records_at(&components, origin, config)
}

fn max_window(windows: &[usize]) -> usize {
    windows.iter().copied().max().unwrap_or(0)
}
