//! Model-free time-series forecasting built on low-order linear difference
//! equations.
//!
//! The pipeline smooths a raw series into a trendline, identifies the
//! difference equation the trendline locally satisfies over a sliding window,
//! and iterates that equation forward for point forecasts. Residuals against
//! the trendline feed moving-average and moving-standard-deviation series that
//! are forecast the same way and combined into direction indicators and
//! volatility bands. The [`algebra`] module provides an exact
//! rational-arithmetic kernel that decides, through generating functions and
//! Wronskian ranks, whether a claimed model order is minimal.

pub mod algebra;
pub mod backtest;
pub mod core;
pub mod error;
pub mod estimate;
pub mod forecast;
pub mod synth;

pub use crate::core::{decompose, DifferenceEquationModel, ResidualDecomposition, TimeSeries};
pub use error::{Error, Result};
