//! Rolling-origin evaluation of forecasts against the realized series.
//!
//! Every causal derived series (trendline, residual moving statistics) is
//! computed once over the full input; restricted to any prefix it agrees
//! exactly with the series computed from that prefix alone, so the
//! per-origin work is just the identification and iteration step. Each
//! evaluated origin contributes one identification on the trendline plus
//! two per residual window.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::core::TimeSeries;
use crate::error::{Error, Result};
use crate::forecast::{build_components, records_at, ForecastConfig, ForecastRecord};

/// Expected coverage of a k-spread band when deviations follow a normal
/// distribution, in percent. Only quoted for the multipliers in use.
fn nominal_coverage(multiplier: u32) -> Option<f64> {
    match multiplier {
        1 => Some(68.27),
        2 => Some(95.45),
        3 => Some(99.73),
        _ => None,
    }
}

/// Observed frequency of the realized value landing inside one band.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageRow {
    pub multiplier: u32,
    /// Reference coverage under a normal deviation model, percent.
    pub nominal: Option<f64>,
    /// Realized coverage, percent. Band bounds are inclusive, with a tiny
    /// relative guard so zero-width bands on exactly recursive data are not
    /// failed by final-ulp rounding of the point forecast.
    pub observed: f64,
    pub covered: usize,
    pub total: usize,
}

/// Inclusive band membership with a relative rounding guard. The guard is
/// proportional to the realized value, so it scales with the series and
/// vanishes next to any genuinely spread band.
pub(crate) fn inside_band(value: f64, lower: f64, upper: f64) -> bool {
    let guard = 1e-9 * value.abs();
    lower - guard <= value && value <= upper + guard
}

/// Metrics from replaying forecasts over a grid of past origins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BacktestReport {
    /// Steps ahead each evaluated forecast looked.
    pub horizon: usize,
    pub first_origin: i64,
    pub last_origin: i64,
    /// Number of evaluated origins.
    pub origins: usize,
    /// Percent of origins where the forecast residual-average sign matched
    /// the realized residual sign, per residual window. Zero counts as
    /// nonnegative on both sides.
    pub hit_rate_percent: BTreeMap<usize, f64>,
    /// Band coverage for the primary residual window.
    pub coverage: Vec<CoverageRow>,
    /// Root-mean-square error of the trendline continuation against the
    /// realized smoothed value at the target index.
    pub rmse_trendline: f64,
}

struct Accumulator {
    hits: BTreeMap<usize, usize>,
    covered: Vec<usize>,
    coverage_total: usize,
    squared_error: f64,
    origins: usize,
}

impl Accumulator {
    fn new(windows: &[usize]) -> Self {
        Accumulator {
            hits: windows.iter().map(|&n| (n, 0)).collect(),
            covered: vec![0; 3],
            coverage_total: 0,
            squared_error: 0.0,
            origins: 0,
        }
    }

    fn absorb(
        &mut self,
        records: &[ForecastRecord],
        horizon: usize,
        primary: usize,
        raw: &TimeSeries,
        smoothed: &TimeSeries,
    ) {
        self.origins += 1;
        let mut seen_primary = false;
        for r in records.iter().filter(|r| r.horizon == horizon) {
            let on_grid = "the origin grid keeps every target inside the realized series";
            let realized_raw = raw.value_at(r.target_index).expect(on_grid);
            let realized_smooth = smoothed.value_at(r.target_index).expect(on_grid);
            let realized_residual = realized_raw - realized_smooth;
            let hit = (r.ma >= 0.0) == (realized_residual >= 0.0);
            if hit {
                *self
                    .hits
                    .get_mut(&r.ma_window)
                    .expect("records only carry configured windows") += 1;
            }
            if r.ma_window == primary {
                seen_primary = true;
                self.coverage_total += 1;
                for (slot, band) in self.covered.iter_mut().zip(&r.bands) {
                    if inside_band(realized_raw, band.lower, band.upper) {
                        *slot += 1;
                    }
                }
                let e = r.trendline - realized_smooth;
                self.squared_error += e * e;
            }
        }
        debug_assert!(seen_primary, "every origin yields a primary-window record");
    }

    fn finish(self, horizon: usize, first_origin: i64, last_origin: i64) -> BacktestReport {
        let pct = |num: usize, den: usize| 100.0 * num as f64 / den as f64;
        BacktestReport {
            horizon,
            first_origin,
            last_origin,
            origins: self.origins,
            hit_rate_percent: self
                .hits
                .into_iter()
                .map(|(n, h)| (n, pct(h, self.origins)))
                .collect(),
            coverage: self
                .covered
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let multiplier = i as u32 + 1;
                    CoverageRow {
                        multiplier,
                        nominal: nominal_coverage(multiplier),
                        observed: pct(c, self.coverage_total),
                        covered: c,
                        total: self.coverage_total,
                    }
                })
                .collect(),
            rmse_trendline: (self.squared_error / self.origins as f64).sqrt(),
        }
    }
}

fn origin_grid(series: &TimeSeries, config: &ForecastConfig, max_horizon: usize) -> Result<(i64, i64)> {
    let first = series.start_index() + config.required_history() as i64 - 1;
    let last = series.end_index() - max_horizon as i64;
    if first > last {
        return Err(Error::InsufficientHistory {
            origin: series.end_index(),
            needed: config.required_history() + max_horizon,
            available: series.len(),
            constraint: format!(
                "a backtest needs the required forecast history ({}) plus the horizon ({}) before the first origin can be scored",
                config.required_history(),
                max_horizon
            ),
        });
    }
    Ok((first, last))
}

/// Replays forecasts from every origin that has full history and a realized
/// target, scoring them at the configured horizon.
pub fn run_backtest(series: &TimeSeries, config: &ForecastConfig) -> Result<BacktestReport> {
    config.validate()?;
    let (first, last) = origin_grid(series, config, config.horizon)?;
    let components = build_components(series, config)?;
    let mut acc = Accumulator::new(&config.ma_windows);
    for origin in first..=last {
        let records = records_at(&components, origin, config)?;
        acc.absorb(&records, config.horizon, config.primary_window(), series, &components.smoothed);
    }
    Ok(acc.finish(config.horizon, first, last))
}

/// Backtests several horizons over one shared origin grid, so the reports
/// are directly comparable. The grid is limited by the longest horizon, and
/// each origin's identification work is shared by all horizons. An empty
/// horizon list is a vacuous sweep and yields an empty report list.
pub fn sweep_report(
    series: &TimeSeries,
    config: &ForecastConfig,
    horizons: &[usize],
) -> Result<Vec<BacktestReport>> {
    if horizons.is_empty() {
        return Ok(vec![]);
    }
    if horizons.contains(&0) {
        return Err(Error::Config("sweep horizons must be at least 1".into()));
    }
    let max_horizon = *horizons.iter().max().expect("nonempty");
    let mut cfg = config.clone();
    cfg.horizon = max_horizon;
    cfg.validate()?;
    let (first, last) = origin_grid(series, &cfg, max_horizon)?;
    let components = build_components(series, &cfg)?;
    let mut accs: Vec<Accumulator> =
        horizons.iter().map(|_| Accumulator::new(&cfg.ma_windows)).collect();
    for origin in first..=last {
        let records = records_at(&components, origin, &cfg)?;
        for (acc, &h) in accs.iter_mut().zip(horizons) {
            acc.absorb(&records, h, cfg.primary_window(), series, &components.smoothed);
        }
    }
    Ok(accs
        .into_iter()
        .zip(horizons)
        .map(|(acc, &h)| acc.finish(h, first, last))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::{IdentificationConfig, SmootherConfig};
    use crate::forecast::forecast_series;
    use approx::assert_relative_eq;

    fn wavy_series(len: usize) -> TimeSeries {
        let vals = (0..len)
            .map(|t| {
                let t = t as f64;
                (t * 0.37).sin() * 2.0 + (t * 1.7).sin() * 0.3 + 0.01 * t
            })
            .collect();
        TimeSeries::new(0, vals).unwrap()
    }

    fn small_config(horizon: usize, n: usize) -> ForecastConfig {
        ForecastConfig {
            horizon,
            smoother: SmootherConfig { window: 8, degree: 2 },
            identification: IdentificationConfig { order: 3, window: 20, rank_tolerance: 1e-10 },
            ma_windows: vec![n],
        }
    }

    #[test]
    fn grid_excludes_warmup_and_unrealized_targets() {
        let s = wavy_series(120);
        let cfg = small_config(5, 6);
        let report = run_backtest(&s, &cfg).unwrap();
        // required history = 20 + 12 = 32 samples, so the first origin is
        // offset 31; the last origin leaves 5 realized steps.
        assert_eq!(report.first_origin, 31);
        assert_eq!(report.last_origin, 114);
        assert_eq!(report.origins, 84);
        assert_eq!(report.horizon, 5);
    }

    #[test]
    fn short_series_reports_missing_history() {
        let s = wavy_series(30);
        let r = run_backtest(&s, &small_config(5, 6));
        match r {
            Err(Error::InsufficientHistory { needed, available, .. }) => {
                assert_eq!(needed, 37);
                assert_eq!(available, 30);
            }
            other => panic!("expected InsufficientHistory, got {other:?}"),
        }
    }

    #[test]
    fn matches_per_origin_forecasts() {
        // The shared-component fast path must agree with honestly
        // re-forecasting from each prefix.
        let s = wavy_series(90);
        let cfg = small_config(4, 5);
        let report = run_backtest(&s, &cfg).unwrap();

        let mut hits = 0;
        let mut covered = [0usize; 3];
        let mut sq = 0.0;
        let smoothed = crate::estimate::causal_smooth(&s, &cfg.smoother).unwrap();
        let mut origins = 0;
        for origin in report.first_origin..=report.last_origin {
            origins += 1;
            let records = forecast_series(&s, origin, &cfg).unwrap();
            let r = records.iter().find(|r| r.horizon == 4).unwrap();
            let raw = s.value_at(r.target_index).unwrap();
            let smooth = smoothed.value_at(r.target_index).unwrap();
            if (r.ma >= 0.0) == (raw - smooth >= 0.0) {
                hits += 1;
            }
            for (slot, band) in covered.iter_mut().zip(&r.bands) {
                if inside_band(raw, band.lower, band.upper) {
                    *slot += 1;
                }
            }
            let e = r.trendline - smooth;
            sq += e * e;
        }

        assert_eq!(report.origins, origins);
        assert_relative_eq!(
            report.hit_rate_percent[&5],
            100.0 * hits as f64 / origins as f64,
            max_relative = 1e-12
        );
        for (row, c) in report.coverage.iter().zip(covered) {
            assert_eq!(row.covered, c);
            assert_eq!(row.total, origins);
        }
        assert_relative_eq!(
            report.rmse_trendline,
            (sq / origins as f64).sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn exact_recursion_scores_every_direction() {
        // With an identity smoother the residual vanishes, the directional
        // call is always "at or above", and the realized residual is zero,
        // so every origin is a hit and the trendline error is tiny.
        let mut vals = vec![1.0, 1.0];
        for t in 2..40 {
            let v: f64 = vals[t - 1] + vals[t - 2];
            vals.push(v);
        }
        let s = TimeSeries::new(0, vals).unwrap();
        let cfg = ForecastConfig {
            horizon: 3,
            smoother: SmootherConfig { window: 1, degree: 0 },
            identification: IdentificationConfig { order: 2, window: 12, rank_tolerance: 1e-10 },
            ma_windows: vec![2],
        };
        let report = run_backtest(&s, &cfg).unwrap();
        assert_relative_eq!(report.hit_rate_percent[&2], 100.0);
        assert!(
            report.rmse_trendline < 1e-3,
            "iterating exact coefficients tracks the recursion, rmse = {}",
            report.rmse_trendline
        );
        for row in &report.coverage {
            assert_eq!(row.total, report.origins);
            assert_eq!(
                row.covered, report.origins,
                "zero-width bands still cover the exactly recursive value at k = {}",
                row.multiplier
            );
        }
    }

    #[test]
    fn coverage_is_monotone_in_the_multiplier() {
        let s = wavy_series(160);
        let report = run_backtest(&s, &small_config(3, 8)).unwrap();
        assert_eq!(
            report.coverage.iter().map(|r| r.multiplier).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
        for pair in report.coverage.windows(2) {
            assert!(pair[0].covered <= pair[1].covered, "wider bands cover at least as often");
        }
        assert_eq!(
            report.coverage.iter().map(|r| r.nominal).collect::<Vec<_>>(),
            vec![Some(68.27), Some(95.45), Some(99.73)]
        );
    }

    #[test]
    fn sweep_shares_one_origin_grid() {
        let s = wavy_series(140);
        let cfg = small_config(5, 6);
        let reports = sweep_report(&s, &cfg, &[2, 7]).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].horizon, 2);
        assert_eq!(reports[1].horizon, 7);
        assert_eq!(reports[0].first_origin, reports[1].first_origin);
        assert_eq!(reports[0].last_origin, reports[1].last_origin);
        assert_eq!(reports[0].last_origin, 139 - 7);
        assert_eq!(reports[0].origins, reports[1].origins);
    }

    #[test]
    fn sweep_terminal_horizon_matches_plain_backtest() {
        let s = wavy_series(140);
        let cfg = small_config(7, 6);
        let sweep = sweep_report(&s, &cfg, &[3, 7]).unwrap();
        let plain = run_backtest(&s, &cfg).unwrap();
        assert_eq!(sweep[1], plain);
    }

    #[test]
    fn sweep_over_no_horizons_is_vacuous() {
        let s = wavy_series(140);
        let cfg = small_config(5, 6);
        assert_eq!(sweep_report(&s, &cfg, &[]).unwrap(), vec![]);
    }

    #[test]
    fn multiple_windows_share_origins_and_trendline_error() {
        let s = wavy_series(150);
        let mut cfg = small_config(4, 5);
        cfg.ma_windows = vec![5, 12];
        let report = run_backtest(&s, &cfg).unwrap();
        // The grid is set by the widest window even for the narrow one.
        assert_eq!(report.first_origin, 150 - 1 - (150 - (20 + 24)) as i64);
        assert_eq!(report.hit_rate_percent.len(), 2);
        assert!(report.hit_rate_percent.contains_key(&5));
        assert!(report.hit_rate_percent.contains_key(&12));
        // Coverage only reflects the primary window.
        assert_eq!(report.coverage[0].total, report.origins);
    }
}
