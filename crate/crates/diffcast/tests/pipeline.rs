//! End-to-end runs through the public API: generate, decompose, forecast,
//! backtest, and certify, wired together the way a caller would.

use diffcast::algebra::{
    recursion_to_generating_function, wronskian_certificate, ratio, WronskianKind,
};
use diffcast::backtest::run_backtest;
use diffcast::estimate::{causal_smooth, identify_window, IdentificationConfig, SmootherConfig};
use diffcast::forecast::{forecast_series, ForecastConfig};
use diffcast::synth::{generate, SynthConfig};
use diffcast::{decompose, TimeSeries};

fn small_synth() -> TimeSeries {
    generate(&SynthConfig {
        len: 420,
        period_start: 90.0,
        period_end: 130.0,
        noise_doubles_from: 210,
        ..SynthConfig::default()
    })
    .unwrap()
}

fn small_forecast_config() -> ForecastConfig {
    ForecastConfig {
        horizon: 5,
        smoother: SmootherConfig::default(),
        identification: IdentificationConfig::default(),
        ma_windows: vec![40],
    }
}

#[test]
fn synthetic_series_decomposes_and_reconstructs() {
    let raw = small_synth();
    let smoothed = causal_smooth(&raw, &SmootherConfig::default()).unwrap();
    let parts = decompose(&raw, &smoothed).unwrap();
    let rebuilt = parts.reconstruct();
    assert_eq!(rebuilt.start_index(), raw.start_index());
    for (a, b) in rebuilt.values().iter().zip(raw.values()) {
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
    }
}

#[test]
fn forecast_runs_on_the_synthetic_series() {
    let raw = small_synth();
    let cfg = small_forecast_config();
    let records = forecast_series(&raw, raw.end_index(), &cfg).unwrap();
    assert_eq!(records.len(), cfg.horizon);
    for r in &records {
        assert!(r.point.is_finite());
        assert!(r.mstd >= 0.0);
        assert!(r.trendline > 0.0, "trend stays near the configured level");
    }
}

#[test]
fn backtest_runs_on_the_synthetic_series() {
    let raw = small_synth();
    let report = run_backtest(&raw, &small_forecast_config()).unwrap();
    assert!(report.origins > 200);
    let hit = report.hit_rate_percent[&40];
    assert!((0.0..=100.0).contains(&hit));
    assert_eq!(report.coverage.len(), 3);
    for row in &report.coverage {
        assert!((0.0..=100.0).contains(&row.observed));
    }
    assert!(report.rmse_trendline.is_finite());
}

#[test]
fn identified_coefficients_certify_as_identifiable() {
    // Numeric identification on clean second-order data, snapped to exact
    // rationals, should hand the certificate a minimal recursion.
    let mut vals = vec![1.0, 1.0];
    for t in 2..30 {
        let v: f64 = vals[t - 1] + vals[t - 2];
        vals.push(v);
    }
    let series = TimeSeries::new(0, vals).unwrap();
    let cfg = IdentificationConfig { order: 2, window: 12, rank_tolerance: 1e-10 };
    let model = identify_window(&series, 0, &cfg).unwrap();

    let snapped: Vec<_> = model
        .coefficients
        .iter()
        .map(|a| ratio(a.round() as i64, 1))
        .collect();
    assert_eq!(snapped, vec![ratio(1, 1), ratio(1, 1)]);
    let x = recursion_to_generating_function(&snapped, &[ratio(1, 1), ratio(1, 1)]).unwrap();
    let cert = wronskian_certificate(&x, 2, WronskianKind::Full).unwrap();
    assert!(cert.identifiable);
    assert_eq!(cert.rank, 4);
    let dynamics = wronskian_certificate(&x, 2, WronskianKind::Dynamics).unwrap();
    assert!(dynamics.identifiable);
    assert_eq!(dynamics.rank, 2);
}
