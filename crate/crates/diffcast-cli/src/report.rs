//! Report assembly: the run manifest, the versioned JSON envelope, and the
//! flat CSV projections of forecasts, coefficient paths, and backtests.
//!
//! Every JSON document is serialized through `serde_json`'s default
//! sorted-key maps and every float through its shortest round-trip form, so
//! identical manifests yield byte-identical files. CSV output is plain
//! RFC-4180 records without the manifest, since CSV has no comment syntax
//! to carry it.

use diffcast::backtest::BacktestReport;
use diffcast::forecast::ForecastRecord;
use diffcast::DifferenceEquationModel;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Hex digest of arbitrary bytes, as used for input fingerprints.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Everything identifying one run. Identical manifests imply identical
/// outputs, so no timestamps or host details belong here.
pub fn manifest(
    command: &str,
    input_sha256: &str,
    config: Value,
    seed: Option<u64>,
) -> Value {
    json!({
        "tool": "diffcast",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "input_sha256": input_sha256,
        "config": config,
        "seed": seed,
    })
}

/// Wraps a payload and its manifest in the versioned report envelope.
pub fn envelope(manifest: Value, payload_key: &str, payload: Value) -> String {
    let doc = json!({
        "schema_version": 1,
        "manifest": manifest,
        payload_key: payload,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("json values serialize");
    text.push('\n');
    text
}

/// Forecast records as JSON values, each enriched with the label of its
/// target index when the series carries labels.
pub fn records_json(records: &[ForecastRecord], label_of: impl Fn(i64) -> Option<String>) -> Value {
    Value::Array(
        records
            .iter()
            .map(|r| {
                let mut v = serde_json::to_value(r).expect("record serializes");
                let label = label_of(r.target_index).map(Value::String).unwrap_or(Value::Null);
                v.as_object_mut().expect("record is an object").insert("target_label".into(), label);
                v
            })
            .collect(),
    )
}

/// Flat CSV of forecast records, one row per (window, horizon).
pub fn records_csv(
    records: &[ForecastRecord],
    label_of: impl Fn(i64) -> Option<String>,
) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "origin",
        "horizon",
        "target_index",
        "target_label",
        "ma_window",
        "trendline",
        "ma",
        "mstd",
        "point",
        "indicator",
        "lower1",
        "upper1",
        "lower2",
        "upper2",
        "lower3",
        "upper3",
    ])
    .expect("in-memory write");
    for r in records {
        let mut row = vec![
            r.origin.to_string(),
            r.horizon.to_string(),
            r.target_index.to_string(),
            label_of(r.target_index).unwrap_or_default(),
            r.ma_window.to_string(),
            r.trendline.to_string(),
            r.ma.to_string(),
            r.mstd.to_string(),
            r.point.to_string(),
            r.indicator.to_string(),
        ];
        for band in &r.bands {
            row.push(band.lower.to_string());
            row.push(band.upper.to_string());
        }
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Rolling identification as JSON: one object per window origin.
pub fn coeffs_json(models: &[DifferenceEquationModel]) -> Value {
    serde_json::to_value(models).expect("models serialize")
}

/// Rolling identification as CSV: origin, condition number, then one
/// column per coefficient.
pub fn coeffs_csv(models: &[DifferenceEquationModel], order: usize) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["origin".to_string(), "condition_number".to_string()];
    for i in 1..=order {
        header.push(format!("a{i}"));
    }
    w.write_record(&header).expect("in-memory write");
    for m in models {
        let mut row = vec![m.window_origin.to_string(), m.condition_number.to_string()];
        for a in &m.coefficients {
            row.push(a.to_string());
        }
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Backtest reports as a flat CSV: one row per metric, keyed by horizon.
/// Empty cells mean the column does not apply to that metric.
pub fn backtest_csv(reports: &[BacktestReport]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "horizon",
        "metric",
        "window",
        "multiplier",
        "nominal",
        "observed",
        "covered",
        "total",
        "value",
    ])
    .expect("in-memory write");
    let blank = String::new;
    for r in reports {
        let h = r.horizon.to_string();
        let scalar = |w: &mut csv::Writer<Vec<u8>>, metric: &str, value: String| {
            w.write_record([
                h.clone(),
                metric.to_string(),
                blank(),
                blank(),
                blank(),
                blank(),
                blank(),
                blank(),
                value,
            ])
            .expect("in-memory write");
        };
        scalar(&mut w, "first_origin", r.first_origin.to_string());
        scalar(&mut w, "last_origin", r.last_origin.to_string());
        scalar(&mut w, "origins", r.origins.to_string());
        for (window, rate) in &r.hit_rate_percent {
            w.write_record([
                h.clone(),
                "hit_rate_percent".to_string(),
                window.to_string(),
                blank(),
                blank(),
                blank(),
                blank(),
                blank(),
                rate.to_string(),
            ])
            .expect("in-memory write");
        }
        for row in &r.coverage {
            w.write_record([
                h.clone(),
                "coverage_percent".to_string(),
                blank(),
                row.multiplier.to_string(),
                row.nominal.map(|n| n.to_string()).unwrap_or_default(),
                row.observed.to_string(),
                row.covered.to_string(),
                row.total.to_string(),
                blank(),
            ])
            .expect("in-memory write");
        }
        scalar(&mut w, "rmse_trendline", r.rmse_trendline.to_string());
    }
    w.into_inner().expect("in-memory flush")
}
