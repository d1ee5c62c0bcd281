//! Hand-rolled SVG 1.1 charts: raw/smoothed/forecast curves with spread
//! bands, rolling coefficient paths, and backtest band-with-indicator
//! plots. No external assets, no scripts; every coordinate is printed with
//! exactly two decimals so the byte stream is reproducible, and each file
//! embeds the digest of its run manifest in a leading comment.

use std::fmt::Write as _;

use diffcast::forecast::{ForecastRecord, Indicator};
use diffcast::DifferenceEquationModel;
use diffcast::TimeSeries;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 34.0;
const MARGIN_BOTTOM: f64 = 36.0;

const RAW_COLOR: &str = "#2563eb";
const SMOOTH_COLOR: &str = "#111827";
const FORECAST_COLOR: &str = "#dc2626";
const ABOVE_COLOR: &str = "#16a34a";
const BELOW_COLOR: &str = "#dc2626";
const COEFF_COLORS: [&str; 6] = ["#2563eb", "#dc2626", "#16a34a", "#9333ea", "#d97706", "#0d9488"];

fn fmt2(v: f64) -> String {
    format!("{v:.2}")
}

/// Affine mapping from data space to the plot rectangle.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    /// Builds the frame around the data ranges, padding the value axis by
    /// 5% (or a unit when the data is flat) so curves never touch the box.
    fn around(xs: (f64, f64), ys: (f64, f64)) -> Frame {
        let (mut y0, mut y1) = ys;
        let pad = if y1 > y0 { 0.05 * (y1 - y0) } else { 1.0 };
        y0 -= pad;
        y1 += pad;
        let (x0, mut x1) = xs;
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        Frame { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        let w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        MARGIN_LEFT + (x - self.x0) / (self.x1 - self.x0) * w
    }

    fn py(&self, y: f64) -> f64 {
        let h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        MARGIN_TOP + (self.y1 - y) / (self.y1 - self.y0) * h
    }

    fn point(&self, x: f64, y: f64) -> String {
        format!("{},{}", fmt2(self.px(x)), fmt2(self.py(y)))
    }
}

struct Svg {
    body: String,
}

impl Svg {
    fn new(manifest_digest: &str, title: &str) -> Svg {
        let mut body = String::new();
        writeln!(
            body,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">"
        )
        .unwrap();
        writeln!(body, "<!-- manifest sha256: {manifest_digest} -->").unwrap();
        writeln!(body, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>").unwrap();
        writeln!(
            body,
            "<text x=\"{}\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\" \
             fill=\"#111827\">{}</text>",
            fmt2(MARGIN_LEFT),
            escape(title)
        )
        .unwrap();
        Svg { body }
    }

    fn frame_box(&mut self, frame: &Frame) {
        writeln!(
            self.body,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" \
             stroke=\"#9ca3af\" stroke-width=\"1\"/>",
            fmt2(MARGIN_LEFT),
            fmt2(MARGIN_TOP),
            fmt2(WIDTH - MARGIN_LEFT - MARGIN_RIGHT),
            fmt2(HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
        )
        .unwrap();
        for frac in [0.0, 0.5, 1.0] {
            let y = frame.y0 + frac * (frame.y1 - frame.y0);
            writeln!(
                self.body,
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
                 fill=\"#6b7280\" text-anchor=\"end\">{}</text>",
                fmt2(MARGIN_LEFT - 6.0),
                fmt2(frame.py(y) + 4.0),
                fmt2(y)
            )
            .unwrap();
        }
    }

    fn x_labels(&mut self, left: &str, right: &str) {
        let y = fmt2(HEIGHT - 12.0);
        writeln!(
            self.body,
            "<text x=\"{}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"11\" \
             fill=\"#6b7280\">{}</text>",
            fmt2(MARGIN_LEFT),
            escape(left)
        )
        .unwrap();
        writeln!(
            self.body,
            "<text x=\"{}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"11\" \
             fill=\"#6b7280\" text-anchor=\"end\">{}</text>",
            fmt2(WIDTH - MARGIN_RIGHT),
            escape(right)
        )
        .unwrap();
    }

    fn polyline(&mut self, points: &str, color: &str, width: f64, dash: Option<&str>) {
        let dash = dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
        writeln!(
            self.body,
            "<polyline points=\"{points}\" fill=\"none\" stroke=\"{color}\" \
             stroke-width=\"{width}\"{dash}/>"
        )
        .unwrap();
    }

    fn polygon(&mut self, points: &str, color: &str, opacity: f64) {
        writeln!(
            self.body,
            "<polygon points=\"{points}\" fill=\"{color}\" fill-opacity=\"{opacity}\" \
             stroke=\"none\"/>"
        )
        .unwrap();
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn points_of(frame: &Frame, iter: impl Iterator<Item = (f64, f64)>) -> String {
    let mut out = String::new();
    for (x, y) in iter {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&frame.point(x, y));
    }
    out
}

fn series_window(series: &TimeSeries, from: i64) -> impl Iterator<Item = (i64, f64)> + '_ {
    (from..=series.end_index()).filter_map(|t| series.value_at(t).map(|v| (t, v)))
}

fn minmax(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        (0.0, 1.0)
    } else {
        (lo, hi)
    }
}

fn label_or_index(series: &TimeSeries, t: i64) -> String {
    series.label_at(t).map(str::to_string).unwrap_or_else(|| t.to_string())
}

/// How much history to draw before the forecast origin.
const TAIL: i64 = 240;

/// Raw curve, smoothed curve, and the point forecast of the primary window
/// with its nested spread bands.
pub fn forecast_chart(
    series: &TimeSeries,
    smoothed: &TimeSeries,
    records: &[ForecastRecord],
    manifest_digest: &str,
) -> String {
    let primary: Vec<&ForecastRecord> = {
        let first_window = records.first().map(|r| r.ma_window);
        records.iter().filter(|r| Some(r.ma_window) == first_window).collect()
    };
    let origin = primary.first().map(|r| r.origin).unwrap_or(series.end_index());
    let from = (origin - TAIL + 1).max(series.start_index());
    let last_target = primary.last().map(|r| r.target_index).unwrap_or(origin);

    let ys = minmax(
        series_window(series, from)
            .filter(|(t, _)| *t <= origin)
            .map(|(_, v)| v)
            .chain(primary.iter().map(|r| r.point))
            .chain(primary.iter().flat_map(|r| r.bands.iter().flat_map(|b| [b.lower, b.upper]))),
    );
    let frame = Frame::around((from as f64, last_target as f64), ys);

    let title = format!(
        "forecast from {} (origin {origin}), horizon {}",
        label_or_index(series, origin),
        primary.len()
    );
    let mut svg = Svg::new(manifest_digest, &title);

    // Bands behind everything, widest multiplier first. The polygon walks
    // the upper edge forward and the lower edge back, anchored at the
    // origin's realized value.
    let anchor = series.value_at(origin).unwrap_or(0.0);
    for (k, opacity) in [(2usize, 0.10), (1, 0.14), (0, 0.20)] {
        if primary.iter().all(|r| r.bands.len() > k) {
            let fwd = std::iter::once((origin as f64, anchor))
                .chain(primary.iter().map(|r| (r.target_index as f64, r.bands[k].upper)));
            let back = primary
                .iter()
                .rev()
                .map(|r| (r.target_index as f64, r.bands[k].lower))
                .chain(std::iter::once((origin as f64, anchor)));
            let pts = points_of(&frame, fwd.chain(back));
            svg.polygon(&pts, FORECAST_COLOR, opacity);
        }
    }

    let raw_pts = points_of(
        &frame,
        series_window(series, from).filter(|(t, _)| *t <= origin).map(|(t, v)| (t as f64, v)),
    );
    svg.polyline(&raw_pts, RAW_COLOR, 1.3, None);
    let smooth_pts = points_of(
        &frame,
        series_window(smoothed, from).filter(|(t, _)| *t <= origin).map(|(t, v)| (t as f64, v)),
    );
    svg.polyline(&smooth_pts, SMOOTH_COLOR, 1.2, Some("5,4"));
    let fc_pts = points_of(
        &frame,
        std::iter::once((origin as f64, anchor))
            .chain(primary.iter().map(|r| (r.target_index as f64, r.point))),
    );
    svg.polyline(&fc_pts, FORECAST_COLOR, 1.6, None);

    svg.frame_box(&frame);
    svg.x_labels(&label_or_index(series, from), &format!("+{}", last_target - origin));
    svg.finish()
}

/// One path per coefficient across the rolling identification origins.
pub fn coeffs_chart(models: &[DifferenceEquationModel], manifest_digest: &str) -> String {
    let order = models.first().map(|m| m.order).unwrap_or(0);
    let xs = minmax(models.iter().map(|m| m.window_origin as f64));
    let ys = minmax(models.iter().flat_map(|m| m.coefficients.iter().copied()));
    let frame = Frame::around(xs, ys);
    let mut svg = Svg::new(
        manifest_digest,
        &format!("rolling order-{order} coefficients over {} windows", models.len()),
    );
    for i in 0..order {
        let pts = points_of(
            &frame,
            models.iter().map(|m| (m.window_origin as f64, m.coefficients[i])),
        );
        svg.polyline(&pts, COEFF_COLORS[i % COEFF_COLORS.len()], 1.3, None);
        writeln!(
            svg.body,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
             fill=\"{}\">a{}</text>",
            fmt2(MARGIN_LEFT + 8.0 + 36.0 * i as f64),
            fmt2(MARGIN_TOP + 16.0),
            COEFF_COLORS[i % COEFF_COLORS.len()],
            i + 1
        )
        .unwrap();
    }
    svg.frame_box(&frame);
    svg.x_labels(&format!("{}", frame.x0), &format!("{}", frame.x1));
    svg.finish()
}

/// A backtest view: realized raw curve, per-origin point forecasts at one
/// horizon with the k=2 band, and the directional indicator as triangles
/// along the bottom rail (pointing up for "above", down for "below").
///
/// `scored` holds, per sampled origin, the record evaluated at the charted
/// horizon for the primary window.
pub fn backtest_chart(
    series: &TimeSeries,
    scored: &[ForecastRecord],
    horizon: usize,
    manifest_digest: &str,
) -> String {
    let from = scored
        .first()
        .map(|r| r.target_index)
        .unwrap_or(series.start_index())
        .max(series.start_index());
    let ys = minmax(
        series_window(series, from)
            .map(|(_, v)| v)
            .chain(scored.iter().map(|r| r.point))
            .chain(scored.iter().filter_map(|r| r.bands.get(1).map(|b| b.lower)))
            .chain(scored.iter().filter_map(|r| r.bands.get(1).map(|b| b.upper))),
    );
    let frame = Frame::around((from as f64, series.end_index() as f64), ys);
    let mut svg = Svg::new(
        manifest_digest,
        &format!("backtest at horizon {horizon}: forecasts, 2-spread band, direction calls"),
    );

    if scored.iter().all(|r| r.bands.len() > 1) && scored.len() > 1 {
        let fwd = scored.iter().map(|r| (r.target_index as f64, r.bands[1].upper));
        let back = scored.iter().rev().map(|r| (r.target_index as f64, r.bands[1].lower));
        let pts = points_of(&frame, fwd.chain(back));
        svg.polygon(&pts, FORECAST_COLOR, 0.12);
    }

    let raw_pts = points_of(&frame, series_window(series, from).map(|(t, v)| (t as f64, v)));
    svg.polyline(&raw_pts, RAW_COLOR, 1.2, None);
    let fc_pts =
        points_of(&frame, scored.iter().map(|r| (r.target_index as f64, r.point)));
    svg.polyline(&fc_pts, FORECAST_COLOR, 1.1, None);

    let rail = HEIGHT - MARGIN_BOTTOM - 8.0;
    for r in scored {
        let x = frame.px(r.target_index as f64);
        let (pts, color) = match r.indicator {
            Indicator::Above => (
                format!(
                    "{},{} {},{} {},{}",
                    fmt2(x - 3.0),
                    fmt2(rail),
                    fmt2(x + 3.0),
                    fmt2(rail),
                    fmt2(x),
                    fmt2(rail - 5.0)
                ),
                ABOVE_COLOR,
            ),
            Indicator::Below => (
                format!(
                    "{},{} {},{} {},{}",
                    fmt2(x - 3.0),
                    fmt2(rail - 5.0),
                    fmt2(x + 3.0),
                    fmt2(rail - 5.0),
                    fmt2(x),
                    fmt2(rail)
                ),
                BELOW_COLOR,
            ),
        };
        writeln!(svg.body, "<polygon points=\"{pts}\" fill=\"{color}\"/>").unwrap();
    }

    svg.frame_box(&frame);
    svg.x_labels(&label_or_index(series, from), &label_or_index(series, series.end_index()));
    svg.finish()
}
