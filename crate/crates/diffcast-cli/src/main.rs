//! Command-line front end for the difference-equation forecaster.
//!
//! Subcommands map one-to-one onto artifact classes: `forecast` emits the
//! records for one origin, `coeffs` the rolling identification path,
//! `backtest` the scored replay over past origins, `certify` an exact
//! identifiability certificate, and `fetch` a cached download. All reports
//! are deterministic: identical input bytes and flags produce identical
//! output bytes.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diffcast::algebra::{
    generating_function_to_recursion, recursion_to_generating_function,
    wronskian_certificate_with, CertificateOptions, Polynomial, WronskianCertificate,
    WronskianKind,
};
use diffcast::backtest::sweep_report;
use diffcast::estimate::{causal_smooth, rolling_identify, IdentificationConfig, SmootherConfig};
use diffcast::forecast::{forecast_series, ForecastConfig, ForecastRecord};
use diffcast::TimeSeries;
use diffcast_cli::fetchcache::{self, FetchError, Source};
use diffcast_cli::ingest::{ingest, ColumnSpec, Delimiter, IngestSpec};
use diffcast_cli::report::{self, sha256_hex};
use diffcast_cli::svg;
use num::BigRational;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "diffcast",
    version,
    about = "Forecasts a daily series by identifying the low-order linear \
             difference equation its trendline locally satisfies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forecast from one origin and report every record.
    Forecast(ForecastCmd),
    /// Identify the difference equation on every sliding window.
    Coeffs(CoeffsCmd),
    /// Replay forecasts over past origins and score them.
    Backtest(BacktestCmd),
    /// Certify whether a claimed model order is minimal, in exact arithmetic.
    Certify(CertifyCmd),
    /// Download a URL into the local content-addressed cache.
    Fetch(FetchCmd),
}

/// Where the input series comes from and how to parse it.
#[derive(Args)]
struct InputArgs {
    /// Input file, or '-' for stdin.
    #[arg(long, short = 'i')]
    input: String,

    /// Date column, as a header name or zero-based index.
    #[arg(long, default_value = "date")]
    date_col: String,

    /// Value column, as a header name or zero-based index.
    #[arg(long, default_value = "value")]
    value_col: String,

    /// Raw lines to discard from the top of the file before parsing.
    #[arg(long, default_value_t = 0)]
    skip_rows: usize,

    /// Rows are newest-first; flip them to oldest-first.
    #[arg(long)]
    reverse: bool,

    /// Field delimiter.
    #[arg(long, value_enum, default_value_t = DelimiterArg::Auto)]
    delimiter: DelimiterArg,

    /// Decimal separator used by the value column: '.' or ','.
    #[arg(long, default_value = ".")]
    decimal_separator: String,

    /// Skip malformed rows with a warning instead of failing.
    #[arg(long)]
    drop_bad_rows: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DelimiterArg {
    /// Pick ',' or ';' by which splits the first row into more fields.
    Auto,
    Comma,
    Semicolon,
}

impl From<DelimiterArg> for Delimiter {
    fn from(d: DelimiterArg) -> Delimiter {
        match d {
            DelimiterArg::Auto => Delimiter::Auto,
            DelimiterArg::Comma => Delimiter::Comma,
            DelimiterArg::Semicolon => Delimiter::Semicolon,
        }
    }
}

impl DelimiterArg {
    fn name(self) -> &'static str {
        match self {
            DelimiterArg::Auto => "auto",
            DelimiterArg::Comma => "comma",
            DelimiterArg::Semicolon => "semicolon",
        }
    }
}

/// Smoothing and identification settings shared by the series commands.
#[derive(Args)]
struct ModelArgs {
    /// Model order n.
    #[arg(long, default_value_t = 3)]
    order: usize,

    /// Identification window length L (at least 2n).
    #[arg(long = "L", visible_alias = "fit-window", default_value_t = 45)]
    fit_window: usize,

    /// Smoother window length W.
    #[arg(long = "W", visible_alias = "smooth-window", default_value_t = 20)]
    smooth_window: usize,

    /// Smoother polynomial degree d.
    #[arg(long = "d", visible_alias = "smooth-degree", default_value_t = 2)]
    smooth_degree: usize,

    /// Relative singular-value cutoff for the least-squares rank decision.
    #[arg(long, default_value_t = 1e-10)]
    rank_tolerance: f64,
}

impl ModelArgs {
    fn smoother(&self) -> SmootherConfig {
        SmootherConfig { window: self.smooth_window, degree: self.smooth_degree }
    }

    fn identification(&self) -> IdentificationConfig {
        IdentificationConfig {
            order: self.order,
            window: self.fit_window,
            rank_tolerance: self.rank_tolerance,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    fn name(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        }
    }
}

#[derive(Args)]
struct ForecastCmd {
    #[command(flatten)]
    input: InputArgs,

    #[command(flatten)]
    model: ModelArgs,

    /// Steps ahead to forecast.
    #[arg(long, default_value_t = 5)]
    horizon: usize,

    /// Residual window N; comma-separate alternates, the first is primary.
    #[arg(
        long = "ma-window",
        visible_alias = "ma-windows",
        value_delimiter = ',',
        default_values_t = vec![100]
    )]
    ma_windows: Vec<usize>,

    /// Forecast origin: a series index or a date label (default: last sample).
    #[arg(long)]
    origin: Option<String>,

    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,

    /// Report destination, or '-' for stdout.
    #[arg(long, short = 'o', default_value = "-")]
    output: String,

    /// Also draw the raw, smoothed, and forecast curves to this SVG file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct CoeffsCmd {
    #[command(flatten)]
    input: InputArgs,

    #[command(flatten)]
    model: ModelArgs,

    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    format: ReportFormat,

    /// Report destination, or '-' for stdout.
    #[arg(long, short = 'o', default_value = "-")]
    output: String,

    /// Also draw the coefficient paths to this SVG file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct BacktestCmd {
    #[command(flatten)]
    input: InputArgs,

    #[command(flatten)]
    model: ModelArgs,

    /// Horizons to score, comma-separated; all share one origin grid.
    #[arg(long, value_delimiter = ',', default_values_t = vec![5])]
    horizons: Vec<usize>,

    /// Residual windows N to score, comma-separated, the first is primary.
    #[arg(
        long = "ma-windows",
        visible_alias = "ma-window",
        value_delimiter = ',',
        default_values_t = vec![100]
    )]
    ma_windows: Vec<usize>,

    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,

    /// Report destination, or '-' for stdout.
    #[arg(long, short = 'o', default_value = "-")]
    output: String,

    /// Also draw realized values, forecasts, bands, and direction calls at
    /// the first horizon to this SVG file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyCmd {
    /// Recursion coefficients a1,...,an as exact rationals, e.g. "1,1" or
    /// "3/2,-1/2".
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    coeffs: Vec<String>,

    /// Initial values x(0),...,x(n-1), one per coefficient.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    initials: Vec<String>,

    /// Order to certify (default: the number of coefficients given).
    #[arg(long)]
    claimed_order: Option<usize>,

    /// Seed for the rank evaluation points.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Report destination, or '-' for stdout.
    #[arg(long, short = 'o', default_value = "-")]
    output: String,
}

#[derive(Args)]
struct FetchCmd {
    /// URL to download.
    #[arg(long)]
    url: String,

    /// Cache directory (default: $DIFFCAST_CACHE, then ~/.cache/diffcast).
    #[arg(long)]
    cache_dir: Option<PathBuf>,

    /// Write the body here ('-' for stdout) instead of printing the cache
    /// path.
    #[arg(long, short = 'o')]
    output: Option<String>,

    /// Whole-request network timeout in seconds.
    #[arg(long, default_value_t = 30)]
    timeout: u64,
}

/// A failed run, split by exit code: usage errors exit 2, data errors 1.
enum Failure {
    Usage(String),
    Data(String),
}

impl From<diffcast::Error> for Failure {
    fn from(e: diffcast::Error) -> Failure {
        match e {
            diffcast::Error::Config(_) | diffcast::Error::UnsupportedOrder { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Data(other.to_string()),
        }
    }
}

impl From<FetchError> for Failure {
    fn from(e: FetchError) -> Failure {
        match e {
            FetchError::BadUrl { .. } => Failure::Usage(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Forecast(cmd) => run_forecast(cmd),
        Command::Coeffs(cmd) => run_coeffs(cmd),
        Command::Backtest(cmd) => run_backtest_cmd(cmd),
        Command::Certify(cmd) => run_certify(cmd),
        Command::Fetch(cmd) => run_fetch(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Reads the input bytes from a file or stdin.
fn read_input(input: &str) -> Result<Vec<u8>, Failure> {
    if input == "-" {
        let mut bytes = Vec::new();
        std::io::stdin()
            .read_to_end(&mut bytes)
            .map_err(|e| Failure::Data(format!("reading stdin: {e}")))?;
        Ok(bytes)
    } else {
        std::fs::read(input).map_err(|e| Failure::Data(format!("reading {input:?}: {e}")))
    }
}

fn ingest_spec(args: &InputArgs) -> Result<IngestSpec, Failure> {
    let decimal_comma = match args.decimal_separator.as_str() {
        "." => false,
        "," => true,
        other => {
            return Err(Failure::Usage(format!(
                "--decimal-separator must be '.' or ',', got {other:?}"
            )))
        }
    };
    Ok(IngestSpec {
        date_column: ColumnSpec::parse(&args.date_col),
        value_column: ColumnSpec::parse(&args.value_col),
        skip_rows: args.skip_rows,
        reverse: args.reverse,
        decimal_comma,
        drop_bad_rows: args.drop_bad_rows,
        delimiter: args.delimiter.into(),
    })
}

/// Loads and parses the series; returns it with the input content digest.
fn load_series(args: &InputArgs) -> Result<(TimeSeries, String), Failure> {
    let bytes = read_input(&args.input)?;
    let digest = sha256_hex(&bytes);
    let text = String::from_utf8_lossy(&bytes);
    let spec = ingest_spec(args)?;
    let ingested = ingest(&text, &spec).map_err(|e| Failure::Data(e.to_string()))?;
    for row in &ingested.dropped {
        eprintln!("warning: dropped row ({row})");
    }
    Ok((ingested.series, digest))
}

fn input_config(args: &InputArgs) -> Value {
    json!({
        "input": args.input,
        "date_column": args.date_col,
        "value_column": args.value_col,
        "skip_rows": args.skip_rows,
        "reverse": args.reverse,
        "delimiter": args.delimiter.name(),
        "decimal_separator": args.decimal_separator,
        "drop_bad_rows": args.drop_bad_rows,
    })
}

fn write_output(dest: &str, bytes: &[u8]) -> Result<(), Failure> {
    if dest == "-" {
        std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Data(format!("writing stdout: {e}")))
    } else {
        std::fs::write(dest, bytes).map_err(|e| Failure::Data(format!("writing {dest:?}: {e}")))
    }
}

fn write_svg(path: &PathBuf, chart: &str) -> Result<(), Failure> {
    std::fs::write(path, chart)
        .map_err(|e| Failure::Data(format!("writing {}: {e}", path.display())))
}

/// Digest that ties a chart to the run that drew it.
fn manifest_digest(manifest: &Value) -> String {
    sha256_hex(serde_json::to_string(manifest).expect("manifest serializes").as_bytes())
}

/// Maps `--origin` to a series index: integers are taken as indices, any
/// other string is looked up among the date labels.
fn resolve_origin(series: &TimeSeries, arg: Option<&str>) -> Result<i64, Failure> {
    let Some(s) = arg else { return Ok(series.end_index()) };
    if let Ok(i) = s.parse::<i64>() {
        return Ok(i);
    }
    if let Some(labels) = series.labels() {
        if let Some(pos) = labels.iter().position(|l| l == s) {
            return Ok(series.start_index() + pos as i64);
        }
    }
    Err(Failure::Data(format!("origin {s:?} is neither an index nor a known date label")))
}

fn run_forecast(cmd: ForecastCmd) -> Result<(), Failure> {
    let config = ForecastConfig {
        horizon: cmd.horizon,
        smoother: cmd.model.smoother(),
        identification: cmd.model.identification(),
        ma_windows: cmd.ma_windows.clone(),
    };
    // Flag combinations are checked before any input is read, so a usage
    // error stays a usage error even when the input is also bad.
    config.validate()?;
    let (series, digest) = load_series(&cmd.input)?;
    let origin = resolve_origin(&series, cmd.origin.as_deref())?;
    let records = forecast_series(&series, origin, &config)?;

    let manifest = report::manifest(
        "forecast",
        &digest,
        json!({
            "ingest": input_config(&cmd.input),
            "forecast": serde_json::to_value(&config).expect("config serializes"),
            "origin": origin,
            "format": cmd.format.name(),
        }),
        None,
    );

    let label_of = |t: i64| series.label_at(t).map(str::to_string);
    match cmd.format {
        ReportFormat::Json => {
            let body = report::envelope(
                manifest.clone(),
                "records",
                report::records_json(&records, label_of),
            );
            write_output(&cmd.output, body.as_bytes())?;
        }
        ReportFormat::Csv => {
            write_output(&cmd.output, &report::records_csv(&records, label_of))?;
        }
    }

    if let Some(path) = &cmd.svg {
        let prefix = series.prefix_through(origin)?;
        let smoothed = causal_smooth(&prefix, &config.smoother)?;
        let chart = svg::forecast_chart(&series, &smoothed, &records, &manifest_digest(&manifest));
        write_svg(path, &chart)?;
    }
    Ok(())
}

fn run_coeffs(cmd: CoeffsCmd) -> Result<(), Failure> {
    let smoother = cmd.model.smoother();
    let identification = cmd.model.identification();
    smoother.validate()?;
    identification.validate()?;
    let (series, digest) = load_series(&cmd.input)?;
    let models = rolling_identify(&series, &smoother, &identification)?;

    let manifest = report::manifest(
        "coeffs",
        &digest,
        json!({
            "ingest": input_config(&cmd.input),
            "smoother": serde_json::to_value(&smoother).expect("config serializes"),
            "identification": serde_json::to_value(&identification).expect("config serializes"),
            "format": cmd.format.name(),
        }),
        None,
    );

    match cmd.format {
        ReportFormat::Json => {
            let body = report::envelope(manifest.clone(), "models", report::coeffs_json(&models));
            write_output(&cmd.output, body.as_bytes())?;
        }
        ReportFormat::Csv => {
            write_output(&cmd.output, &report::coeffs_csv(&models, identification.order))?;
        }
    }

    if let Some(path) = &cmd.svg {
        let chart = svg::coeffs_chart(&models, &manifest_digest(&manifest));
        write_svg(path, &chart)?;
    }
    Ok(())
}

fn run_backtest_cmd(cmd: BacktestCmd) -> Result<(), Failure> {
    let config = ForecastConfig {
        horizon: cmd.horizons.first().copied().unwrap_or(1),
        smoother: cmd.model.smoother(),
        identification: cmd.model.identification(),
        ma_windows: cmd.ma_windows.clone(),
    };
    config.validate()?;
    if cmd.horizons.contains(&0) {
        return Err(Failure::Usage("sweep horizons must be at least 1".into()));
    }
    let (series, digest) = load_series(&cmd.input)?;
    let reports = sweep_report(&series, &config, &cmd.horizons)?;

    let manifest = report::manifest(
        "backtest",
        &digest,
        json!({
            "ingest": input_config(&cmd.input),
            "forecast": serde_json::to_value(&config).expect("config serializes"),
            "horizons": cmd.horizons,
            "format": cmd.format.name(),
        }),
        None,
    );

    match cmd.format {
        ReportFormat::Json => {
            let body = report::envelope(
                manifest.clone(),
                "reports",
                serde_json::to_value(&reports).expect("reports serialize"),
            );
            write_output(&cmd.output, body.as_bytes())?;
        }
        ReportFormat::Csv => {
            write_output(&cmd.output, &report::backtest_csv(&reports))?;
        }
    }

    if let Some(path) = &cmd.svg {
        let Some(first) = reports.first() else {
            return Err(Failure::Usage("an SVG needs at least one horizon".into()));
        };
        let scored = sampled_scores(&series, &config, first.first_origin, first.last_origin)?;
        let chart =
            svg::backtest_chart(&series, &scored, config.horizon, &manifest_digest(&manifest));
        write_svg(path, &chart)?;
    }
    Ok(())
}

/// How many origins the backtest chart samples at most.
const CHART_SAMPLES: i64 = 240;

/// Recomputes forecasts on an evenly spaced subset of the backtest grid,
/// keeping the record at the charted horizon for the primary window.
fn sampled_scores(
    series: &TimeSeries,
    config: &ForecastConfig,
    first: i64,
    last: i64,
) -> Result<Vec<ForecastRecord>, Failure> {
    let span = last - first;
    let count = (span + 1).min(CHART_SAMPLES);
    let mut scored = Vec::with_capacity(count as usize);
    for k in 0..count {
        let origin = if count < 2 { first } else { first + span * k / (count - 1) };
        let records = forecast_series(series, origin, config)?;
        scored.extend(
            records
                .into_iter()
                .find(|r| r.horizon == config.horizon && r.ma_window == config.primary_window()),
        );
    }
    Ok(scored)
}

/// Parses one comma-separated rational flag entry.
fn parse_rational(flag: &str, raw: &str) -> Result<BigRational, Failure> {
    BigRational::from_str(raw.trim()).map_err(|_| {
        Failure::Usage(format!("{flag} entry {raw:?} is not an integer or p/q rational"))
    })
}

fn certificate_json(cert: &WronskianCertificate) -> Value {
    let (kind, expected) = match cert.kind {
        WronskianKind::Full => ("full", 2 * cert.claimed_order),
        WronskianKind::Dynamics => ("dynamics", cert.claimed_order),
    };
    json!({
        "kind": kind,
        "claimed_order": cert.claimed_order,
        "matrix_order": cert.matrix_order,
        "rank": cert.rank,
        "expected_rank": expected,
        "evaluation_point": cert.evaluation_point.to_string(),
        "identifiable": cert.identifiable,
    })
}

fn poly_strings(p: &Polynomial) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn run_certify(cmd: CertifyCmd) -> Result<(), Failure> {
    let coeffs: Vec<BigRational> = cmd
        .coeffs
        .iter()
        .map(|s| parse_rational("--coeffs", s))
        .collect::<Result<_, _>>()?;
    let initials: Vec<BigRational> = cmd
        .initials
        .iter()
        .map(|s| parse_rational("--initials", s))
        .collect::<Result<_, _>>()?;
    if initials.len() != coeffs.len() {
        return Err(Failure::Usage(format!(
            "--initials has {} value(s) but --coeffs has {}; an order-n recursion \
             needs exactly n initial values",
            initials.len(),
            coeffs.len()
        )));
    }

    let coeff_strs: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    let init_strs: Vec<String> = initials.iter().map(|c| c.to_string()).collect();
    let claimed = cmd.claimed_order.unwrap_or(coeffs.len());

    let x = recursion_to_generating_function(&coeffs, &initials)?;
    let minimal = generating_function_to_recursion(&x)?;
    let options = CertificateOptions { seed: cmd.seed, ..Default::default() };
    let full = wronskian_certificate_with(&x, claimed, WronskianKind::Full, &options)?;
    let dynamics = wronskian_certificate_with(&x, claimed, WronskianKind::Dynamics, &options)?;

    let canonical = format!("coeffs={}; initials={}", coeff_strs.join(","), init_strs.join(","));
    let manifest = report::manifest(
        "certify",
        &sha256_hex(canonical.as_bytes()),
        json!({
            "coefficients": coeff_strs,
            "initial_conditions": init_strs,
            "claimed_order": claimed,
        }),
        Some(cmd.seed),
    );

    let payload = json!({
        "claimed_order": claimed,
        "generating_function": {
            "numerator": poly_strings(x.numerator()),
            "denominator": poly_strings(x.denominator()),
        },
        "minimal": {
            "order": minimal.order,
            "coefficients": minimal.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "initial_conditions": minimal
                .initial_conditions
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>(),
        },
        "full": certificate_json(&full),
        "dynamics": certificate_json(&dynamics),
        "identifiable": full.identifiable && dynamics.identifiable,
    });
    let body = report::envelope(manifest, "certificate", payload);
    write_output(&cmd.output, body.as_bytes())
}

fn resolve_cache_dir(flag: Option<PathBuf>) -> Result<PathBuf, Failure> {
    if let Some(dir) = flag {
        return Ok(dir);
    }
    if let Some(dir) = std::env::var_os("DIFFCAST_CACHE") {
        return Ok(PathBuf::from(dir));
    }
    if let Some(home) = std::env::var_os("HOME") {
        return Ok(PathBuf::from(home).join(".cache").join("diffcast"));
    }
    Err(Failure::Data(
        "no cache directory: pass --cache-dir or set DIFFCAST_CACHE".into(),
    ))
}

fn run_fetch(cmd: FetchCmd) -> Result<(), Failure> {
    let cache_dir = resolve_cache_dir(cmd.cache_dir)?;
    let agent = ureq::Agent::config_builder()
        .timeout_global(Some(Duration::from_secs(cmd.timeout)))
        .build()
        .new_agent();
    let fetched = fetchcache::fetch(&agent, &cmd.url, &cache_dir)?;
    if let Source::Stale { transport_error } = &fetched.source {
        eprintln!("warning: {transport_error}; serving the cached copy");
    }
    match cmd.output.as_deref() {
        None => {
            println!("{}", fetched.path.display());
            Ok(())
        }
        Some("-") => std::io::stdout()
            .write_all(&fetched.bytes)
            .map_err(|e| Failure::Data(format!("writing stdout: {e}"))),
        Some(path) => std::fs::write(path, &fetched.bytes)
            .map_err(|e| Failure::Data(format!("writing {path:?}: {e}"))),
    }
}
