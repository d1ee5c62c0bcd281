//! Delimited-text ingestion into a labelled series.
//!
//! The reader is strict by default: every malformed row is an error carrying
//! its file line number, so nothing is silently dropped. Callers can opt
//! into dropping bad rows, in which case each one is reported back for
//! diagnostics. Dates are opaque strings validated only for strict
//! lexicographic ascent, which matches ISO-8601 and the plain `tNNNNNN`
//! labels of the synthetic fixtures.

use std::fmt;

use diffcast::TimeSeries;
use thiserror::Error;

/// How to find a column: by header name or by zero-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSpec {
    Name(String),
    Index(usize),
}

impl ColumnSpec {
    /// A spec that is all digits selects by position; anything else is a
    /// header name.
    pub fn parse(s: &str) -> ColumnSpec {
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            ColumnSpec::Index(s.parse().expect("all-digit string"))
        } else {
            ColumnSpec::Name(s.to_string())
        }
    }
}

impl fmt::Display for ColumnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSpec::Name(n) => write!(f, "{n:?}"),
            ColumnSpec::Index(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    /// Pick whichever of ',' and ';' splits the first considered line into
    /// more fields; ties go to ','.
    Auto,
    Comma,
    Semicolon,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestSpec {
    pub date_column: ColumnSpec,
    pub value_column: ColumnSpec,
    /// Raw lines discarded from the top of the file before any parsing.
    pub skip_rows: usize,
    /// Input rows are newest-first and must be flipped.
    pub reverse: bool,
    /// Values use ',' as the decimal separator ('.' is then a thousands
    /// separator and is stripped).
    pub decimal_comma: bool,
    /// Report malformed rows instead of failing on them.
    pub drop_bad_rows: bool,
    pub delimiter: Delimiter,
}

impl Default for IngestSpec {
    fn default() -> Self {
        IngestSpec {
            date_column: ColumnSpec::Name("date".into()),
            value_column: ColumnSpec::Name("value".into()),
            skip_rows: 0,
            reverse: false,
            decimal_comma: false,
            drop_bad_rows: false,
            delimiter: Delimiter::Auto,
        }
    }
}

/// One rejected input row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadRow {
    /// 1-based line number in the original file, counting skipped lines.
    pub line: u64,
    pub reason: String,
}

impl fmt::Display for BadRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

fn list_rows(rows: &[BadRow]) -> String {
    const SHOWN: usize = 12;
    let mut parts: Vec<String> = rows.iter().take(SHOWN).map(|r| r.to_string()).collect();
    if rows.len() > SHOWN {
        parts.push(format!("and {} more", rows.len() - SHOWN));
    }
    parts.join("; ")
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("failed reading input: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed delimited text: {0}")]
    Csv(#[from] csv::Error),
    #[error("no rows left after skipping {skipped} line(s)")]
    Empty { skipped: usize },
    #[error("column {wanted} not found in header [{}]", .header.join(", "))]
    MissingColumn { wanted: String, header: Vec<String> },
    #[error("{} malformed row(s): {}", .rows.len(), list_rows(.rows))]
    BadRows { rows: Vec<BadRow> },
    #[error(
        "dates out of order at line {line}: {prev:?} followed by {curr:?} \
         (newest-first files need --reverse)"
    )]
    NotAscending { line: u64, prev: String, curr: String },
    #[error("duplicate date {date:?} at line {line}")]
    DuplicateDate { line: u64, date: String },
    #[error("only {0} valid row(s); a series needs at least 2")]
    TooFew(usize),
}

/// A parsed series plus the rows that were dropped on request.
#[derive(Debug)]
pub struct Ingested {
    pub series: TimeSeries,
    pub dropped: Vec<BadRow>,
}

fn pick_delimiter(spec: &IngestSpec, first_line: &str) -> u8 {
    match spec.delimiter {
        Delimiter::Comma => b',',
        Delimiter::Semicolon => b';',
        Delimiter::Auto => {
            let commas = first_line.matches(',').count();
            let semis = first_line.matches(';').count();
            if semis > commas {
                b';'
            } else {
                b','
            }
        }
    }
}

fn transform_value(raw: &str, decimal_comma: bool) -> String {
    if decimal_comma {
        raw.replace('.', "").replace(',', ".")
    } else {
        raw.to_string()
    }
}

struct Columns {
    date: usize,
    value: usize,
}

/// Resolves a by-name column against the header, or passes an index through.
fn resolve(spec: &ColumnSpec, header: Option<&csv::StringRecord>) -> Result<usize, IngestError> {
    match spec {
        ColumnSpec::Index(i) => Ok(*i),
        ColumnSpec::Name(name) => {
            let header = header.expect("by-name selection reads a header row first");
            header
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| IngestError::MissingColumn {
                    wanted: spec.to_string(),
                    header: header.iter().map(|h| h.trim().to_string()).collect(),
                })
        }
    }
}

/// Parses delimited text into an oldest-first labelled series.
///
/// The header row is required when either column is selected by name. With
/// both columns positional, the first row is consumed as a header exactly
/// when its value cell does not parse as a number.
pub fn ingest(text: &str, spec: &IngestSpec) -> Result<Ingested, IngestError> {
    // Skip raw preamble lines before involving the csv parser, so that
    // non-delimited banners cannot derail quoting state.
    let mut rest = text;
    for skipped in 0..spec.skip_rows {
        match rest.find('\n') {
            Some(pos) => rest = &rest[pos + 1..],
            None => return Err(IngestError::Empty { skipped: skipped + 1 }),
        }
    }
    if rest.trim().is_empty() {
        return Err(IngestError::Empty { skipped: spec.skip_rows });
    }
    let first_line = rest.lines().next().unwrap_or("");
    let delimiter = pick_delimiter(spec, first_line);

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(delimiter)
        .from_reader(rest.as_bytes());

    let mut records = reader.records();
    let line_of = |record: &csv::StringRecord| -> u64 {
        let within = record.position().map(|p| p.line()).unwrap_or(0);
        within + spec.skip_rows as u64
    };

    let named = matches!(spec.date_column, ColumnSpec::Name(_))
        || matches!(spec.value_column, ColumnSpec::Name(_));
    let first = match records.next() {
        Some(r) => r?,
        None => return Err(IngestError::Empty { skipped: spec.skip_rows }),
    };

    let mut pending_data: Option<csv::StringRecord> = None;
    let header = if named {
        Some(first)
    } else {
        // Positional selection: sniff whether the first row is data.
        let idx = match &spec.value_column {
            ColumnSpec::Index(i) => *i,
            ColumnSpec::Name(_) => unreachable!("named handled above"),
        };
        let looks_numeric = first
            .get(idx)
            .map(|cell| {
                transform_value(cell.trim(), spec.decimal_comma).parse::<f64>().is_ok()
            })
            .unwrap_or(false);
        if looks_numeric {
            pending_data = Some(first);
            None
        } else {
            Some(first)
        }
    };

    let columns = Columns {
        date: resolve(&spec.date_column, header.as_ref())?,
        value: resolve(&spec.value_column, header.as_ref())?,
    };

    let mut rows: Vec<(u64, String, f64)> = Vec::new();
    let mut bad: Vec<BadRow> = Vec::new();
    let mut consume = |record: csv::StringRecord| -> Result<(), IngestError> {
        let line = line_of(&record);
        let date = match record.get(columns.date) {
            Some(d) => d.trim().to_string(),
            None => {
                bad.push(BadRow { line, reason: format!("missing date column #{}", columns.date) });
                return Ok(());
            }
        };
        if date.is_empty() {
            bad.push(BadRow { line, reason: "empty date".into() });
            return Ok(());
        }
        let raw_value = match record.get(columns.value) {
            Some(v) => v.trim(),
            None => {
                bad.push(BadRow {
                    line,
                    reason: format!("missing value column #{}", columns.value),
                });
                return Ok(());
            }
        };
        let cooked = transform_value(raw_value, spec.decimal_comma);
        match cooked.parse::<f64>() {
            Ok(v) if v.is_finite() => rows.push((line, date, v)),
            Ok(v) => bad.push(BadRow { line, reason: format!("non-finite value {v}") }),
            Err(_) => {
                bad.push(BadRow { line, reason: format!("unparsable value {raw_value:?}") })
            }
        }
        Ok(())
    };

    if let Some(record) = pending_data.take() {
        consume(record)?;
    }
    for record in records {
        consume(record?)?;
    }

    if !spec.drop_bad_rows && !bad.is_empty() {
        return Err(IngestError::BadRows { rows: bad });
    }
    if spec.reverse {
        rows.reverse();
    }
    for pair in rows.windows(2) {
        let (_, ref prev, _) = pair[0];
        let (line, ref curr, _) = pair[1];
        if curr == prev {
            return Err(IngestError::DuplicateDate { line, date: curr.clone() });
        }
        if curr < prev {
            return Err(IngestError::NotAscending {
                line,
                prev: prev.clone(),
                curr: curr.clone(),
            });
        }
    }
    if rows.len() < 2 {
        return Err(IngestError::TooFew(rows.len()));
    }

    let labels: Vec<String> = rows.iter().map(|(_, d, _)| d.clone()).collect();
    let values: Vec<f64> = rows.iter().map(|(_, _, v)| *v).collect();
    let series = TimeSeries::with_labels(0, values, labels)
        .expect("at least two aligned rows survive validation");
    Ok(Ingested { series, dropped: bad })
}
