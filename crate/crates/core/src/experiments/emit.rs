use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::scan::ScanRecord;

pub const CSV_HEADER: &str = "t,entropy,eof,abs_delta,ddelta,cond";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidArgument(format!("unknown format `{other}`"))),
        }
    }
}

/// Exponent form with 17 significant digits, which round-trips every f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn json_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_else(|| "null".into())
}

/// CSV text. Tolerance overrides, if any, go first as `#` lines.
pub fn to_csv(records: &[ScanRecord], overrides: &BTreeMap<String, f64>) -> String {
    let mut out = String::new();
    for (k, v) in overrides {
        let _ = writeln!(out, "# tolerance {k} = {}", fmt_float(*v));
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_float(r.t),
            opt(r.entropy),
            opt(r.eof),
            fmt_float(r.delta.abs()),
            fmt_float(r.ddelta),
            opt(r.cond)
        );
    }
    out
}

/// JSON array of records with the same float formatting as the CSV.
pub fn to_json(records: &[ScanRecord]) -> String {
    let mut out = String::from("[\n");
    for (i, r) in records.iter().enumerate() {
        let _ = write!(
            out,
            "  {{\"t\": {}, \"entropy\": {}, \"eof\": {}, \"delta\": {}, \"ddelta\": {}, \"cond\": {}}}",
            fmt_float(r.t),
            json_opt(r.entropy),
            json_opt(r.eof),
            fmt_float(r.delta),
            fmt_float(r.ddelta),
            json_opt(r.cond)
        );
        out.push_str(if i + 1 < records.len() { ",\n" } else { "\n" });
    }
    out.push_str("]\n");
    out
}

pub fn render(records: &[ScanRecord], format: Format, overrides: &BTreeMap<String, f64>) -> Result<String> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to emit".into()));
    }
    Ok(match format {
        Format::Csv => to_csv(records, overrides),
        Format::Json => to_json(records),
    })
}

/// Writes records to `path`, or to stdout when `path` is `None`.
pub fn emit(
    records: &[ScanRecord],
    format: Format,
    path: Option<&Path>,
    overrides: &BTreeMap<String, f64>,
) -> Result<()> {
    let text = render(records, format, overrides)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Parses CSV written by [`to_csv`]. `abs_delta` comes back as `delta`.
pub fn parse_csv(text: &str) -> Result<Vec<ScanRecord>> {
    let bad = |m: String| Error::Parse {
        source_name: "csv".into(),
        message: m,
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(bad(format!(
            "unexpected header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let field = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|e| bad(format!("`{s}`: {e}")))
        }
    };
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| bad(e.to_string()))?;
        let need = |i: usize| field(&row[i])?.ok_or_else(|| bad(format!("missing column {i}")));
        out.push(ScanRecord {
            t: need(0)?,
            entropy: field(&row[1])?,
            eof: field(&row[2])?,
            delta: need(3)?,
            ddelta: need(4)?,
            cond: field(&row[5])?,
        });
    }
    Ok(out)
}
