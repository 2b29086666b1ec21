//! Loading observations from built-in datasets, plain-text files and CSV.

use std::fs;
use std::path::Path;

use wbs_core::datasets;
use wbs_core::Sample;

use crate::CliError;

/// A validated sample together with a label for reports.
pub struct Loaded {
    pub label: String,
    pub sample: Sample,
}

/// `spec` is a built-in name unless a file of that name exists.
pub fn load(spec: &str, column: Option<&str>) -> Result<Loaded, CliError> {
    let path = Path::new(spec);
    if !path.exists() {
        if let Some(d) = datasets::builtin(spec) {
            if column.is_some() {
                return Err(CliError::Usage("--column only applies to CSV files".into()));
            }
            let sample = Sample::new(d.values.to_vec()).map_err(|e| CliError::Data(e.to_string()))?;
            return Ok(Loaded {
                label: d.name.to_string(),
                sample,
            });
        }
        return Err(CliError::Data(format!(
            "'{spec}' is neither a readable file nor a built-in dataset (try `wbs datasets`)"
        )));
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read {spec}: {e}")))?;
    let is_csv = column.is_some() || path.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv"));
    let values = if is_csv {
        parse_csv(&text, column.unwrap_or("1"))?
    } else {
        parse_plain(&text)?
    };
    let sample = Sample::new(values).map_err(|e| CliError::Data(e.to_string()))?;
    Ok(Loaded {
        label: spec.to_string(),
        sample,
    })
}

fn check_value(field: &str, line: usize) -> Result<f64, CliError> {
    let x: f64 = field
        .trim()
        .parse()
        .map_err(|_| CliError::Data(format!("cannot parse '{}' at line {line}", field.trim())))?;
    if !x.is_finite() {
        return Err(CliError::Data(format!("non-finite observation at line {line}")));
    }
    if x <= 0.0 {
        return Err(CliError::Data(format!("nonpositive observation at line {line}")));
    }
    Ok(x)
}

/// One observation per line; blank lines and `#` comments are skipped.
pub fn parse_plain(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        out.push(check_value(body, i + 1)?);
    }
    if out.is_empty() {
        return Err(CliError::Data("no observations found".into()));
    }
    Ok(out)
}

/// CSV with a header row. `column` is a header name or a 1-based index.
pub fn parse_csv(text: &str, column: &str) -> Result<Vec<f64>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| CliError::Data(format!("bad CSV header: {e}")))?.clone();
    let idx = match headers.iter().position(|h| h == column) {
        Some(i) => i,
        None => match column.parse::<usize>() {
            Ok(k) if k >= 1 && k <= headers.len() => k - 1,
            _ => return Err(CliError::Usage(format!("no column '{column}' in CSV header"))),
        },
    };
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::Data(format!("bad CSV record: {e}")))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let field = rec
            .get(idx)
            .ok_or_else(|| CliError::Data(format!("missing column {} at line {line}", idx + 1)))?;
        if field.is_empty() {
            continue;
        }
        out.push(check_value(field, line)?);
    }
    if out.is_empty() {
        return Err(CliError::Data("no observations found".into()));
    }
    Ok(out)
}

/// SHA-256 of a dataset written one value per line with Rust's shortest
/// round-trip formatting.
pub fn checksum(values: &[f64]) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    for v in values {
        h.update(format!("{v}\n").as_bytes());
    }
    hex::encode(h.finalize())
}
