//! CSV ingestion and bundle file handling.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use wimp_core::nalgebra::DMatrix;
use wimp_core::ts::TimeSeriesData;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Lossless decimal form of a float (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Reads a comma-separated file with a header of variable names.
///
/// Rows and columns in error messages are 1-based, counting the header as row 1.
pub fn ingest_csv(path: &Path) -> CliResult<TimeSeriesData> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let names: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Data(format!("{}: bad header: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    if names.is_empty() || names.iter().any(String::is_empty) {
        return Err(CliError::Data(format!(
            "{}: header must name every column",
            path.display()
        )));
    }
    let mut seen = HashSet::new();
    for (c, name) in names.iter().enumerate() {
        if !seen.insert(name) {
            return Err(CliError::Data(format!(
                "{}: duplicate column name '{name}' at row 1, column {}",
                path.display(),
                c + 1
            )));
        }
    }

    let k = names.len();
    let mut values = Vec::new();
    let mut rows = 0;
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| CliError::Data(format!("{}: row {row}: {e}", path.display())))?;
        if record.len() != k {
            return Err(CliError::Data(format!(
                "{}: row {row} has {} fields, expected {k}",
                path.display(),
                record.len()
            )));
        }
        for (c, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                CliError::Data(format!(
                    "{}: non-numeric value '{cell}' at row {row}, column {}",
                    path.display(),
                    c + 1
                ))
            })?;
            values.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(CliError::Data(format!("{}: no data rows", path.display())));
    }
    TimeSeriesData::new(DMatrix::from_row_slice(rows, k, &values), names)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Inverse of [`ingest_csv`].
pub fn data_to_csv(data: &TimeSeriesData) -> String {
    let mut s = data.names().join(",");
    s.push('\n');
    for row in data.values().row_iter() {
        let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn header_line(config_hash: &str) -> String {
    format!("# schema_version={SCHEMA_VERSION} config_hash={config_hash}\n")
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let tmp = dir.join(format!(".{name}.tmp"));
    let dest = dir.join(name);
    fs::write(&tmp, contents)
        .and_then(|_| fs::rename(&tmp, &dest))
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", dest.display())))
}

/// Writes every file or, when preparing the directory fails, none.
pub fn write_bundle(dir: &Path, config_hash: &str, files: &[(&str, String)]) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
    let header = header_line(config_hash);
    for (name, body) in files {
        write_atomic(dir, name, &format!("{header}{body}"))?;
    }
    Ok(())
}

/// Reads a bundle file, checks its schema line and returns the body.
pub fn read_bundle_file(path: &Path) -> CliResult<(String, String)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let (first, body) = text.split_once('\n').unwrap_or((text.as_str(), ""));
    let mut version = None;
    let mut hash = None;
    for part in first.trim_start_matches('#').split_whitespace() {
        match part.split_once('=') {
            Some(("schema_version", v)) => version = Some(v.to_string()),
            Some(("config_hash", h)) => hash = Some(h.to_string()),
            _ => {}
        }
    }
    match version {
        Some(v) if v == SCHEMA_VERSION.to_string() => {}
        Some(v) => {
            return Err(CliError::Data(format!(
                "{}: schema version {v} is not supported (expected {SCHEMA_VERSION})",
                path.display()
            )))
        }
        None => return Err(CliError::Data(format!("{}: missing schema header", path.display()))),
    }
    Ok((hash.unwrap_or_default(), body.to_string()))
}
