//! Plot-ready tables from a results bundle.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::analyze::INTERVAL_HEADER;
use crate::error::{CliError, CliResult};
use crate::io::{fmt_f64, read_bundle_file, write_atomic};

pub const COVERAGE_SUMMARY_HEADER: &str = "method,horizon,median_cp,min_cp,mean_width\n";
pub const WEIGHTS_HEADER: &str = "rank,trace,raw,normalized,relative,reference\n";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportTables {
    pub interval_table: String,
    pub coverage_summary: String,
    pub weights: String,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    match n {
        0 => f64::NAN,
        _ if n % 2 == 1 => values[n / 2],
        _ => 0.5 * (values[n / 2 - 1] + values[n / 2]),
    }
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize, line: usize) -> CliResult<T> {
    record
        .get(i)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| CliError::Data(format!("coverage.csv line {line}: bad field {}", i + 1)))
}

/// Recomputes per-horizon median/minimum coverage and mean width from the
/// raw per-cell counts.
pub fn coverage_summary(coverage_body: &str) -> CliResult<String> {
    let mut reader = csv::Reader::from_reader(coverage_body.as_bytes());
    // (method order, horizon) -> (coverage rates, widths)
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<(usize, usize), (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 3;
        let record = record.map_err(|e| CliError::Data(format!("coverage.csv line {line}: {e}")))?;
        let method = record.get(0).unwrap_or_default().to_string();
        let m = match order.iter().position(|x| *x == method) {
            Some(m) => m,
            None => {
                order.push(method);
                order.len() - 1
            }
        };
        let horizon: usize = field(&record, 3, line)?;
        let covered: usize = field(&record, 4, line)?;
        let uncovered: usize = field(&record, 5, line)?;
        let width: f64 = field(&record, 8, line)?;
        let n = covered + uncovered;
        let cp = if n == 0 { f64::NAN } else { covered as f64 / n as f64 };
        let entry = groups.entry((m, horizon)).or_default();
        entry.0.push(cp);
        entry.1.push(width);
    }
    let mut s = String::from(COVERAGE_SUMMARY_HEADER);
    for ((m, h), (mut cps, widths)) in groups {
        let min = cps.iter().copied().fold(f64::INFINITY, f64::min);
        let mean_width = widths.iter().sum::<f64>() / widths.len() as f64;
        let _ = writeln!(
            s,
            "{},{h},{},{},{}",
            order[m],
            fmt_f64(median(&mut cps)),
            fmt_f64(min),
            fmt_f64(mean_width)
        );
    }
    Ok(s)
}

pub fn build_report(bundle: &Path) -> CliResult<ReportTables> {
    let (config_hash, _) = read_bundle_file(&bundle.join("config.txt"))?;
    let read = |name: &str| -> CliResult<Option<String>> {
        let path = bundle.join(name);
        if !path.exists() {
            return Ok(None);
        }
        let (hash, body) = read_bundle_file(&path)?;
        if hash != config_hash {
            return Err(CliError::Data(format!(
                "{name} was produced by a different configuration"
            )));
        }
        Ok(Some(body))
    };
    let intervals = read("intervals.csv")?;
    let weights = read("weights.csv")?;
    let coverage = read("coverage.csv")?;
    if intervals.is_none() && coverage.is_none() {
        return Err(CliError::Data(format!(
            "{} holds neither intervals nor coverage results",
            bundle.display()
        )));
    }
    Ok(ReportTables {
        interval_table: intervals.unwrap_or_else(|| INTERVAL_HEADER.to_string()),
        coverage_summary: match coverage {
            Some(body) => coverage_summary(&body)?,
            None => COVERAGE_SUMMARY_HEADER.to_string(),
        },
        weights: weights.unwrap_or_else(|| WEIGHTS_HEADER.to_string()),
    })
}

pub fn report(bundle: &Path, out: &Path) -> CliResult<ReportTables> {
    let tables = build_report(bundle)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::Data(format!("cannot create {}: {e}", out.display())))?;
    write_atomic(out, "interval_table.csv", &tables.interval_table)?;
    write_atomic(out, "coverage_summary.csv", &tables.coverage_summary)?;
    write_atomic(out, "weights.csv", &tables.weights)?;
    Ok(tables)
}
