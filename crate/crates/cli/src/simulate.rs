//! Monte Carlo coverage experiments.

use std::fmt::Write as _;
use std::path::Path;

use wimp_core::mc::{make_dgp, run_experiment, CoverageTable, ExperimentConfig};

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::io::write_bundle;

pub const COVERAGE_HEADER: &str = "method,response,shock,horizon,covered,uncovered,failed,coverage,mean_width\n";
pub const SUMMARY_HEADER: &str = "method,horizon,median_coverage,min_coverage,mean_width\n";

pub fn simulate(settings: &Settings, out: &Path) -> CliResult<Option<CoverageTable>> {
    let cfg = settings.simulate()?;
    let c = &cfg.common;
    let experiment = ExperimentConfig {
        dgp: make_dgp(cfg.dgp, cfg.t),
        n_mc: cfg.n_mc,
        replications: c.replications,
        gamma: c.gamma,
        h_max: c.h_max,
        methods: c.methods.clone(),
        seed: c.seed,
        p: c.p,
        c1: c.c1,
        c2: c.c2,
        detrend: c.detrend,
    };

    let mut meta = String::new();
    let _ = writeln!(meta, "library_version={}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(meta, "initialization=y0 = 0, no burn-in");
    let _ = writeln!(meta, "true_rank={}", experiment.dgp.true_rank());

    // an empty method list yields header-only tables
    let table = if c.methods.is_empty() {
        None
    } else {
        Some(run_experiment(&experiment).map_err(|e| CliError::from_core("experiment", e))?)
    };
    let (coverage, summary) = match &table {
        Some(t) => {
            for m in &t.methods {
                let _ = writeln!(
                    meta,
                    "failures.{}={}{}",
                    m.method,
                    m.failed_draws,
                    m.first_failure
                        .as_deref()
                        .map(|f| format!(" first: {f}"))
                        .unwrap_or_default()
                );
            }
            (t.to_csv(), t.summary_csv())
        }
        None => (COVERAGE_HEADER.to_string(), SUMMARY_HEADER.to_string()),
    };

    write_bundle(
        out,
        &settings.hash(),
        &[
            ("coverage.csv", coverage),
            ("summary.csv", summary),
            ("metadata.txt", meta),
            ("config.txt", settings.canonical()),
        ],
    )?;
    Ok(table)
}
