//! Interval analysis of an observed data set.

use std::fmt::Write as _;
use std::path::Path;

use wimp_core::bootstrap::{
    bers_prepared, fdbb_prepared, lag_augmented_prepared, ma_prepared, BootstrapConfig, DgpRank, IntervalSet, Prepared,
    WeightsMode,
};
use wimp_core::mc::Method;
use wimp_core::rank::RankSelector;
use wimp_core::ts::TimeSeriesData;
use wimp_core::vecm::{element_queries, IrfQuery};
use wimp_core::wimp::wimp_prepared;

use crate::config::{AnalyzeConfig, Settings};
use crate::error::{CliError, CliResult};
use crate::io::{fmt_f64, ingest_csv, write_bundle};

pub const INTERVAL_HEADER: &str = "method,rank,response,shock,horizon,lower,upper,point\n";

/// Everything an analysis produces before it is written.
#[derive(Debug, Clone)]
pub struct AnalysisResults {
    pub data: TimeSeriesData,
    pub per_rank: Vec<IntervalSet>,
    pub weights: wimp_core::rank::PlausibilityWeights,
    /// WIMP first, then the requested methods in order.
    pub methods: Vec<IntervalSet>,
    pub t_eff: usize,
}

fn selector(method: Method, cfg: &AnalyzeConfig) -> RankSelector {
    match method {
        Method::Aic | Method::BersAic | Method::FdbbAic => RankSelector::Aic,
        Method::Bic | Method::BersBic | Method::FdbbBic => RankSelector::Bic,
        _ => RankSelector::SequentialTrace(cfg.trace_level),
    }
}

pub fn run_analysis(cfg: &AnalyzeConfig, data: TimeSeriesData) -> CliResult<AnalysisResults> {
    let c = &cfg.common;
    let boot = BootstrapConfig {
        replications: c.replications,
        gamma: c.gamma,
        seed: c.seed,
        detrend: c.detrend,
        detrend_bootstrap: true,
        convention: cfg.convention,
    };
    let k = data.nvars();
    let queries: Vec<IrfQuery> = element_queries(cfg.irf, k, 0..=c.h_max);
    let est = |e| CliError::from_core("estimation", e);
    data.ensure_estimable(c.p)
        .map_err(|e| CliError::from_core("input", e))?;
    let prep = Prepared::from_data(&data, c.p, &boot).map_err(est)?;

    let analysis = wimp_prepared(&prep, &queries, &boot, c.c1, c.c2).map_err(est)?;
    let mut methods = vec![analysis.wimp.to_interval_set()];
    for &m in &c.methods {
        let set = match m {
            Method::Wimp => continue,
            Method::TrueRank => {
                return Err(CliError::Config(
                    "true_rank needs a known data-generating process".into(),
                ))
            }
            Method::Ols => analysis.per_rank[k].clone(),
            Method::Aic | Method::Bic | Method::Trace => {
                let r = selector(m, cfg).select(&prep.johansen).map_err(est)?;
                analysis.per_rank[r].clone()
            }
            Method::BersAic | Method::BersBic => {
                bers_prepared(&prep, selector(m, cfg), DgpRank::Estimated, &queries, &boot).map_err(est)?
            }
            Method::FdbbAic | Method::FdbbBic => {
                fdbb_prepared(&prep, selector(m, cfg), DgpRank::Estimated, &queries, &boot).map_err(est)?
            }
            Method::Ma => ma_prepared(&prep, WeightsMode::Endogenous, c.c1, c.c2, &queries, &boot).map_err(est)?,
            Method::Lavar => lag_augmented_prepared(&prep, &queries, &boot).map_err(est)?,
        };
        methods.push(IntervalSet {
            method: m.name().to_string(),
            ..set
        });
    }

    Ok(AnalysisResults {
        t_eff: prep.johansen.t_eff(),
        data,
        per_rank: analysis.per_rank,
        weights: analysis.weights,
        methods,
    })
}

fn interval_rows(out: &mut String, method: &str, set: &IntervalSet) {
    let rank = set.rank.map(|r| r.to_string()).unwrap_or_default();
    for e in &set.entries {
        let _ = writeln!(
            out,
            "{method},{rank},{},{},{},{},{},{}",
            e.query.response() + 1,
            e.query.shock() + 1,
            e.query.horizon(),
            fmt_f64(e.lower),
            fmt_f64(e.upper),
            fmt_f64(e.point)
        );
    }
}

pub fn intervals_csv(results: &AnalysisResults) -> String {
    let mut s = String::from(INTERVAL_HEADER);
    for set in &results.per_rank {
        interval_rows(&mut s, "rank", set);
    }
    for set in &results.methods {
        interval_rows(&mut s, &set.method, set);
    }
    s
}

pub fn weights_csv(results: &AnalysisResults) -> String {
    let w = &results.weights;
    let mut s = String::from("rank,trace,raw,normalized,relative,reference\n");
    for r in 0..w.nranks() {
        let _ = writeln!(
            s,
            "{r},{},{},{},{},{}",
            fmt_f64(w.trace[r]),
            fmt_f64(w.raw[r]),
            fmt_f64(w.normalized[r]),
            fmt_f64(w.relative(r, w.reference_rank)),
            u8::from(r == w.reference_rank)
        );
    }
    s
}

fn metadata(results: &AnalysisResults, cfg: &AnalyzeConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "library_version={}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "variables={}", results.data.names().join(";"));
    let _ = writeln!(s, "nobs={}", results.data.nobs());
    let _ = writeln!(s, "t_eff={}", results.t_eff);
    let _ = writeln!(s, "seed={}", cfg.common.seed);
    let _ = writeln!(s, "irf={}", cfg.irf.as_str());
    let _ = writeln!(s, "reference_rank={}", results.weights.reference_rank);
    let _ = writeln!(s, "wimp_point=model-averaged companion estimate with the WIMP weights");
    for set in results.per_rank.iter().chain(&results.methods) {
        let name = match set.rank {
            Some(r) if set.method == "fixed_rank" => format!("rank{r}"),
            _ => set.method.clone(),
        };
        let _ = write!(
            s,
            "census.{name}=successes:{} failures:{}",
            set.census.successes, set.census.failures
        );
        if let Some(second) = &set.second_census {
            let _ = write!(
                s,
                " second_successes:{} second_failures:{}",
                second.successes, second.failures
            );
        }
        if let Some(counts) = &set.rank_counts {
            let counts: Vec<String> = counts.iter().map(usize::to_string).collect();
            let _ = write!(s, " rank_counts:{}", counts.join(";"));
        }
        s.push('\n');
    }
    s
}

/// Reads the input, runs the analysis and writes the bundle to `out`.
pub fn analyze(settings: &Settings, out: &Path) -> CliResult<AnalysisResults> {
    let cfg = settings.analyze()?;
    let data = ingest_csv(&cfg.input)?;
    let results = run_analysis(&cfg, data)?;
    write_bundle(
        out,
        &settings.hash(),
        &[
            ("intervals.csv", intervals_csv(&results)),
            ("weights.csv", weights_csv(&results)),
            ("metadata.txt", metadata(&results, &cfg)),
            ("config.txt", settings.canonical()),
        ],
    )?;
    Ok(results)
}
