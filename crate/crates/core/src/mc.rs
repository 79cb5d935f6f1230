//! Monte Carlo coverage experiments on trivariate VAR(1) designs.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bootstrap::{
    bers_prepared, fdbb_prepared, fixed_rank_prepared, lag_augmented_prepared, ma_prepared, sample_weights,
    BootstrapConfig, DgpRank, IntervalSet, Prepared, WeightsMode,
};
use crate::error::{Error, Result};
use crate::rank::{PlausibilityWeights, RankSelector, TraceLevel};
use crate::rng::{derive_seed, level, substream};
use crate::ts::{DetrendSpec, SampleConvention};
use crate::vecm::{element_queries, irf_reduced, IrfArray, IrfKind, IrfQuery, VarLevels};
use crate::wimp::wimp_combine;

const ALPHA1: [f64; 3] = [0.0, 1.0, 0.0];
const ALPHA2: [f64; 3] = [0.0, 0.0, 1.0];
const BETA1: [f64; 3] = [2.0, -1.0, 0.0];
const BETA2: [f64; 3] = [1.0, -1.0, -1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dgp {
    /// Weak adjustment, roots near one.
    Dgp1,
    /// Strong adjustment, two roots at zero.
    Dgp2,
}

impl FromStr for Dgp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dgp1" => Ok(Dgp::Dgp1),
            "dgp2" => Ok(Dgp::Dgp2),
            other => Err(Error::InvalidArgument(format!("unknown design '{other}'"))),
        }
    }
}

/// `y_t = (I + Pi) y_{t-1} + e_t` with `Pi = d1 a1 b1' + d2 a2 b2'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DgpSpec {
    pub d1: f64,
    pub d2: f64,
    pub t: usize,
}

impl DgpSpec {
    pub fn pi(&self) -> DMatrix<f64> {
        let a1 = DVector::from_row_slice(&ALPHA1);
        let a2 = DVector::from_row_slice(&ALPHA2);
        let b1 = DVector::from_row_slice(&BETA1);
        let b2 = DVector::from_row_slice(&BETA2);
        &a1 * b1.transpose() * self.d1 + &a2 * b2.transpose() * self.d2
    }

    pub fn var(&self) -> VarLevels {
        VarLevels {
            a: vec![DMatrix::identity(3, 3) + self.pi()],
        }
    }

    /// Number of nonzero adjustment scalars, which equals `rank(Pi)`.
    pub fn true_rank(&self) -> usize {
        usize::from(self.d1 != 0.0) + usize::from(self.d2 != 0.0)
    }

    /// Path driven by the given `t x 3` innovations, starting from `y_0 = 0`.
    pub fn simulate_with(&self, noise: &DMatrix<f64>) -> DMatrix<f64> {
        let a = self.var().a.remove(0);
        let mut y = DMatrix::zeros(noise.nrows(), 3);
        let mut prev = DVector::zeros(3);
        for t in 0..noise.nrows() {
            let next = &a * &prev + noise.row(t).transpose();
            y.set_row(t, &next.transpose());
            prev = next;
        }
        y
    }
}

pub fn make_dgp(variant: Dgp, t: usize) -> DgpSpec {
    let (d1, d2) = match variant {
        Dgp::Dgp1 => (0.05, 0.02),
        Dgp::Dgp2 => (1.0, 1.0),
    };
    DgpSpec { d1, d2, t }
}

/// `T x 3` path with i.i.d. standard normal innovations, no burn-in.
pub fn simulate_path<R: Rng + ?Sized>(spec: &DgpSpec, rng: &mut R) -> DMatrix<f64> {
    let noise = DMatrix::from_fn(spec.t, 3, |_, _| rng.sample::<f64, _>(StandardNormal));
    spec.simulate_with(&noise)
}

/// `Psi_j = (I + Pi)^j`.
pub fn true_irf(spec: &DgpSpec, h_max: usize) -> IrfArray {
    irf_reduced(&spec.var(), h_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Fixed rank K, i.e. the unrestricted levels VAR.
    Ols,
    TrueRank,
    /// Fixed-rank bootstrap at the rank selected on the sample.
    Aic,
    Bic,
    Trace,
    BersAic,
    BersBic,
    Ma,
    FdbbAic,
    FdbbBic,
    Wimp,
    Lavar,
}

impl Method {
    pub const ALL: [Method; 12] = [
        Method::Ols,
        Method::TrueRank,
        Method::Aic,
        Method::Bic,
        Method::Trace,
        Method::BersAic,
        Method::BersBic,
        Method::Ma,
        Method::FdbbAic,
        Method::FdbbBic,
        Method::Wimp,
        Method::Lavar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ols => "ols",
            Method::TrueRank => "true_rank",
            Method::Aic => "aic",
            Method::Bic => "bic",
            Method::Trace => "trace",
            Method::BersAic => "bers_aic",
            Method::BersBic => "bers_bic",
            Method::Ma => "ma",
            Method::FdbbAic => "fdbb_aic",
            Method::FdbbBic => "fdbb_bic",
            Method::Wimp => "wimp",
            Method::Lavar => "lavar",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dgp: DgpSpec,
    pub n_mc: usize,
    pub replications: usize,
    pub gamma: f64,
    pub h_max: usize,
    pub methods: Vec<Method>,
    pub seed: u64,
    pub p: usize,
    pub c1: f64,
    pub c2: f64,
    pub detrend: DetrendSpec,
}

impl ExperimentConfig {
    pub fn new(dgp: DgpSpec) -> Self {
        Self {
            dgp,
            n_mc: 1000,
            replications: 399,
            gamma: 0.05,
            h_max: 60,
            methods: vec![Method::Ols, Method::TrueRank, Method::Wimp],
            seed: 0,
            p: 1,
            c1: 1.0,
            c2: 0.5,
            detrend: DetrendSpec::None,
        }
    }

    /// 300 Monte Carlo draws with 199 bootstrap replications each.
    pub fn reduced(dgp: DgpSpec) -> Self {
        Self {
            n_mc: 300,
            replications: 199,
            ..Self::new(dgp)
        }
    }

    fn bootstrap(&self, replication: usize) -> BootstrapConfig {
        BootstrapConfig {
            replications: self.replications,
            gamma: self.gamma,
            seed: derive_seed(self.seed, &[replication as u64]),
            detrend: self.detrend,
            detrend_bootstrap: true,
            convention: SampleConvention::Minimal,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_mc == 0 || self.h_max == 0 {
            return Err(Error::InvalidArgument("n_mc and h_max must be positive".into()));
        }
        if self.dgp.t < 3 * self.p + 10 {
            return Err(Error::InsufficientData(format!(
                "T = {} too short for p = {}",
                self.dgp.t, self.p
            )));
        }
        self.bootstrap(0).validate()
    }
}

/// Everything one Monte Carlo draw shares across methods. Per-rank
/// fixed-rank intervals are computed at most once.
pub struct ReplicationContext {
    pub prep: Prepared,
    pub cfg: BootstrapConfig,
    pub queries: Vec<IrfQuery>,
    pub true_rank: usize,
    pub c1: f64,
    pub c2: f64,
    per_rank: Vec<OnceLock<Result<IntervalSet>>>,
}

impl ReplicationContext {
    pub fn new(
        prep: Prepared,
        cfg: BootstrapConfig,
        queries: Vec<IrfQuery>,
        true_rank: usize,
        c1: f64,
        c2: f64,
    ) -> Self {
        let per_rank = (0..=prep.nvars()).map(|_| OnceLock::new()).collect();
        Self {
            prep,
            cfg,
            queries,
            true_rank,
            c1,
            c2,
            per_rank,
        }
    }

    pub fn fixed_rank(&self, r: usize) -> Result<&IntervalSet> {
        let slot = self
            .per_rank
            .get(r)
            .ok_or_else(|| Error::InvalidArgument(format!("rank {r} exceeds K")))?;
        slot.get_or_init(|| fixed_rank_prepared(&self.prep, r, &self.queries, &self.cfg))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn weights(&self) -> Result<PlausibilityWeights> {
        sample_weights(&self.prep, self.c1, self.c2)
    }
}

/// A confidence-interval procedure evaluated inside the experiment loop.
pub trait IntervalMethod: Send + Sync {
    fn name(&self) -> String;

    /// One `(lower, upper)` pair per query of the context, in order.
    fn intervals(&self, ctx: &ReplicationContext) -> Result<Vec<(f64, f64)>>;
}

fn bounds(set: &IntervalSet) -> Vec<(f64, f64)> {
    set.entries.iter().map(|e| (e.lower, e.upper)).collect()
}

impl IntervalMethod for Method {
    fn name(&self) -> String {
        Method::name(*self).to_string()
    }

    fn intervals(&self, ctx: &ReplicationContext) -> Result<Vec<(f64, f64)>> {
        let pretest = |sel: RankSelector| -> Result<Vec<(f64, f64)>> {
            Ok(bounds(ctx.fixed_rank(sel.select(&ctx.prep.johansen)?)?))
        };
        let (prep, q, cfg) = (&ctx.prep, ctx.queries.as_slice(), &ctx.cfg);
        match self {
            Method::Ols => Ok(bounds(ctx.fixed_rank(prep.nvars())?)),
            Method::TrueRank => Ok(bounds(ctx.fixed_rank(ctx.true_rank)?)),
            Method::Aic => pretest(RankSelector::Aic),
            Method::Bic => pretest(RankSelector::Bic),
            Method::Trace => pretest(RankSelector::SequentialTrace(TraceLevel::Five)),
            Method::BersAic => Ok(bounds(&bers_prepared(
                prep,
                RankSelector::Aic,
                DgpRank::Estimated,
                q,
                cfg,
            )?)),
            Method::BersBic => Ok(bounds(&bers_prepared(
                prep,
                RankSelector::Bic,
                DgpRank::Estimated,
                q,
                cfg,
            )?)),
            Method::Ma => Ok(bounds(&ma_prepared(
                prep,
                WeightsMode::Endogenous,
                ctx.c1,
                ctx.c2,
                q,
                cfg,
            )?)),
            Method::FdbbAic => Ok(bounds(&fdbb_prepared(
                prep,
                RankSelector::Aic,
                DgpRank::Estimated,
                q,
                cfg,
            )?)),
            Method::FdbbBic => Ok(bounds(&fdbb_prepared(
                prep,
                RankSelector::Bic,
                DgpRank::Estimated,
                q,
                cfg,
            )?)),
            Method::Wimp => {
                let per_rank = (0..=prep.nvars())
                    .map(|r| ctx.fixed_rank(r).cloned())
                    .collect::<Result<Vec<_>>>()?;
                let set = wimp_combine(&per_rank, &ctx.weights()?)?;
                Ok(set
                    .entries
                    .iter()
                    .map(|e| (e.interval.lower, e.interval.upper))
                    .collect())
            }
            Method::Lavar => Ok(bounds(&lag_augmented_prepared(prep, q, cfg)?)),
        }
    }
}

/// Outcome counts for one (method, response, shock, horizon) cell.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CellStats {
    pub covered: usize,
    pub uncovered: usize,
    pub failed: usize,
    /// Sum of widths over non-failed draws.
    pub width_sum: f64,
    pub infinite_width: usize,
}

impl CellStats {
    pub fn evaluated(&self) -> usize {
        self.covered + self.uncovered
    }

    /// Share of non-failed draws whose interval covers the truth.
    pub fn coverage(&self) -> f64 {
        if self.evaluated() == 0 {
            f64::NAN
        } else {
            self.covered as f64 / self.evaluated() as f64
        }
    }

    pub fn mean_width(&self) -> f64 {
        if self.evaluated() == 0 {
            f64::NAN
        } else {
            self.width_sum / self.evaluated() as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodCoverage {
    pub method: String,
    /// Indexed by `(response * K + shock) * h_max + horizon - 1`.
    pub cells: Vec<CellStats>,
    pub failed_draws: usize,
    pub first_failure: Option<String>,
}

/// Coverage and width over horizons `1..=h_max` for every method.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageTable {
    pub k: usize,
    pub h_max: usize,
    pub n_mc: usize,
    pub methods: Vec<MethodCoverage>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HorizonSummary {
    pub method: String,
    pub horizon: usize,
    pub median_coverage: f64,
    pub min_coverage: f64,
    pub mean_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WidthRecord {
    pub method: String,
    pub horizon: usize,
    pub mean_width: f64,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

impl CoverageTable {
    fn empty(k: usize, h_max: usize, n_mc: usize, names: Vec<String>) -> Self {
        let methods = names
            .into_iter()
            .map(|method| MethodCoverage {
                method,
                cells: vec![CellStats::default(); k * k * h_max],
                failed_draws: 0,
                first_failure: None,
            })
            .collect();
        Self {
            k,
            h_max,
            n_mc,
            methods,
        }
    }

    pub fn method_index(&self, name: &str) -> Option<usize> {
        self.methods.iter().position(|m| m.method == name)
    }

    fn index(&self, response: usize, shock: usize, horizon: usize) -> usize {
        (response * self.k + shock) * self.h_max + horizon - 1
    }

    /// Cell for 0-based `response`, `shock` and horizon in `1..=h_max`.
    pub fn cell(&self, method: usize, response: usize, shock: usize, horizon: usize) -> &CellStats {
        &self.methods[method].cells[self.index(response, shock, horizon)]
    }

    fn pairs(&self, method: usize, horizon: usize) -> impl Iterator<Item = &CellStats> {
        (0..self.k * self.k).map(move |pair| self.cell(method, pair / self.k, pair % self.k, horizon))
    }

    pub fn median_coverage(&self, method: usize, horizon: usize) -> f64 {
        median(&mut self.pairs(method, horizon).map(CellStats::coverage).collect::<Vec<_>>())
    }

    pub fn min_coverage(&self, method: usize, horizon: usize) -> f64 {
        self.pairs(method, horizon)
            .map(CellStats::coverage)
            .fold(f64::INFINITY, f64::min)
    }

    /// Mean width over Monte Carlo draws and all response/shock pairs.
    pub fn mean_width(&self, method: usize, horizon: usize) -> f64 {
        self.pairs(method, horizon).map(CellStats::mean_width).sum::<f64>() / (self.k * self.k) as f64
    }

    pub fn horizon_summaries(&self) -> Vec<HorizonSummary> {
        let mut out = Vec::new();
        for (m, mc) in self.methods.iter().enumerate() {
            for h in 1..=self.h_max {
                out.push(HorizonSummary {
                    method: mc.method.clone(),
                    horizon: h,
                    median_coverage: self.median_coverage(m, h),
                    min_coverage: self.min_coverage(m, h),
                    mean_width: self.mean_width(m, h),
                });
            }
        }
        out
    }

    /// Per-cell table; floats carry 17 significant digits, indices are 1-based.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("method,response,shock,horizon,covered,uncovered,failed,coverage,mean_width\n");
        for (m, mc) in self.methods.iter().enumerate() {
            for a in 0..self.k {
                for b in 0..self.k {
                    for h in 1..=self.h_max {
                        let c = self.cell(m, a, b, h);
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{},{:.16e},{:.16e}",
                            mc.method,
                            a + 1,
                            b + 1,
                            h,
                            c.covered,
                            c.uncovered,
                            c.failed,
                            c.coverage(),
                            c.mean_width()
                        );
                    }
                }
            }
        }
        s
    }

    pub fn summary_csv(&self) -> String {
        let mut s = String::from("method,horizon,median_coverage,min_coverage,mean_width\n");
        for r in self.horizon_summaries() {
            let _ = writeln!(
                s,
                "{},{},{:.16e},{:.16e},{:.16e}",
                r.method, r.horizon, r.median_coverage, r.min_coverage, r.mean_width
            );
        }
        s
    }
}

pub fn summarize_widths(table: &CoverageTable) -> Vec<WidthRecord> {
    table
        .horizon_summaries()
        .into_iter()
        .map(|r| WidthRecord {
            method: r.method,
            horizon: r.horizon,
            mean_width: r.mean_width,
        })
        .collect()
}

type MethodOutcome = Result<Vec<(f64, f64)>>;

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<CoverageTable> {
    let methods: Vec<Box<dyn IntervalMethod>> = cfg
        .methods
        .iter()
        .map(|m| Box::new(*m) as Box<dyn IntervalMethod>)
        .collect();
    run_experiment_with(cfg, &methods)
}

/// Runs the experiment with arbitrary interval procedures. Draws are
/// simulated on independent streams keyed by `(seed, draw)`, so the table
/// does not depend on the thread count.
pub fn run_experiment_with(cfg: &ExperimentConfig, methods: &[Box<dyn IntervalMethod>]) -> Result<CoverageTable> {
    cfg.validate()?;
    if methods.is_empty() {
        return Err(Error::InvalidArgument("no methods requested".into()));
    }
    let k = 3;
    let h_max = cfg.h_max;
    let queries = element_queries(IrfKind::Reduced, k, 1..=h_max);
    let truth: Vec<f64> = {
        let irf = true_irf(&cfg.dgp, h_max);
        queries
            .iter()
            .map(|q| irf.matrices[q.horizon()][(q.response(), q.shock())])
            .collect()
    };

    let draws: Vec<Vec<MethodOutcome>> = (0..cfg.n_mc)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(cfg.seed, &[i as u64, level::PATH]);
            let path = simulate_path(&cfg.dgp, &mut rng);
            let boot = cfg.bootstrap(i);
            match Prepared::new(&path, cfg.detrend, cfg.p, boot.convention) {
                Ok(prep) => {
                    let ctx = ReplicationContext::new(prep, boot, queries.clone(), cfg.dgp.true_rank(), cfg.c1, cfg.c2);
                    methods.iter().map(|m| m.intervals(&ctx)).collect()
                }
                Err(e) => methods.iter().map(|_| Err(e.clone())).collect(),
            }
        })
        .collect();

    let mut table = CoverageTable::empty(k, h_max, cfg.n_mc, methods.iter().map(|m| m.name()).collect());
    for (i, per_method) in draws.into_iter().enumerate() {
        for (m, outcome) in per_method.into_iter().enumerate() {
            let mc = &mut table.methods[m];
            match outcome {
                Ok(intervals) if intervals.len() == queries.len() => {
                    // queries are generated in cell order
                    for ((cell, (lo, hi)), t) in mc.cells.iter_mut().zip(intervals).zip(&truth) {
                        if lo <= *t && *t <= hi {
                            cell.covered += 1;
                        } else {
                            cell.uncovered += 1;
                        }
                        let w = hi - lo;
                        if w.is_infinite() {
                            cell.infinite_width += 1;
                        }
                        cell.width_sum += w;
                    }
                }
                other => {
                    let msg = match other {
                        Err(e) => e.to_string(),
                        Ok(v) => format!("{} intervals for {} queries", v.len(), queries.len()),
                    };
                    mc.failed_draws += 1;
                    mc.first_failure.get_or_insert_with(|| format!("draw {i}: {msg}"));
                    for cell in &mut mc.cells {
                        cell.failed += 1;
                    }
                }
            }
        }
    }
    Ok(table)
}
