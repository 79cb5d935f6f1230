//! Residual-bootstrap interval constructions.
//!
//! All methods share one pipeline: fit a bootstrap data-generating VECM on
//! the detrended sample, resample its centered residuals i.i.d., rebuild
//! level samples recursively from the first `p + 1` observed rows,
//! re-detrend, re-estimate and collect centered statistics. Intervals are
//! Hall percentile intervals `[est - q(1 - g/2), est - q(g/2)]`.
//!
//! Replication `b` always draws from the stream keyed by
//! `(seed, b, level)`, so methods that share a seed also share their
//! first-level resampling draws.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rank::{plausibility_weights, PlausibilityWeights, RankSelector};
use crate::rng::{level, substream, StreamRng};
use crate::ts::{
    build_vecm_regressors, detrend_matrix, DetrendSpec, DetrendedSeries, SampleConvention, TimeSeriesData,
};
use crate::vecm::{evaluate_queries, ols_var_levels, IrfQuery, Johansen, VecmFit};

/// Failure share at which an interval computation is abandoned.
pub const MAX_FAILURE_SHARE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapConfig {
    pub replications: usize,
    /// Nominal miscoverage; intervals have level `1 - gamma`.
    pub gamma: f64,
    pub seed: u64,
    /// Deterministics removed from the observed data.
    pub detrend: DetrendSpec,
    /// Re-estimate and remove the same deterministics on every bootstrap sample.
    pub detrend_bootstrap: bool,
    pub convention: SampleConvention,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            replications: 399,
            gamma: 0.05,
            seed: 0,
            detrend: DetrendSpec::ConstantAndTrend,
            detrend_bootstrap: true,
            convention: SampleConvention::Minimal,
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 39 {
            return Err(Error::InvalidArgument(format!(
                "at least 39 bootstrap replications required, got {}",
                self.replications
            )));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "gamma must lie in (0, 1), got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    fn bootstrap_detrend(&self) -> DetrendSpec {
        if self.detrend_bootstrap {
            self.detrend
        } else {
            DetrendSpec::None
        }
    }

    fn rng(&self, replication: usize, level: u64) -> StreamRng {
        substream(self.seed, &[replication as u64, level])
    }
}

/// Rank of the bootstrap data-generating process for rank-selecting methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DgpRank {
    #[default]
    Estimated,
    FullK,
}

/// Whether model-averaging weights are recomputed on each bootstrap sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WeightsMode {
    Fixed,
    #[default]
    Endogenous,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Census {
    pub successes: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl Census {
    pub fn total(&self) -> usize {
        self.successes + self.failures
    }

    fn record(&mut self, replication: usize, err: &Error) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(format!("replication {replication}: {err}"));
        }
    }

    fn check(&self) -> Result<()> {
        let total = self.total();
        if total > 0 && self.failures as f64 >= MAX_FAILURE_SHARE * total as f64 {
            return Err(Error::TooManyFailures {
                failed: self.failures,
                total,
                first: self.first_failure.clone().unwrap_or_default(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalEntry {
    pub query: IrfQuery,
    pub lower: f64,
    pub upper: f64,
    pub point: f64,
}

impl IntervalEntry {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Intervals for a list of queries from one method on one data set.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    pub method: String,
    /// Rank the intervals are conditioned on (fixed, selected or reference rank).
    pub rank: Option<usize>,
    pub gamma: f64,
    pub entries: Vec<IntervalEntry>,
    pub census: Census,
    /// Second-level census for the fast double bootstrap.
    pub second_census: Option<Census>,
    /// How often each rank was selected across bootstrap samples.
    pub rank_counts: Option<Vec<usize>>,
    /// Number of VECM estimations performed.
    pub fits: usize,
}

impl IntervalSet {
    pub fn get(&self, query: &IrfQuery) -> Option<&IntervalEntry> {
        self.entries.iter().find(|e| e.query == *query)
    }
}

/// `q*(g)`: the order statistic at position `ceil((B + 1) g)`, clamped to
/// `[1, B]`, of the ascending sort.
pub fn hall_quantile(stats: &[f64], gamma_point: f64) -> Result<f64> {
    if stats.is_empty() {
        return Err(Error::InvalidArgument("no bootstrap statistics".into()));
    }
    if stats.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument("bootstrap statistics must be finite".into()));
    }
    let mut sorted = stats.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[order_index(sorted.len(), gamma_point)])
}

/// 0-based index of `q*(gamma_point)` among `b` sorted values.
pub fn order_index(b: usize, gamma_point: f64) -> usize {
    let x = (b + 1) as f64 * gamma_point;
    // (B + 1) g is an exact integer for the usual choices; absorb rounding.
    let pos = (x - 1e-9 * x.abs().max(1.0)).ceil();
    (pos.max(1.0) as usize).min(b) - 1
}

/// Hall interval around `estimate` from unsorted centered statistics.
pub fn hall_interval(estimate: f64, centered: &mut [f64], gamma: f64) -> (f64, f64) {
    centered.sort_by(f64::total_cmp);
    let b = centered.len();
    let lo = centered[order_index(b, gamma / 2.0)];
    let hi = centered[order_index(b, 1.0 - gamma / 2.0)];
    (estimate - hi, estimate - lo)
}

/// Column-centered residual rows to resample from.
#[derive(Debug, Clone)]
pub struct ResidualPool {
    rows: Vec<Vec<f64>>,
}

impl ResidualPool {
    pub fn new(residuals: &DMatrix<f64>) -> Self {
        let n = residuals.nrows();
        let means: Vec<f64> = residuals.column_iter().map(|c| c.sum() / n as f64).collect();
        let rows = residuals
            .row_iter()
            .map(|r| r.iter().zip(&means).map(|(v, m)| v - m).collect())
            .collect();
        Self { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Draws `count` rows uniformly with replacement.
    pub fn draw<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> DMatrix<f64> {
        let k = self.rows.first().map_or(0, Vec::len);
        let mut out = DMatrix::zeros(count, k);
        for t in 0..count {
            let row = &self.rows[rng.random_range(0..self.rows.len())];
            for (c, v) in row.iter().enumerate() {
                out[(t, c)] = *v;
            }
        }
        out
    }
}

/// i.i.d. draws of `count` rows from the column-centered residuals.
pub fn resample_residuals<R: Rng + ?Sized>(residuals: &DMatrix<f64>, count: usize, rng: &mut R) -> DMatrix<f64> {
    ResidualPool::new(residuals).draw(count, rng)
}

/// Builds `y*_t = y*_{t-1} + Pi y*_{t-1} + sum_j Gamma_j dy*_{t-j} + u*_t`
/// for `t = p + 2..T`, starting from the `p + 1` rows of `initial`.
///
/// `errors` supplies `u*_t` for `t = p + 2..T`, so the result has
/// `p + 1 + errors.nrows()` rows.
pub fn rebuild_sample(fit: &VecmFit, errors: &DMatrix<f64>, initial: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let k = fit.nvars();
    let p = fit.p;
    if initial.nrows() != p + 1 || initial.ncols() != k || errors.ncols() != k {
        return Err(Error::InvalidArgument(format!(
            "rebuild needs {} initial rows and {k} columns",
            p + 1
        )));
    }
    let total = p + 1 + errors.nrows();
    // row-major working buffer
    let mut y = vec![0.0; total * k];
    for t in 0..=p {
        for c in 0..k {
            y[t * k + c] = initial[(t, c)];
        }
    }
    let mut next = vec![0.0; k];
    for t in p + 1..total {
        let prev = (t - 1) * k;
        for i in 0..k {
            let mut v = y[prev + i] + errors[(t - p - 1, i)];
            for c in 0..k {
                v += fit.pi[(i, c)] * y[prev + c];
            }
            for (j, gamma) in fit.gammas.iter().enumerate() {
                let now = (t - 1 - j) * k;
                let before = (t - 2 - j) * k;
                for c in 0..k {
                    v += gamma[(i, c)] * (y[now + c] - y[before + c]);
                }
            }
            next[i] = v;
        }
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Explosive { row: t });
        }
        y[t * k..(t + 1) * k].copy_from_slice(&next);
    }
    Ok(DMatrix::from_row_slice(total, k, &y))
}

/// A detrended sample with its solved reduced-rank eigenproblem.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub detrended: DetrendedSeries,
    pub johansen: Johansen,
}

impl Prepared {
    pub fn new(levels: &DMatrix<f64>, detrend: DetrendSpec, p: usize, convention: SampleConvention) -> Result<Self> {
        let detrended = detrend_matrix(levels, detrend)?;
        let regs = build_vecm_regressors(&detrended.tilde, p, convention)?;
        let johansen = Johansen::new(regs)?;
        Ok(Self { detrended, johansen })
    }

    pub fn from_data(data: &TimeSeriesData, p: usize, cfg: &BootstrapConfig) -> Result<Self> {
        data.ensure_estimable(p)?;
        Self::new(data.values(), cfg.detrend, p, cfg.convention)
    }

    pub fn p(&self) -> usize {
        self.johansen.regressors().p
    }

    pub fn nvars(&self) -> usize {
        self.johansen.nvars()
    }

    pub fn nobs(&self) -> usize {
        self.detrended.tilde.nrows()
    }

    /// Observed detrended rows `t = 1..p + 1` used to start the recursion.
    pub fn initial(&self) -> DMatrix<f64> {
        self.detrended.tilde.rows(0, self.p() + 1).into_owned()
    }

    fn simulate(&self, fit: &VecmFit, pool: &ResidualPool, rng: &mut StreamRng) -> Result<DMatrix<f64>> {
        let errors = pool.draw(self.nobs() - self.p() - 1, rng);
        rebuild_sample(fit, &errors, &self.initial())
    }

    fn reprepare(&self, sample: &DMatrix<f64>, cfg: &BootstrapConfig) -> Result<Prepared> {
        Prepared::new(sample, cfg.bootstrap_detrend(), self.p(), cfg.convention)
    }
}

fn evaluate_fit(fit: &VecmFit, queries: &[IrfQuery]) -> Result<Vec<f64>> {
    evaluate_queries(&fit.to_var(), &fit.sigma_u, queries)
}

fn check_inputs(prep: &Prepared, queries: &[IrfQuery], cfg: &BootstrapConfig) -> Result<()> {
    cfg.validate()?;
    if queries.is_empty() {
        return Err(Error::InvalidArgument("no impulse-response queries".into()));
    }
    for q in queries {
        q.validate(prep.nvars())?;
    }
    Ok(())
}

/// Runs `B` replications in parallel; results keep replication order.
fn replicate<T, F>(cfg: &BootstrapConfig, work: F) -> (Vec<(usize, T)>, Census)
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let results: Vec<Result<T>> = (0..cfg.replications).into_par_iter().map(&work).collect();
    let mut census = Census::default();
    let mut ok = Vec::with_capacity(results.len());
    for (b, res) in results.into_iter().enumerate() {
        match res {
            Ok(v) => {
                census.successes += 1;
                ok.push((b, v));
            }
            Err(e) => census.record(b, &e),
        }
    }
    (ok, census)
}

/// Hall intervals per query from per-replication centered statistics.
fn hall_entries(queries: &[IrfQuery], points: &[f64], centered: &[Vec<f64>], gamma: f64) -> Vec<IntervalEntry> {
    let mut column = vec![0.0; centered.len()];
    queries
        .iter()
        .enumerate()
        .map(|(qi, q)| {
            for (slot, stats) in column.iter_mut().zip(centered) {
                *slot = stats[qi];
            }
            let (lower, upper) = hall_interval(points[qi], &mut column, gamma);
            IntervalEntry {
                query: *q,
                lower,
                upper,
                point: points[qi],
            }
        })
        .collect()
}

fn subtract(a: Vec<f64>, b: &[f64]) -> Vec<f64> {
    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Fixed-rank bootstrap interval: the data-generating process and every
/// re-estimation impose rank `r`.
pub fn fixed_rank_interval(
    data: &TimeSeriesData,
    p: usize,
    r: usize,
    queries: &[IrfQuery],
    cfg: &BootstrapConfig,
) -> Result<IntervalSet> {
    let prep = Prepared::from_data(data, p, cfg)?;
    fixed_rank_prepared(&prep, r, queries, cfg)
}

pub fn fixed_rank_prepared(
    prep: &Prepared,
    r: usize,
    queries: &[IrfQuery],
    cfg: &BootstrapConfig,
) -> Result<IntervalSet> {
    check_inputs(prep, queries, cfg)?;
    let fit = prep.johansen.fit(r)?;
    let point = evaluate_fit(&fit, queries)?;
    let pool = ResidualPool::new(&fit.residuals);

    let (draws, census) = replicate(cfg, |b| {
        let mut rng = cfg.rng(b, level::FIRST);
        let sample = prep.simulate(&fit, &pool, &mut rng)?;
        let boot = prep.reprepare(&sample, cfg)?;
        let zeta = evaluate_fit(&boot.johansen.fit(r)?, queries)?;
        Ok(subtract(zeta, &point))
    });
    census.check()?;
    let centered: Vec<Vec<f64>> = draws.into_iter().map(|(_, v)| v).collect();

    Ok(IntervalSet {
        method: "fixed_rank".into(),
        rank: Some(r),
        gamma: cfg.gamma,
        entries: hall_entries(queries, &point, &centered, cfg.gamma),
        fits: 1 + census.successes,
        census,
        second_census: None,
        rank_counts: None,
    })
}

/// Bootstrap with endogenous rank selection: every bootstrap sample
/// re-selects its rank before re-estimation.
pub fn bers_interval(
    data: &TimeSeriesData,
    p: usize,
    selector: RankSelector,
    dgp_rank: DgpRank,
    queries: &[IrfQuery],
    cfg: &BootstrapConfig,
) -> Result<IntervalSet> {
    let prep = Prepared::from_data(data, p, cfg)?;
    bers_prepared(&prep, selector, dgp_rank, queries, cfg)
}

fn dgp_rank_for(prep: &Prepared, r_hat: usize, dgp_rank: DgpRank) -> usize {
    match dgp_rank {
        DgpRank::Estimated => r_hat,
        DgpRank::FullK => prep.nvars(),
    }
}

pub fn bers_prepared(
    prep: &Prepared,
    selector: RankSelector,
    dgp_rank: DgpRank,
    queries: &[IrfQuery],
    cfg: &BootstrapConfig,
) -> Result<IntervalSet> {
    check_inputs(prep, queries, cfg)?;
    let k = prep.nvars();
    let r_hat = selector.select(&prep.johansen)?;
    let point = evaluate_fit(&prep.johansen.fit(r_hat)?, queries)?;
    let r_dgp = dgp_rank_for(prep, r_hat, dgp_rank);
    let dgp = prep.johansen.fit(r_dgp)?;
    // statistics are centered on the bootstrap population value
    let center = if r_dgp == r_hat {
        point.clone()
    } else {
        evaluate_fit(&dgp, queries)?
    };
    let pool = ResidualPool::new(&dgp.residuals);

    let (draws, census) = replicate(cfg, |b| {
        let mut rng = cfg.rng(b, level::FIRST);
        let sample = prep.simulate(&dgp, &pool, &mut rng)?;
        let boot = prep.reprepare(&sample, cfg)?;
        let r_star = selector.select(&boot.johansen)?;
        let zeta = evaluate_fit(&boot.johansen.fit(r_star)?, queries)?;
        Ok((r_star, subtract(zeta, &center)))
    });
    census.check()?;

    let mut rank_counts = vec![0; k + 1];
    let mut centered = Vec::with_capacity(draws.len());
    for (_, (r_star, stats)) in draws {
        rank_counts[r_star] += 1;
        centered.push(stats);
    }

    Ok(IntervalSet {
        method: format!("bers_{}", selector.label()),
        rank: Some(r_hat),
        gamma: cfg.gamma,
        entries: hall_entries(queries, &point, &centered, cfg.gamma),
        fits: 1 + census.successes,
        census,
        second_census: None,
        rank_counts: Some(rank_counts),
    })
}

/// `sum_r W(r) zeta(r)` for per-rank values of one query.
pub fn model_average(per_rank: &[f64], weights: &[f64]) -> f64 {
    per_rank.iter().zip(weights).map(|(z, w)| z * w).sum()
}

/// Weighted sum of per-rank query values; ranks with zero weight are skipped.
fn averaged_queries(est: &Johansen, weights: &[f64], queries: &[IrfQuery]) -> Result<Vec<f64>> {
    let mut out = vec![0.0; queries.len()];
    for (r, w) in weights.iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        let zeta = evaluate_fit(&est.fit(r)?, queries)?;
        for (o, z) in out.iter_mut().zip(zeta) {
            *o += w * z;
        }
    }
    Ok(out)
}

/// Model-averaging interval. The bootstrap process uses the reference
/// (most plausible) rank; the statistic is the weighted average over all
/// ranks, with weights either frozen or recomputed per bootstrap sample.
pub fn ma_interval(
    data: &TimeSeriesData,
    p: usize,
    weights_mode: WeightsMode,
    c1: f64,
    c2: f64,
    queries: &[IrfQuery],
    cfg: &BootstrapConfig,
) -> Result<IntervalSet> {
    let prep = Prepared::from_data(data, p, cfg)?;
    ma_prepared(&prep, weights_mode, c1, c2, queries, cfg)
}

pub fn sample_weights(prep: &Prepared, c1: f64, c2: f64) -> Result<PlausibilityWeights> {
    plausibility_weights(&prep.johansen.trace_statistics(), prep.johansen.t_eff(), c1, c2)
}

pub fn ma_prepared(
    prep: &Prepared,
    weights_mode: WeightsMode,
    c1: f64,
    c2: f64,
    queries: &[IrfQuery],
    cfg: &BootstrapConfig,
) -> Result<IntervalSet> {
    check_inputs(prep, queries, cfg)?;
    let weights = sample_weights(prep, c1, c2)?;
    let point = averaged_queries(&prep.johansen, &weights.normalized, queries)?;
    let reference = weights.reference_rank;
    let dgp = prep.johansen.fit(reference)?;
    let pool = ResidualPool::new(&dgp.residuals);

    let (draws, census) = replicate(cfg, |b| {
        let mut rng = cfg.rng(b, level::FIRST);
        let sample = prep.simulate(&dgp, &pool, &mut rng)?;
        let boot = prep.reprepare(&sample, cfg)?;
        let w = match weights_mode {
            WeightsMode::Fixed => weights.normalized.clone(),
            WeightsMode::Endogenous => sample_weights(&boot, c1, c2)?.normalized,
        };
        Ok(subtract(averaged_queries(&boot.johansen, &w, queries)?, &point))
    });
    census.check()?;
    let centered: Vec<Vec<f64>> = draws.into_iter().map(|(_, v)| v).collect();

    Ok(IntervalSet {
        method: match weights_mode {
            WeightsMode::Fixed => "ma_fixed".into(),
            WeightsMode::Endogenous => "ma".into(),
        },
        rank: Some(reference),
        gamma: cfg.gamma,
        entries: hall_entries(queries, &point, &centered, cfg.gamma),
        fits: 1 + census.successes,
        census,
        second_census: None,
        rank_counts: None,
    })
}

/// Fast-double-bootstrap bagging interval: one second-level sample per
/// first-level sample, interval centered on the bagged first-level mean.
pub fn fdbb_interval(
    data: &TimeSeriesData,
    p: usize,
    selector: RankSelector,
    queries: &[IrfQuery],
    cfg: &BootstrapConfig,
) -> Result<IntervalSet> {
    let prep = Prepared::from_data(data, p, cfg)?;
    fdbb_prepared(&prep, selector, DgpRank::Estimated, queries, cfg)
}

struct FdbDraw {
    rank: usize,
    first: Vec<f64>,
    second: Result<Vec<f64>>,
}

pub fn fdbb_prepared(
    prep: &Prepared,
    selector: RankSelector,
    dgp_rank: DgpRank,
    queries: &[IrfQuery],
    cfg: &BootstrapConfig,
) -> Result<IntervalSet> {
    check_inputs(prep, queries, cfg)?;
    let k = prep.nvars();
    let r_hat = selector.select(&prep.johansen)?;
    let dgp = prep.johansen.fit(dgp_rank_for(prep, r_hat, dgp_rank))?;
    let pool = ResidualPool::new(&dgp.residuals);

    let (draws, census) = replicate(cfg, |b| {
        let mut rng = cfg.rng(b, level::FIRST);
        let sample = prep.simulate(&dgp, &pool, &mut rng)?;
        let boot = prep.reprepare(&sample, cfg)?;
        let r_star = selector.select(&boot.johansen)?;
        let fit_star = boot.johansen.fit(r_star)?;
        let first = evaluate_fit(&fit_star, queries)?;

        let second = (|| {
            let mut rng = cfg.rng(b, level::SECOND);
            let pool_star = ResidualPool::new(&fit_star.residuals);
            let sample2 = boot.simulate(&fit_star, &pool_star, &mut rng)?;
            let boot2 = boot.reprepare(&sample2, cfg)?;
            let r_2 = selector.select(&boot2.johansen)?;
            evaluate_fit(&boot2.johansen.fit(r_2)?, queries)
        })();
        Ok(FdbDraw {
            rank: r_star,
            first,
            second,
        })
    });
    census.check()?;

    let mut second_census = Census::default();
    let mut rank_counts = vec![0; k + 1];
    let mut bag = vec![0.0; queries.len()];
    let mut centered = Vec::with_capacity(draws.len());
    for (b, draw) in &draws {
        rank_counts[draw.rank] += 1;
        for (acc, z) in bag.iter_mut().zip(&draw.first) {
            *acc += z;
        }
        match &draw.second {
            Ok(z2) => {
                second_census.successes += 1;
                centered.push(z2.iter().zip(&draw.first).map(|(a, b)| a - b).collect::<Vec<_>>());
            }
            Err(e) => second_census.record(*b, e),
        }
    }
    second_census.check()?;
    for v in &mut bag {
        *v /= draws.len() as f64;
    }

    Ok(IntervalSet {
        method: format!("fdbb_{}", selector.label()),
        rank: Some(r_hat),
        gamma: cfg.gamma,
        entries: hall_entries(queries, &bag, &centered, cfg.gamma),
        fits: 1 + census.successes + second_census.successes,
        census,
        second_census: Some(second_census),
        rank_counts: Some(rank_counts),
    })
}

/// Lag-augmented levels interval: bootstrap samples come from the levels
/// VAR(p); estimates come from a levels VAR(p + 1) whose first `p` lag
/// matrices define the responses.
pub fn lag_augmented_interval(
    data: &TimeSeriesData,
    p: usize,
    queries: &[IrfQuery],
    cfg: &BootstrapConfig,
) -> Result<IntervalSet> {
    let prep = Prepared::from_data(data, p, cfg)?;
    lag_augmented_prepared(&prep, queries, cfg)
}

fn augmented_queries(tilde: &DMatrix<f64>, p: usize, queries: &[IrfQuery]) -> Result<Vec<f64>> {
    let aug = ols_var_levels(tilde, p + 1)?;
    evaluate_queries(&aug.var.truncate(p), &aug.sigma_u, queries)
}

pub fn lag_augmented_prepared(prep: &Prepared, queries: &[IrfQuery], cfg: &BootstrapConfig) -> Result<IntervalSet> {
    check_inputs(prep, queries, cfg)?;
    let p = prep.p();
    // unrestricted rank-K VECM == OLS levels VAR(p)
    let dgp = prep.johansen.fit(prep.nvars())?;
    let pool = ResidualPool::new(&dgp.residuals);
    let point = augmented_queries(&prep.detrended.tilde, p, queries)?;

    let (draws, census) = replicate(cfg, |b| {
        let mut rng = cfg.rng(b, level::FIRST);
        let sample = prep.simulate(&dgp, &pool, &mut rng)?;
        let tilde = detrend_matrix(&sample, cfg.bootstrap_detrend())?.tilde;
        Ok(subtract(augmented_queries(&tilde, p, queries)?, &point))
    });
    census.check()?;
    let centered: Vec<Vec<f64>> = draws.into_iter().map(|(_, v)| v).collect();

    Ok(IntervalSet {
        method: "lag_augmented".into(),
        rank: None,
        gamma: cfg.gamma,
        entries: hall_entries(queries, &point, &centered, cfg.gamma),
        fits: 1 + census.successes,
        census,
        second_census: None,
        rank_counts: None,
    })
}
