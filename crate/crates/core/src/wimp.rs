//! Weighted inference by model plausibility.
//!
//! The interval for the most plausible rank `R` is stretched toward every
//! rival rank's bounds in proportion to that rank's relative plausibility
//! `X(r, R) = W(r) / W(R)`:
//!
//! ```text
//! L = min_r { L(R) - X(r, R) * max(L(R) - L(r), 0) }
//! U = max_r { U(R) + X(r, R) * max(U(r) - U(R), 0) }
//! ```

use crate::bootstrap::{fixed_rank_prepared, model_average, BootstrapConfig, IntervalSet, Prepared};
use crate::error::{Error, Result};
use crate::rank::PlausibilityWeights;
use crate::ts::TimeSeriesData;
use crate::vecm::IrfQuery;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankContribution {
    pub rank: usize,
    /// Relative plausibility `X(r, R)` after any transform.
    pub x: f64,
    pub lower_extension: f64,
    pub upper_extension: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WimpInterval {
    pub lower: f64,
    pub upper: f64,
    pub reference_rank: usize,
    pub contributions: Vec<RankContribution>,
    pub gamma: f64,
}

/// Combines one query's per-rank intervals `bounds[r] = (L(r), U(r))`.
pub fn wimp_bounds(bounds: &[(f64, f64)], weights: &PlausibilityWeights, gamma: f64) -> Result<WimpInterval> {
    wimp_bounds_with(bounds, weights, gamma, |x| x)
}

/// As [`wimp_bounds`], with `X(r, R)` passed through `transform`. The
/// transform should be increasing and map `[0, 1]` into `[0, 1]`.
pub fn wimp_bounds_with<F>(
    bounds: &[(f64, f64)],
    weights: &PlausibilityWeights,
    gamma: f64,
    transform: F,
) -> Result<WimpInterval>
where
    F: Fn(f64) -> f64,
{
    if bounds.len() != weights.nranks() {
        return Err(Error::InvalidArgument(format!(
            "need intervals for all {} ranks, got {}",
            weights.nranks(),
            bounds.len()
        )));
    }
    if let Some(r) = bounds.iter().position(|(l, u)| l.is_nan() || u.is_nan() || l > u) {
        return Err(Error::InvalidArgument(format!(
            "interval for rank {r} is empty or not a number"
        )));
    }
    let reference = weights.reference_rank;
    let (l_ref, u_ref) = bounds[reference];
    let mut lower = l_ref;
    let mut upper = u_ref;
    let mut contributions = Vec::with_capacity(bounds.len());
    for (rank, &(l, u)) in bounds.iter().enumerate() {
        let x = transform(weights.relative(rank, reference));
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidArgument(format!(
                "relative plausibility {x} for rank {rank} outside [0, 1]"
            )));
        }
        let lower_extension = x * (l_ref - l).max(0.0);
        let upper_extension = x * (u - u_ref).max(0.0);
        lower = lower.min(l_ref - lower_extension);
        upper = upper.max(u_ref + upper_extension);
        contributions.push(RankContribution {
            rank,
            x,
            lower_extension,
            upper_extension,
        });
    }
    Ok(WimpInterval {
        lower,
        upper,
        reference_rank: reference,
        contributions,
        gamma,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WimpEntry {
    pub query: IrfQuery,
    pub interval: WimpInterval,
    /// Model-averaged estimate with the same weights. WIMP has no point
    /// estimate of its own; this is only a suggested companion.
    pub ma_point: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WimpSet {
    pub gamma: f64,
    pub reference_rank: usize,
    pub entries: Vec<WimpEntry>,
}

impl WimpSet {
    /// Flattens into the common interval-set shape (point = MA companion).
    pub fn to_interval_set(&self) -> IntervalSet {
        IntervalSet {
            method: "wimp".into(),
            rank: Some(self.reference_rank),
            gamma: self.gamma,
            entries: self
                .entries
                .iter()
                .map(|e| crate::bootstrap::IntervalEntry {
                    query: e.query,
                    lower: e.interval.lower,
                    upper: e.interval.upper,
                    point: e.ma_point,
                })
                .collect(),
            census: Default::default(),
            second_census: None,
            rank_counts: None,
            fits: 0,
        }
    }
}

/// Combines per-rank interval sets (index `r` holds rank `r`) query by query.
pub fn wimp_combine(per_rank: &[IntervalSet], weights: &PlausibilityWeights) -> Result<WimpSet> {
    wimp_combine_with(per_rank, weights, |x| x)
}

pub fn wimp_combine_with<F>(per_rank: &[IntervalSet], weights: &PlausibilityWeights, transform: F) -> Result<WimpSet>
where
    F: Fn(f64) -> f64,
{
    if per_rank.len() != weights.nranks() {
        return Err(Error::InvalidArgument(format!(
            "need interval sets for all {} ranks, got {}",
            weights.nranks(),
            per_rank.len()
        )));
    }
    for (r, set) in per_rank.iter().enumerate() {
        if set.rank != Some(r) {
            return Err(Error::InvalidArgument(format!(
                "interval set {r} is not conditioned on rank {r}"
            )));
        }
    }
    let first = &per_rank[0];
    for set in &per_rank[1..] {
        if set.gamma != first.gamma
            || set.entries.len() != first.entries.len()
            || set.entries.iter().zip(&first.entries).any(|(a, b)| a.query != b.query)
        {
            return Err(Error::InvalidArgument(
                "per-rank intervals disagree on gamma or queries".into(),
            ));
        }
    }

    let mut bounds = vec![(0.0, 0.0); per_rank.len()];
    let mut points = vec![0.0; per_rank.len()];
    let entries = first
        .entries
        .iter()
        .enumerate()
        .map(|(qi, e)| {
            for (r, set) in per_rank.iter().enumerate() {
                let entry = &set.entries[qi];
                bounds[r] = (entry.lower, entry.upper);
                points[r] = entry.point;
            }
            Ok(WimpEntry {
                query: e.query,
                interval: wimp_bounds_with(&bounds, weights, first.gamma, &transform)?,
                ma_point: model_average(&points, &weights.normalized),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WimpSet {
        gamma: first.gamma,
        reference_rank: weights.reference_rank,
        entries,
    })
}

/// Outcome of the four prudence checks for one combined interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrudenceReport {
    /// The reference interval lies inside the combined interval.
    pub covers_reference: bool,
    /// Among equally plausible ranks, a farther bound extends at least as far.
    pub distance_monotone: bool,
    /// Among equally distant bounds, a more plausible rank extends at least as far.
    pub plausibility_monotone: bool,
    /// The combined interval lies inside the hull of all per-rank intervals.
    pub within_hull: bool,
}

impl PrudenceReport {
    pub fn all(&self) -> bool {
        self.covers_reference && self.distance_monotone && self.plausibility_monotone && self.within_hull
    }
}

pub fn check_prudence(bounds: &[(f64, f64)], result: &WimpInterval) -> PrudenceReport {
    let (l_ref, u_ref) = bounds[result.reference_rank];
    let hull_lo = bounds.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
    let hull_hi = bounds.iter().map(|b| b.1).fold(f64::NEG_INFINITY, f64::max);

    let lower_dist = |r: usize| (l_ref - bounds[r].0).max(0.0);
    let upper_dist = |r: usize| (bounds[r].1 - u_ref).max(0.0);
    let c = &result.contributions;
    let mut distance_monotone = true;
    let mut plausibility_monotone = true;
    for a in c {
        for b in c {
            let sides = [
                (
                    lower_dist(a.rank),
                    lower_dist(b.rank),
                    a.lower_extension,
                    b.lower_extension,
                ),
                (
                    upper_dist(a.rank),
                    upper_dist(b.rank),
                    a.upper_extension,
                    b.upper_extension,
                ),
            ];
            for (da, db, ea, eb) in sides {
                if a.x == b.x && da <= db && ea > eb {
                    distance_monotone = false;
                }
                if da == db && a.x >= b.x && ea < eb {
                    plausibility_monotone = false;
                }
            }
        }
    }

    PrudenceReport {
        covers_reference: result.lower <= l_ref && u_ref <= result.upper,
        distance_monotone,
        plausibility_monotone,
        within_hull: hull_lo <= result.lower && result.upper <= hull_hi,
    }
}

/// Parts of the hull `[min L(r), max U(r)]` not covered by any per-rank
/// interval. The combined interval fills these; this lists them for users
/// who prefer a disjoint set.
pub fn gap_segments(bounds: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut sorted = bounds.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut gaps = Vec::new();
    let Some(&(_, mut reach)) = sorted.first() else {
        return gaps;
    };
    for &(l, u) in &sorted[1..] {
        if l > reach {
            gaps.push((reach, l));
        }
        reach = reach.max(u);
    }
    gaps
}

/// Per-rank fixed-rank intervals, weights and their combination.
#[derive(Debug, Clone)]
pub struct WimpAnalysis {
    pub per_rank: Vec<IntervalSet>,
    pub weights: PlausibilityWeights,
    pub wimp: WimpSet,
}

/// Runs the fixed-rank bootstrap for every rank `0..=K` and combines.
pub fn wimp_interval(
    data: &TimeSeriesData,
    p: usize,
    queries: &[IrfQuery],
    cfg: &BootstrapConfig,
    c1: f64,
    c2: f64,
) -> Result<WimpAnalysis> {
    let prep = Prepared::from_data(data, p, cfg)?;
    wimp_prepared(&prep, queries, cfg, c1, c2)
}

pub fn wimp_prepared(
    prep: &Prepared,
    queries: &[IrfQuery],
    cfg: &BootstrapConfig,
    c1: f64,
    c2: f64,
) -> Result<WimpAnalysis> {
    let weights = crate::bootstrap::sample_weights(prep, c1, c2)?;
    let per_rank = (0..=prep.nvars())
        .map(|r| fixed_rank_prepared(prep, r, queries, cfg))
        .collect::<Result<Vec<_>>>()?;
    let wimp = wimp_combine(&per_rank, &weights)?;
    Ok(WimpAnalysis {
        per_rank,
        weights,
        wimp,
    })
}
