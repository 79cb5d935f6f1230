mod common;

use common::*;
use nalgebra::DMatrix;
use wimp_core::bootstrap::*;
use wimp_core::mc::{make_dgp, simulate_path, Dgp};
use wimp_core::rank::{RankSelector, TraceLevel};
use wimp_core::ts::{DetrendSpec, TimeSeriesData};
use wimp_core::vecm::{element_queries, IrfKind, IrfQuery};
use wimp_core::wimp::wimp_interval;

fn sample(seed: u64, t: usize) -> TimeSeriesData {
    let mut r = rng(seed);
    TimeSeriesData::from_matrix(simulate_path(&make_dgp(Dgp::Dgp2, t), &mut r)).unwrap()
}

fn config(b: usize) -> BootstrapConfig {
    BootstrapConfig {
        replications: b,
        seed: 42,
        ..BootstrapConfig::default()
    }
}

fn queries() -> Vec<IrfQuery> {
    let mut q = element_queries(IrfKind::Reduced, 3, 0..=8);
    q.push(IrfQuery::element(IrfKind::StructuralCholesky, 1, 0, 3));
    q.push(IrfQuery::max_over_horizons(IrfKind::Reduced, 2, 2, 10));
    q
}

fn assert_ordered(set: &IntervalSet) {
    for e in &set.entries {
        assert!(e.lower <= e.upper, "{:?}", e);
        assert!(e.lower.is_finite() && e.upper.is_finite());
    }
}

#[test]
fn resampled_residual_means_vanish() {
    let mut r = rng(20);
    let res = normal_matrix(150, 3, &mut r).add_scalar(2.0);
    let draws = resample_residuals(&res, 200_000, &mut r);
    for c in 0..3 {
        assert!(draws.column(c).mean().abs() < 0.01);
    }
}

#[test]
fn intervals_are_reproducible() {
    let data = sample(21, 100);
    let a = fixed_rank_interval(&data, 2, 1, &queries(), &config(59)).unwrap();
    let b = fixed_rank_interval(&data, 2, 1, &queries(), &config(59)).unwrap();
    assert_eq!(a, b);
    let c = fixed_rank_interval(&data, 2, 1, &queries(), &BootstrapConfig { seed: 43, ..config(59) }).unwrap();
    assert_ne!(a.entries, c.entries);
    assert_ordered(&a);
    assert_eq!(a.census.successes, 59);
    assert_eq!(a.fits, 60);
}

#[test]
fn impact_response_interval_is_degenerate() {
    let data = sample(22, 80);
    let set = fixed_rank_interval(&data, 1, 2, &queries(), &config(39)).unwrap();
    let e = set.get(&IrfQuery::element(IrfKind::Reduced, 0, 0, 0)).unwrap();
    assert_eq!((e.lower, e.upper, e.point), (1.0, 1.0, 1.0));
}

#[test]
fn constant_selector_reproduces_fixed_rank() {
    let data = sample(23, 100);
    let cfg = config(49);
    for r in 0..=3 {
        let fixed = fixed_rank_interval(&data, 1, r, &queries(), &cfg).unwrap();
        let bers = bers_interval(&data, 1, RankSelector::Fixed(r), DgpRank::Estimated, &queries(), &cfg).unwrap();
        assert_eq!(fixed.entries, bers.entries);
        let mut counts = vec![0; 4];
        counts[r] = 49;
        assert_eq!(bers.rank_counts, Some(counts));
    }
}

#[test]
fn rank_counts_cover_every_replication() {
    let data = sample(24, 100);
    let cfg = config(59);
    for selector in [
        RankSelector::Aic,
        RankSelector::Bic,
        RankSelector::SequentialTrace(TraceLevel::Five),
    ] {
        for mode in [DgpRank::Estimated, DgpRank::FullK] {
            let set = bers_interval(&data, 2, selector, mode, &queries(), &cfg).unwrap();
            assert_eq!(set.rank_counts.as_ref().unwrap().iter().sum::<usize>(), 59);
            assert_ordered(&set);
        }
    }
}

#[test]
fn zero_residual_variance_collapses_every_interval() {
    // noise-free decays: dy has variance, but the rank-K fit leaves no residual
    let values = DMatrix::from_fn(40, 2, |t, c| [0.9f64, 0.95][c].powi(t as i32) * (c + 1) as f64);
    let data = TimeSeriesData::from_matrix(values).unwrap();
    let q = element_queries(IrfKind::Reduced, 2, 0..=5);
    let cfg = BootstrapConfig {
        detrend: DetrendSpec::None,
        ..config(39)
    };
    let sets = [
        fixed_rank_interval(&data, 1, 2, &q, &cfg).unwrap(),
        bers_interval(&data, 1, RankSelector::Fixed(2), DgpRank::Estimated, &q, &cfg).unwrap(),
        fdbb_interval(&data, 1, RankSelector::Fixed(2), &q, &cfg).unwrap(),
    ];
    for set in &sets {
        for (e, truth) in set.entries.iter().zip([1.0, 0.9, 0.81]) {
            assert!(e.width() < 1e-10, "{}", set.method);
            assert!((e.lower - e.point).abs() < 1e-10);
            if e.query.response() == 0 && e.query.shock() == 0 && e.query.horizon() < 3 {
                assert!((e.point - truth).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn model_averaging_variants() {
    let data = sample(25, 120);
    let cfg = config(49);
    let endo = ma_interval(&data, 1, WeightsMode::Endogenous, 1.0, 0.5, &queries(), &cfg).unwrap();
    let fixed = ma_interval(&data, 1, WeightsMode::Fixed, 1.0, 0.5, &queries(), &cfg).unwrap();
    assert_ordered(&endo);
    assert_ordered(&fixed);
    // same point estimate, different bootstrap statistic
    for (a, b) in endo.entries.iter().zip(&fixed.entries) {
        assert_eq!(a.point, b.point);
    }

    // the point estimate is the weighted sum of per-rank estimates
    let prep = Prepared::from_data(&data, 1, &cfg).unwrap();
    let w = sample_weights(&prep, 1.0, 0.5).unwrap();
    let per_rank: Vec<IntervalSet> = (0..=3)
        .map(|r| fixed_rank_prepared(&prep, r, &queries(), &cfg).unwrap())
        .collect();
    for (qi, e) in endo.entries.iter().enumerate() {
        let points: Vec<f64> = per_rank.iter().map(|s| s.entries[qi].point).collect();
        assert!((model_average(&points, &w.normalized) - e.point).abs() < 1e-12);
    }
}

#[test]
fn fast_double_bootstrap_accounting() {
    let data = sample(26, 100);
    let cfg = config(59);
    let set = fdbb_interval(&data, 1, RankSelector::Aic, &queries(), &cfg).unwrap();
    assert_ordered(&set);
    let second = set.second_census.as_ref().unwrap();
    assert_eq!(set.census.successes, 59);
    assert_eq!(second.successes, 59);
    assert_eq!(set.fits, 2 * 59 + 1);
    assert_eq!(set.rank_counts.as_ref().unwrap().iter().sum::<usize>(), 59);
}

#[test]
fn lag_augmented_interval_is_wider_than_fixed_rank() {
    let data = sample(27, 100);
    let cfg = config(99);
    let q = element_queries(IrfKind::Reduced, 3, 10..=10);
    let la = lag_augmented_interval(&data, 1, &q, &cfg).unwrap();
    let fr = fixed_rank_interval(&data, 1, 2, &q, &cfg).unwrap();
    let width = |s: &IntervalSet| s.entries.iter().map(IntervalEntry::width).sum::<f64>();
    assert!(width(&la) > width(&fr));
    assert!(la.rank.is_none());
}

#[test]
fn wimp_interval_contains_reference_for_every_query() {
    let data = sample(28, 100);
    let out = wimp_interval(&data, 1, &queries(), &config(49), 1.0, 0.5).unwrap();
    assert_eq!(out.per_rank.len(), 4);
    let reference = &out.per_rank[out.weights.reference_rank];
    for (e, r) in out.wimp.entries.iter().zip(&reference.entries) {
        assert!(e.interval.lower <= r.lower && r.upper <= e.interval.upper);
    }
}

#[test]
fn invalid_requests_are_rejected() {
    let data = sample(29, 60);
    let q = queries();
    assert!(fixed_rank_interval(&data, 1, 4, &q, &config(39)).is_err());
    assert!(fixed_rank_interval(&data, 1, 1, &q, &config(38)).is_err());
    assert!(fixed_rank_interval(&data, 1, 1, &[], &config(39)).is_err());
    let bad = [IrfQuery::element(IrfKind::Reduced, 3, 0, 1)];
    assert!(fixed_rank_interval(&data, 1, 1, &bad, &config(39)).is_err());
    // T = 60 cannot support K p + 10 with p = 17
    assert!(fixed_rank_interval(&data, 17, 1, &q, &config(39)).is_err());
}

#[test]
fn detrend_modes_are_respected() {
    let data = sample(30, 80);
    let q = element_queries(IrfKind::Reduced, 3, 1..=3);
    let mut cfg = config(39);
    let a = fixed_rank_interval(&data, 1, 2, &q, &cfg).unwrap();
    cfg.detrend = DetrendSpec::None;
    let b = fixed_rank_interval(&data, 1, 2, &q, &cfg).unwrap();
    assert_ne!(a.entries, b.entries);
}
