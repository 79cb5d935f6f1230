//! Rank selection and trace-statistic plausibility weights.

use crate::error::{Error, Result};
use crate::vecm::Johansen;

/// Asymptotic trace-test critical values for a VECM without deterministic
/// terms (data detrended beforehand), indexed by `K - r = 1..=12`.
/// Columns are the 90%, 95% and 99% quantiles.
///
/// Source: MacKinnon, Haug and Michelis (1999) response-surface values.
pub const TRACE_CRITICAL_VALUES: [[f64; 3]; 12] = [
    [2.9762, 4.1296, 6.9406],
    [10.4741, 12.3212, 16.3640],
    [21.7781, 24.2761, 29.5147],
    [37.0339, 40.1749, 46.5716],
    [56.2839, 60.0627, 67.6367],
    [79.5329, 83.9383, 92.7136],
    [106.7351, 111.7797, 121.7375],
    [137.9954, 143.6691, 154.7977],
    [173.2292, 179.5199, 191.8122],
    [212.4721, 219.4051, 232.8291],
    [255.6732, 263.2603, 277.9962],
    [302.9054, 311.1288, 326.9716],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceLevel {
    Ten,
    Five,
    One,
}

impl TraceLevel {
    pub fn from_level(level: f64) -> Result<Self> {
        match level {
            l if (l - 0.10).abs() < 1e-12 => Ok(TraceLevel::Ten),
            l if (l - 0.05).abs() < 1e-12 => Ok(TraceLevel::Five),
            l if (l - 0.01).abs() < 1e-12 => Ok(TraceLevel::One),
            other => Err(Error::InvalidArgument(format!(
                "trace-test level {other} not tabulated (use 0.10, 0.05 or 0.01)"
            ))),
        }
    }

    pub fn level(self) -> f64 {
        match self {
            TraceLevel::Ten => 0.10,
            TraceLevel::Five => 0.05,
            TraceLevel::One => 0.01,
        }
    }

    fn column(self) -> usize {
        match self {
            TraceLevel::Ten => 0,
            TraceLevel::Five => 1,
            TraceLevel::One => 2,
        }
    }
}

/// Critical value for `dim = K - r` free stochastic trends.
pub fn trace_critical_value(dim: usize, level: TraceLevel) -> Result<f64> {
    if dim == 0 || dim > TRACE_CRITICAL_VALUES.len() {
        return Err(Error::CriticalValueRange(dim));
    }
    Ok(TRACE_CRITICAL_VALUES[dim - 1][level.column()])
}

/// A rank selection rule `r = M(Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankSelector {
    Aic,
    Bic,
    SequentialTrace(TraceLevel),
    /// Always returns the given rank.
    Fixed(usize),
}

impl RankSelector {
    pub fn select(&self, est: &Johansen) -> Result<usize> {
        match *self {
            RankSelector::Aic => Ok(select_rank_ic(est, InformationCriterion::Aic)),
            RankSelector::Bic => Ok(select_rank_ic(est, InformationCriterion::Bic)),
            RankSelector::SequentialTrace(level) => select_rank_sequential(est, level),
            RankSelector::Fixed(r) if r <= est.nvars() => Ok(r),
            RankSelector::Fixed(r) => Err(Error::InvalidArgument(format!(
                "fixed rank {r} exceeds K = {}",
                est.nvars()
            ))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            RankSelector::Aic => "aic".into(),
            RankSelector::Bic => "bic".into(),
            RankSelector::SequentialTrace(l) => format!("trace{}", l.level()),
            RankSelector::Fixed(r) => format!("fixed{r}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InformationCriterion {
    Aic,
    Bic,
}

/// Free parameters of a rank-`r` VECM with `p` lags: `2Kr - r^2 + K^2 (p - 1)`.
pub fn ic_parameter_count(k: usize, r: usize, p: usize) -> usize {
    2 * k * r - r * r + k * k * (p - 1)
}

/// `ln det Sigma(r) + c_T * count(r) / T_eff` for every rank.
pub fn ic_values(est: &Johansen, criterion: InformationCriterion) -> Vec<f64> {
    let k = est.nvars();
    let p = est.regressors().p;
    let n = est.t_eff() as f64;
    let penalty = match criterion {
        InformationCriterion::Aic => 2.0,
        InformationCriterion::Bic => n.ln(),
    };
    (0..=k)
        .map(|r| est.log_det_sigma(r) + penalty * ic_parameter_count(k, r, p) as f64 / n)
        .collect()
}

/// Minimiser of the criterion; ties go to the smaller rank.
pub fn select_rank_ic(est: &Johansen, criterion: InformationCriterion) -> usize {
    argmin_first(&ic_values(est, criterion))
}

/// Smallest `r` whose trace statistic does not reject, `K` if all reject.
pub fn select_rank_sequential(est: &Johansen, level: TraceLevel) -> Result<usize> {
    sequential_from_trace(&est.trace_statistics(), level)
}

pub fn sequential_from_trace(trace: &[f64], level: TraceLevel) -> Result<usize> {
    let k = trace.len() - 1;
    if k > TRACE_CRITICAL_VALUES.len() {
        return Err(Error::CriticalValueRange(k));
    }
    for (r, j) in trace.iter().take(k).enumerate() {
        if *j < trace_critical_value(k - r, level)? {
            return Ok(r);
        }
    }
    Ok(k)
}

fn argmin_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

/// Trace-test plausibility weights over ranks `0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlausibilityWeights {
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
    pub c1: f64,
    pub c2: f64,
    /// Sample size used in the exponent scaling `c1 * T^-c2`.
    pub t_eff: usize,
    pub trace: Vec<f64>,
    /// Most plausible rank; ties go to the smaller rank.
    pub reference_rank: usize,
}

impl PlausibilityWeights {
    pub fn nranks(&self) -> usize {
        self.normalized.len()
    }

    pub fn relative(&self, r: usize, s: usize) -> f64 {
        relative_plausibility(self, r, s)
    }

    /// Weights with all mass on one rank.
    pub fn point_mass(k: usize, rank: usize) -> Self {
        let mut w = vec![0.0; k + 1];
        w[rank] = 1.0;
        Self {
            raw: w.clone(),
            normalized: w,
            c1: f64::NAN,
            c2: f64::NAN,
            t_eff: 0,
            trace: Vec::new(),
            reference_rank: rank,
        }
    }

    /// Builds weights from arbitrary nonnegative values (normalized here).
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidArgument("weights must be finite and nonnegative".into()));
        }
        let total: f64 = values.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidArgument("weights sum to zero".into()));
        }
        let normalized: Vec<f64> = values.iter().map(|v| v / total).collect();
        let reference_rank = argmax_first(&normalized);
        Ok(Self {
            raw: values,
            normalized,
            c1: f64::NAN,
            c2: f64::NAN,
            t_eff: 0,
            trace: Vec::new(),
            reference_rank,
        })
    }
}

fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// With `a = c1 * T_eff^-c2`:
/// `W(0) = exp(-a J(0))`, `W(r) = exp(-a J(r)) - exp(-a J(r-1))`,
/// `W(K) = 1 - exp(-a J(K-1))`.
pub fn plausibility_weights(trace: &[f64], t_eff: usize, c1: f64, c2: f64) -> Result<PlausibilityWeights> {
    if trace.len() < 2 {
        return Err(Error::InvalidArgument(
            "need trace statistics for at least K = 1".into(),
        ));
    }
    let valid = c1 > 0.0 && c2 > 0.0 && c2 < 1.0;
    if !valid {
        return Err(Error::InvalidArgument(format!(
            "weight constants require c1 > 0 and 0 < c2 < 1 (got {c1}, {c2})"
        )));
    }
    if t_eff == 0 {
        return Err(Error::InvalidArgument("sample size must be positive".into()));
    }
    if trace.iter().any(|j| !j.is_finite()) {
        return Err(Error::InvalidArgument("trace statistics must be finite".into()));
    }
    if let Some(rank) = trace.windows(2).position(|w| w[0] < w[1]) {
        return Err(Error::IncreasingTrace { rank });
    }

    let k = trace.len() - 1;
    let a = c1 * (t_eff as f64).powf(-c2);
    let e: Vec<f64> = trace.iter().map(|j| (-a * j).exp()).collect();
    let mut raw = Vec::with_capacity(k + 1);
    raw.push(e[0]);
    for r in 1..k {
        raw.push(e[r] - e[r - 1]);
    }
    raw.push(1.0 - e[k - 1]);

    let total: f64 = raw.iter().sum();
    let normalized: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let reference_rank = argmax_first(&normalized);
    Ok(PlausibilityWeights {
        raw,
        normalized,
        c1,
        c2,
        t_eff,
        trace: trace.to_vec(),
        reference_rank,
    })
}

/// `X(r, s) = W(r) / W(s)`; a zero denominator gives `+inf` (or `1` when
/// both weights vanish).
pub fn relative_plausibility(w: &PlausibilityWeights, r: usize, s: usize) -> f64 {
    let num = w.normalized[r];
    let den = w.normalized[s];
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}
