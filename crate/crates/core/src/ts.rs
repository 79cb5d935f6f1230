//! Series containers, deterministic-component removal and VECM regressors.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A `T x K` block of observations: rows are time, columns are variables.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesData {
    values: DMatrix<f64>,
    names: Vec<String>,
    frequency: Option<String>,
}

impl TimeSeriesData {
    pub fn new(values: DMatrix<f64>, names: Vec<String>) -> Result<Self> {
        if names.len() != values.ncols() {
            return Err(Error::InvalidArgument(format!(
                "{} names for {} columns",
                names.len(),
                values.ncols()
            )));
        }
        check_finite(&values)?;
        Ok(Self {
            values,
            names,
            frequency: None,
        })
    }

    /// Wraps a matrix with generated names `y1..yK`.
    pub fn from_matrix(values: DMatrix<f64>) -> Result<Self> {
        let names = (1..=values.ncols()).map(|i| format!("y{i}")).collect();
        Self::new(values, names)
    }

    pub fn with_frequency(mut self, frequency: impl Into<String>) -> Self {
        self.frequency = Some(frequency.into());
        self
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn frequency(&self) -> Option<&str> {
        self.frequency.as_deref()
    }

    pub fn nobs(&self) -> usize {
        self.values.nrows()
    }

    pub fn nvars(&self) -> usize {
        self.values.ncols()
    }

    /// Estimation entry requirement `T >= K p + 10`.
    pub fn ensure_estimable(&self, p: usize) -> Result<()> {
        let need = self.nvars() * p + 10;
        if self.nobs() < need {
            return Err(Error::InsufficientData(format!(
                "{} observations for K = {} and p = {p}; need at least {need}",
                self.nobs(),
                self.nvars()
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_finite(values: &DMatrix<f64>) -> Result<()> {
    for column in 0..values.ncols() {
        for row in 0..values.nrows() {
            if !values[(row, column)].is_finite() {
                return Err(Error::NonFinite { row, column });
            }
        }
    }
    Ok(())
}

/// Deterministic terms removed from every column before estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DetrendSpec {
    None,
    Constant,
    #[default]
    ConstantAndTrend,
}

impl DetrendSpec {
    pub fn as_str(self) -> &'static str {
        match self {
            DetrendSpec::None => "none",
            DetrendSpec::Constant => "constant",
            DetrendSpec::ConstantAndTrend => "constant_and_trend",
        }
    }
}

impl std::str::FromStr for DetrendSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(DetrendSpec::None),
            "constant" => Ok(DetrendSpec::Constant),
            "constant_and_trend" | "trend" => Ok(DetrendSpec::ConstantAndTrend),
            other => Err(Error::InvalidArgument(format!("unknown detrend mode `{other}`"))),
        }
    }
}

/// Output of [`detrend`]: `tilde[t] = y[t] - mu0 - mu1 * (t + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DetrendedSeries {
    pub tilde: DMatrix<f64>,
    pub mu0: DVector<f64>,
    pub mu1: DVector<f64>,
    pub spec: DetrendSpec,
}

impl DetrendedSeries {
    /// Adds the fitted deterministic component back.
    pub fn retrend(&self) -> DMatrix<f64> {
        let mut out = self.tilde.clone();
        for (t, mut row) in out.row_iter_mut().enumerate() {
            let time = (t + 1) as f64;
            for k in 0..row.ncols() {
                row[k] += self.mu0[k] + self.mu1[k] * time;
            }
        }
        out
    }

    pub fn difference(&self) -> DMatrix<f64> {
        difference(&self.tilde)
    }
}

pub fn detrend(data: &TimeSeriesData, spec: DetrendSpec) -> Result<DetrendedSeries> {
    detrend_matrix(data.values(), spec)
}

/// Column-wise OLS of `y` on `(1, t)`, `t = 1..T`, or on `1` alone.
pub fn detrend_matrix(values: &DMatrix<f64>, spec: DetrendSpec) -> Result<DetrendedSeries> {
    let (nobs, nvars) = values.shape();
    if nobs < 3 {
        return Err(Error::InsufficientData(format!(
            "detrending needs at least 3 observations, got {nobs}"
        )));
    }
    check_finite(values)?;

    let mut tilde = values.clone();
    let mut mu0 = DVector::zeros(nvars);
    let mut mu1 = DVector::zeros(nvars);
    let n = nobs as f64;
    let tbar = (n + 1.0) / 2.0;
    // sum over t of (t - tbar)^2
    let stt = n * (n * n - 1.0) / 12.0;

    for k in 0..nvars {
        let column = values.column(k);
        let mean = column.sum() / n;
        let (a, b) = match spec {
            DetrendSpec::None => (0.0, 0.0),
            DetrendSpec::Constant => (mean, 0.0),
            DetrendSpec::ConstantAndTrend => {
                let sty: f64 = column
                    .iter()
                    .enumerate()
                    .map(|(t, y)| ((t + 1) as f64 - tbar) * (y - mean))
                    .sum();
                let slope = sty / stt;
                (mean - slope * tbar, slope)
            }
        };
        mu0[k] = a;
        mu1[k] = b;
        if spec != DetrendSpec::None {
            for t in 0..nobs {
                tilde[(t, k)] -= a + b * (t + 1) as f64;
            }
        }
    }

    Ok(DetrendedSeries { tilde, mu0, mu1, spec })
}

/// First differences; row `t` of the output is `x[t + 1] - x[t]`.
pub fn difference(values: &DMatrix<f64>) -> DMatrix<f64> {
    let (nobs, nvars) = values.shape();
    if nobs < 2 {
        return DMatrix::zeros(0, nvars);
    }
    DMatrix::from_fn(nobs - 1, nvars, |t, k| values[(t + 1, k)] - values[(t, k)])
}

/// Which observations enter the VECM regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SampleConvention {
    /// Every usable observation, `t = p + 1..T`.
    #[default]
    Minimal,
    /// Drops one more observation, `t = p + 2..T`.
    DropOne,
}

impl SampleConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleConvention::Minimal => "minimal",
            SampleConvention::DropOne => "drop_one",
        }
    }
}

/// Aligned VECM regression blocks.
///
/// Row `s` (0-based) of every block belongs to calendar time
/// `first_time + s` (1-based), so under [`SampleConvention::Minimal`] the
/// first row is `t = p + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct VecmRegressors {
    /// `dy_t`
    pub z0: DMatrix<f64>,
    /// `y_{t-1}`
    pub z1: DMatrix<f64>,
    /// `(dy_{t-1}', ..., dy_{t-p+1}')`, `K (p - 1)` columns.
    pub z2: DMatrix<f64>,
    pub p: usize,
    pub first_time: usize,
}

impl VecmRegressors {
    pub fn nobs(&self) -> usize {
        self.z0.nrows()
    }

    pub fn nvars(&self) -> usize {
        self.z0.ncols()
    }
}

pub fn build_vecm_regressors(tilde: &DMatrix<f64>, p: usize, convention: SampleConvention) -> Result<VecmRegressors> {
    let (nobs, nvars) = tilde.shape();
    if p < 1 {
        return Err(Error::InvalidArgument("lag order p must be at least 1".into()));
    }
    if nobs < p + nvars + 2 {
        return Err(Error::InsufficientData(format!(
            "{nobs} observations cannot support K = {nvars} and p = {p} (need {})",
            p + nvars + 2
        )));
    }
    // 0-based index of the first regression row in `tilde`.
    let start = match convention {
        SampleConvention::Minimal => p,
        SampleConvention::DropOne => p + 1,
    };
    let rows = nobs - start;
    let lagged = nvars * (p - 1);

    let z0 = DMatrix::from_fn(rows, nvars, |s, k| {
        let t = start + s;
        tilde[(t, k)] - tilde[(t - 1, k)]
    });
    let z1 = DMatrix::from_fn(rows, nvars, |s, k| tilde[(start + s - 1, k)]);
    let z2 = DMatrix::from_fn(rows, lagged, |s, c| {
        let j = c / nvars + 1;
        let k = c % nvars;
        let t = start + s - j;
        tilde[(t, k)] - tilde[(t - 1, k)]
    });

    Ok(VecmRegressors {
        z0,
        z1,
        z2,
        p,
        first_time: start + 1,
    })
}
