//! Reduced-rank VECM estimation, VECM/VAR conversion and impulse responses.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::ts::VecmRegressors;

const EIGEN_NEGATIVE_TOL: f64 = 1e-10;
const EIGEN_UPPER: f64 = 1.0 - 1e-12;
const EIGEN_OVERSHOOT_TOL: f64 = 1e-8;

/// Parameters of a rank-`r` VECM
/// `dy_t = Pi y_{t-1} + sum_j Gamma_j dy_{t-j} + u_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct VecmFit {
    pub rank: usize,
    pub alpha: DMatrix<f64>,
    pub beta: DMatrix<f64>,
    pub pi: DMatrix<f64>,
    pub gammas: Vec<DMatrix<f64>>,
    /// Residual covariance with divisor `t_eff`.
    pub sigma_u: DMatrix<f64>,
    pub residuals: DMatrix<f64>,
    /// Squared canonical correlations, descending; identical for every rank.
    pub eigenvalues: Vec<f64>,
    pub p: usize,
    pub t_eff: usize,
}

impl VecmFit {
    pub fn nvars(&self) -> usize {
        self.pi.nrows()
    }

    pub fn to_var(&self) -> VarLevels {
        vecm_to_var(self)
    }

    pub fn trace_statistics(&self) -> Vec<f64> {
        trace_statistics_from(&self.eigenvalues, self.t_eff)
    }
}

/// Moment matrices and the solved eigenproblem for one data set.
///
/// Building this once and calling [`Johansen::fit`] per rank shares the
/// eigen decomposition across all `K + 1` ranks.
#[derive(Debug, Clone)]
pub struct Johansen {
    regs: VecmRegressors,
    m22: Option<nalgebra::Cholesky<f64, nalgebra::Dyn>>,
    m20: DMatrix<f64>,
    m21: DMatrix<f64>,
    s01: DMatrix<f64>,
    log_det_s00: f64,
    eigenvalues: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl Johansen {
    pub fn new(regs: VecmRegressors) -> Result<Self> {
        let n = regs.nobs();
        let k = regs.nvars();
        if n <= k {
            return Err(Error::InsufficientData(format!(
                "{n} effective observations for {k} variables"
            )));
        }
        let nf = n as f64;
        let z0 = &regs.z0;
        let z1 = &regs.z1;
        let z2 = &regs.z2;

        let mut s00 = z0.tr_mul(z0);
        let mut s01 = z0.tr_mul(z1);
        let mut s11 = z1.tr_mul(z1);

        let (m22, m20, m21) = if z2.ncols() > 0 {
            let m22 = nalgebra::Cholesky::new(z2.tr_mul(z2)).ok_or(Error::Singular("Z2'Z2"))?;
            let m20 = z2.tr_mul(z0);
            let m21 = z2.tr_mul(z1);
            let a = m22.solve(&m20);
            let b = m22.solve(&m21);
            s00 -= m20.tr_mul(&a);
            s01 -= m20.tr_mul(&b);
            s11 -= m21.tr_mul(&b);
            (Some(m22), m20, m21)
        } else {
            (None, DMatrix::zeros(0, k), DMatrix::zeros(0, k))
        };
        s00 /= nf;
        s01 /= nf;
        s11 /= nf;

        let s00_chol = nalgebra::Cholesky::new(s00.clone()).ok_or(Error::Singular("S00"))?;
        let s11_chol = nalgebra::Cholesky::new(s11).ok_or(Error::Singular("S11"))?;
        let log_det_s00 = 2.0 * s00_chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();

        // C^{-1} S10 S00^{-1} S01 C^{-T} with S11 = C C'
        let c = s11_chol.l();
        let inner = s01.tr_mul(&s00_chol.solve(&s01));
        let left = c.solve_lower_triangular(&inner).ok_or(Error::Singular("S11"))?;
        let m = c
            .solve_lower_triangular(&left.transpose())
            .ok_or(Error::Singular("S11"))?;
        let m = (&m + m.transpose()) * 0.5;
        let eig = SymmetricEigen::new(m);

        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

        let mut eigenvalues = Vec::with_capacity(k);
        for &i in &order {
            let raw = eig.eigenvalues[i];
            if !(-EIGEN_NEGATIVE_TOL..=1.0 + EIGEN_OVERSHOOT_TOL).contains(&raw) {
                return Err(Error::EigenvalueRange(raw));
            }
            eigenvalues.push(raw.clamp(0.0, EIGEN_UPPER));
        }

        let u = DMatrix::from_fn(k, k, |row, col| eig.eigenvectors[(row, order[col])]);
        let mut vectors = c.tr_solve_lower_triangular(&u).ok_or(Error::Singular("S11"))?;
        for mut col in vectors.column_iter_mut() {
            let scale = col.amax();
            if let Some(first) = col.iter().copied().find(|v| v.abs() > 1e-12 * scale) {
                if first < 0.0 {
                    col.neg_mut();
                }
            }
        }

        Ok(Self {
            regs,
            m22,
            m20,
            m21,
            s01,
            log_det_s00,
            eigenvalues,
            vectors,
        })
    }

    pub fn regressors(&self) -> &VecmRegressors {
        &self.regs
    }

    pub fn nvars(&self) -> usize {
        self.regs.nvars()
    }

    pub fn t_eff(&self) -> usize {
        self.regs.nobs()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors normalised so that `V' S11 V = I`, columns descending.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn trace_statistics(&self) -> Vec<f64> {
        trace_statistics_from(&self.eigenvalues, self.t_eff())
    }

    /// `ln det Sigma_u` of the rank-`r` fit, from the concentrated likelihood
    /// `det S00 * prod_{i <= r} (1 - lambda_i)`.
    pub fn log_det_sigma(&self, r: usize) -> f64 {
        self.log_det_s00 + self.eigenvalues[..r].iter().map(|l| (1.0 - l).ln()).sum::<f64>()
    }

    pub fn fit(&self, r: usize) -> Result<VecmFit> {
        let k = self.nvars();
        if r > k {
            return Err(Error::InvalidArgument(format!(
                "rank {r} exceeds the number of variables {k}"
            )));
        }
        let n = self.t_eff();
        let p = self.regs.p;

        let beta = self.vectors.columns(0, r).into_owned();
        let alpha = &self.s01 * &beta;
        let pi = if r == 0 {
            DMatrix::zeros(k, k)
        } else {
            &alpha * beta.transpose()
        };

        let mut residuals = &self.regs.z0 - &self.regs.z1 * pi.transpose();
        let mut gammas = Vec::with_capacity(p - 1);
        if let Some(m22) = &self.m22 {
            let rhs = &self.m20 - &self.m21 * pi.transpose();
            let coef = m22.solve(&rhs);
            residuals -= &self.regs.z2 * &coef;
            let stacked = coef.transpose();
            for j in 0..p - 1 {
                gammas.push(stacked.columns(j * k, k).into_owned());
            }
        }
        let sigma_u = residuals.tr_mul(&residuals) / n as f64;

        Ok(VecmFit {
            rank: r,
            alpha,
            beta,
            pi,
            gammas,
            sigma_u,
            residuals,
            eigenvalues: self.eigenvalues.clone(),
            p,
            t_eff: n,
        })
    }
}

/// Reduced-rank Gaussian quasi-ML fit at rank `r`.
pub fn johansen_fit(regs: &VecmRegressors, r: usize) -> Result<VecmFit> {
    Johansen::new(regs.clone())?.fit(r)
}

pub fn trace_statistics(fit: &VecmFit) -> Vec<f64> {
    fit.trace_statistics()
}

/// `J[r] = -T_eff * sum_{i > r} ln(1 - lambda_i)` for `r = 0..K`, `J[K] = 0`.
pub fn trace_statistics_from(eigenvalues: &[f64], t_eff: usize) -> Vec<f64> {
    let k = eigenvalues.len();
    let mut out = vec![0.0; k + 1];
    let mut acc = 0.0;
    for r in (0..k).rev() {
        acc -= t_eff as f64 * (1.0 - eigenvalues[r]).ln();
        out[r] = acc;
    }
    out
}

/// Levels VAR `y_t = A_1 y_{t-1} + ... + A_p y_{t-p} + u_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarLevels {
    pub a: Vec<DMatrix<f64>>,
}

impl VarLevels {
    pub fn new(a: Vec<DMatrix<f64>>) -> Result<Self> {
        let Some(first) = a.first() else {
            return Err(Error::InvalidArgument("a VAR needs at least one lag".into()));
        };
        let k = first.nrows();
        if a.iter().any(|m| m.shape() != (k, k)) {
            return Err(Error::InvalidArgument("lag matrices must all be K x K".into()));
        }
        Ok(Self { a })
    }

    pub fn nvars(&self) -> usize {
        self.a[0].nrows()
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// Keeps the first `p` lag matrices.
    pub fn truncate(&self, p: usize) -> VarLevels {
        VarLevels {
            a: self.a[..p.min(self.a.len())].to_vec(),
        }
    }

    pub fn to_vecm(&self) -> (DMatrix<f64>, Vec<DMatrix<f64>>) {
        var_to_vecm(self)
    }

    pub fn companion(&self) -> DMatrix<f64> {
        companion_matrix(self)
    }
}

pub fn vecm_to_var(fit: &VecmFit) -> VarLevels {
    vecm_params_to_var(&fit.pi, &fit.gammas)
}

/// `A_1 = I + Pi + Gamma_1`, `A_j = Gamma_j - Gamma_{j-1}`, `A_p = -Gamma_{p-1}`.
pub fn vecm_params_to_var(pi: &DMatrix<f64>, gammas: &[DMatrix<f64>]) -> VarLevels {
    let k = pi.nrows();
    let p = gammas.len() + 1;
    let mut a = Vec::with_capacity(p);
    let mut a1 = DMatrix::identity(k, k) + pi;
    if let Some(g1) = gammas.first() {
        a1 += g1;
    }
    a.push(a1);
    for j in 2..p {
        a.push(&gammas[j - 1] - &gammas[j - 2]);
    }
    if p > 1 {
        a.push(-&gammas[p - 2]);
    }
    VarLevels { a }
}

/// Inverse of [`vecm_params_to_var`]: `Pi = sum A_j - I`,
/// `Gamma_j = -sum_{i > j} A_i`.
pub fn var_to_vecm(var: &VarLevels) -> (DMatrix<f64>, Vec<DMatrix<f64>>) {
    let k = var.nvars();
    let p = var.order();
    let mut pi = -DMatrix::identity(k, k);
    for a in &var.a {
        pi += a;
    }
    let mut gammas = vec![DMatrix::zeros(k, k); p - 1];
    let mut tail = DMatrix::zeros(k, k);
    for j in (1..p).rev() {
        tail += &var.a[j];
        gammas[j - 1] = -&tail;
    }
    (pi, gammas)
}

pub fn companion_matrix(var: &VarLevels) -> DMatrix<f64> {
    let k = var.nvars();
    let p = var.order();
    let mut c = DMatrix::zeros(k * p, k * p);
    for (j, a) in var.a.iter().enumerate() {
        c.view_mut((0, j * k), (k, k)).copy_from(a);
    }
    if p > 1 {
        c.view_mut((k, 0), (k * (p - 1), k * (p - 1))).fill_with_identity();
    }
    c
}

/// Moduli of the companion-matrix eigenvalues, descending.
///
/// Triangular companion matrices (every VAR(1) with triangular `A_1`) are
/// read off the diagonal: a defective eigenvalue would otherwise only be
/// resolved to about `sqrt(eps)`.
pub fn companion_roots(var: &VarLevels) -> Vec<f64> {
    let c = companion_matrix(var);
    let n = c.nrows();
    let lower = (0..n).all(|i| (i + 1..n).all(|j| c[(i, j)] == 0.0));
    let upper = (0..n).all(|i| (0..i).all(|j| c[(i, j)] == 0.0));
    let mut moduli: Vec<f64> = if lower || upper {
        c.diagonal().iter().map(|v| v.abs()).collect()
    } else {
        c.complex_eigenvalues().iter().map(|z| z.norm()).collect()
    };
    moduli.sort_by(|a, b| b.total_cmp(a));
    moduli
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IrfKind {
    Reduced,
    StructuralCholesky,
}

impl IrfKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IrfKind::Reduced => "reduced",
            IrfKind::StructuralCholesky => "structural",
        }
    }
}

/// Scalar functional of the impulse-response sequence. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Functional {
    Element {
        response: usize,
        shock: usize,
        horizon: usize,
    },
    MaxOverHorizons {
        response: usize,
        shock: usize,
        h_max: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IrfQuery {
    pub kind: IrfKind,
    pub functional: Functional,
}

impl IrfQuery {
    pub fn element(kind: IrfKind, response: usize, shock: usize, horizon: usize) -> Self {
        Self {
            kind,
            functional: Functional::Element {
                response,
                shock,
                horizon,
            },
        }
    }

    pub fn max_over_horizons(kind: IrfKind, response: usize, shock: usize, h_max: usize) -> Self {
        Self {
            kind,
            functional: Functional::MaxOverHorizons { response, shock, h_max },
        }
    }

    pub fn response(&self) -> usize {
        match self.functional {
            Functional::Element { response, .. } | Functional::MaxOverHorizons { response, .. } => response,
        }
    }

    pub fn shock(&self) -> usize {
        match self.functional {
            Functional::Element { shock, .. } | Functional::MaxOverHorizons { shock, .. } => shock,
        }
    }

    /// Largest horizon the functional reads.
    pub fn horizon(&self) -> usize {
        match self.functional {
            Functional::Element { horizon, .. } => horizon,
            Functional::MaxOverHorizons { h_max, .. } => h_max,
        }
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        if self.response() >= k || self.shock() >= k {
            return Err(Error::InvalidArgument(format!(
                "query indices ({}, {}) out of range for K = {k}",
                self.response(),
                self.shock()
            )));
        }
        Ok(())
    }
}

/// Every `(response, shock)` element for horizons `0..=h_max`, ordered by
/// response, then shock, then horizon.
pub fn element_queries(kind: IrfKind, k: usize, horizons: std::ops::RangeInclusive<usize>) -> Vec<IrfQuery> {
    let mut out = Vec::new();
    for a in 0..k {
        for b in 0..k {
            for j in horizons.clone() {
                out.push(IrfQuery::element(kind, a, b, j));
            }
        }
    }
    out
}

/// `Psi_j` (reduced form) or `Phi_j = Psi_j P` (structural), `j = 0..=h_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct IrfArray {
    pub kind: IrfKind,
    pub matrices: Vec<DMatrix<f64>>,
}

impl IrfArray {
    pub fn h_max(&self) -> usize {
        self.matrices.len() - 1
    }
}

/// `Psi_0 = I`, `Psi_j = sum_{i=1}^{min(j, p)} A_i Psi_{j-i}`.
pub fn irf_reduced(var: &VarLevels, h_max: usize) -> IrfArray {
    let k = var.nvars();
    let mut psi: Vec<DMatrix<f64>> = Vec::with_capacity(h_max + 1);
    psi.push(DMatrix::identity(k, k));
    for j in 1..=h_max {
        let mut next = DMatrix::zeros(k, k);
        for (i, a) in var.a.iter().enumerate().take(j) {
            next.gemm(1.0, a, &psi[j - 1 - i], 1.0);
        }
        psi.push(next);
    }
    IrfArray {
        kind: IrfKind::Reduced,
        matrices: psi,
    }
}

/// Lower-triangular `P` with `P P' = sigma` and positive diagonal.
pub fn cholesky_factor(sigma: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let k = sigma.nrows();
    if sigma.ncols() != k || k == 0 {
        return Err(Error::InvalidArgument("covariance must be square".into()));
    }
    let tol = 1e-12 * sigma.trace().abs() / k as f64;
    let mut l = DMatrix::zeros(k, k);
    for j in 0..k {
        let mut pivot = sigma[(j, j)];
        for m in 0..j {
            pivot -= l[(j, m)] * l[(j, m)];
        }
        if pivot.is_nan() || pivot <= tol {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        let d = pivot.sqrt();
        l[(j, j)] = d;
        for i in j + 1..k {
            let mut s = sigma[(i, j)];
            for m in 0..j {
                s -= l[(i, m)] * l[(j, m)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

pub fn irf_structural(irf: &IrfArray, p: &DMatrix<f64>) -> IrfArray {
    IrfArray {
        kind: IrfKind::StructuralCholesky,
        matrices: irf.matrices.iter().map(|m| m * p).collect(),
    }
}

pub fn evaluate_zeta(irf: &IrfArray, q: &IrfQuery) -> Result<f64> {
    if irf.kind != q.kind {
        return Err(Error::InvalidArgument(format!(
            "query asks for {} responses but the array holds {}",
            q.kind.as_str(),
            irf.kind.as_str()
        )));
    }
    let k = irf.matrices[0].nrows();
    q.validate(k)?;
    if q.horizon() > irf.h_max() {
        return Err(Error::InvalidArgument(format!(
            "horizon {} beyond computed maximum {}",
            q.horizon(),
            irf.h_max()
        )));
    }
    Ok(match q.functional {
        Functional::Element {
            response,
            shock,
            horizon,
        } => irf.matrices[horizon][(response, shock)],
        Functional::MaxOverHorizons { response, shock, h_max } => irf.matrices[..=h_max]
            .iter()
            .map(|m| m[(response, shock)])
            .fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Evaluates every query on the responses implied by `(var, sigma_u)`.
///
/// The Cholesky factor is only computed when a structural query is present.
pub fn evaluate_queries(var: &VarLevels, sigma_u: &DMatrix<f64>, queries: &[IrfQuery]) -> Result<Vec<f64>> {
    let h_max = queries.iter().map(IrfQuery::horizon).max().unwrap_or(0);
    let reduced = irf_reduced(var, h_max);
    let structural = if queries.iter().any(|q| q.kind == IrfKind::StructuralCholesky) {
        Some(irf_structural(&reduced, &cholesky_factor(sigma_u)?))
    } else {
        None
    };
    queries
        .iter()
        .map(|q| match q.kind {
            IrfKind::Reduced => evaluate_zeta(&reduced, q),
            IrfKind::StructuralCholesky => evaluate_zeta(structural.as_ref().expect("computed above"), q),
        })
        .collect()
}

/// OLS levels VAR without deterministic terms.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelsFit {
    pub var: VarLevels,
    pub residuals: DMatrix<f64>,
    pub sigma_u: DMatrix<f64>,
}

/// Regresses `y_t` on `(y_{t-1}, ..., y_{t-lags})` for `t = lags + 1..T`.
pub fn ols_var_levels(y: &DMatrix<f64>, lags: usize) -> Result<LevelsFit> {
    let (nobs, k) = y.shape();
    if lags < 1 {
        return Err(Error::InvalidArgument("lag order must be at least 1".into()));
    }
    if nobs <= lags + k * lags {
        return Err(Error::InsufficientData(format!(
            "{nobs} observations cannot support a levels VAR({lags}) in {k} variables"
        )));
    }
    let n = nobs - lags;
    let lhs = y.rows(lags, n).into_owned();
    let x = DMatrix::from_fn(n, k * lags, |s, c| y[(lags + s - 1 - c / k, c % k)]);
    let xtx = nalgebra::Cholesky::new(x.tr_mul(&x)).ok_or(Error::Singular("X'X"))?;
    let coef = xtx.solve(&x.tr_mul(&lhs));
    let residuals = &lhs - &x * &coef;
    let sigma_u = residuals.tr_mul(&residuals) / n as f64;
    let stacked = coef.transpose();
    let a = (0..lags).map(|j| stacked.columns(j * k, k).into_owned()).collect();
    Ok(LevelsFit {
        var: VarLevels { a },
        residuals,
        sigma_u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn trace_statistics_by_hand() {
        let j = trace_statistics_from(&[0.5, 0.2, 0.1], 100);
        let j0 = -100.0 * (0.5f64.ln() + 0.8f64.ln() + 0.9f64.ln());
        let j1 = -100.0 * (0.8f64.ln() + 0.9f64.ln());
        let j2 = -100.0 * 0.9f64.ln();
        assert!((j[0] - j0).abs() < 1e-10 && (j[0] - 102.165).abs() < 1e-2);
        assert!((j[1] - j1).abs() < 1e-10 && (j[1] - 32.85).abs() < 1e-2);
        assert!((j[2] - j2).abs() < 1e-10 && (j[2] - 10.54).abs() < 1e-2);
        assert_eq!(j[3], 0.0);
        assert!(trace_statistics_from(&[0.0; 4], 50).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn random_walk_conversion() {
        let var = vecm_params_to_var(&DMatrix::zeros(2, 2), &[]);
        assert_eq!(var.a, vec![DMatrix::<f64>::identity(2, 2)]);
        let irf = irf_reduced(&var, 5);
        assert!(irf.matrices.iter().all(|m| *m == DMatrix::identity(2, 2)));
    }

    #[test]
    fn conversion_with_lags() {
        let pi = dmatrix![-0.2, 0.1; 0.0, -0.1];
        let g1 = dmatrix![0.3, 0.0; 0.1, 0.2];
        let g2 = dmatrix![-0.1, 0.05; 0.0, 0.1];
        let var = vecm_params_to_var(&pi, &[g1.clone(), g2.clone()]);
        assert_eq!(var.order(), 3);
        assert_eq!(var.a[0], DMatrix::identity(2, 2) + &pi + &g1);
        assert_eq!(var.a[1], &g2 - &g1);
        assert_eq!(var.a[2], -&g2);
        let (pi2, gs) = var_to_vecm(&var);
        assert!((pi2 - pi).amax() < 1e-15);
        assert!((&gs[0] - g1).amax() < 1e-15);
        assert!((&gs[1] - g2).amax() < 1e-15);
    }

    #[test]
    fn scaled_identity_roots() {
        let var = VarLevels::new(vec![DMatrix::identity(2, 2) * 0.5]).unwrap();
        assert_eq!(companion_roots(&var), vec![0.5, 0.5]);
    }

    #[test]
    fn non_triangular_roots_use_schur() {
        // rotation scaled by 0.9: complex pair with modulus 0.9
        let a = dmatrix![0.0, -0.9; 0.9, 0.0];
        let roots = companion_roots(&VarLevels::new(vec![a]).unwrap());
        assert!(roots.iter().all(|m| (m - 0.9).abs() < 1e-12));
        // AR(2) scalar with roots 0.5 and 0.4: y = 0.9 y_{-1} - 0.2 y_{-2}
        let var = VarLevels::new(vec![dmatrix![0.9], dmatrix![-0.2]]).unwrap();
        let roots = companion_roots(&var);
        assert!((roots[0] - 0.5).abs() < 1e-12 && (roots[1] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn cholesky_by_hand() {
        assert_eq!(
            cholesky_factor(&DMatrix::identity(3, 3)).unwrap(),
            DMatrix::identity(3, 3)
        );
        let p = cholesky_factor(&dmatrix![4.0, 2.0; 2.0, 2.0]).unwrap();
        assert_eq!(p, dmatrix![2.0, 0.0; 1.0, 1.0]);
        let err = cholesky_factor(&dmatrix![1.0, 1.0; 1.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { index: 1, .. }));
    }

    #[test]
    fn structural_identity_and_impact() {
        let var = VarLevels::new(vec![dmatrix![0.5, 0.1; 0.2, 0.3]]).unwrap();
        let psi = irf_reduced(&var, 4);
        assert_eq!(irf_structural(&psi, &DMatrix::identity(2, 2)).matrices, psi.matrices);
        let p = dmatrix![2.0, 0.0; 1.0, 1.0];
        assert_eq!(irf_structural(&psi, &p).matrices[0], p);
    }

    #[test]
    fn zeta_functionals() {
        let var = VarLevels::new(vec![dmatrix![0.5, 0.0; 0.0, 0.8]]).unwrap();
        let psi = irf_reduced(&var, 10);
        assert_eq!(
            evaluate_zeta(&psi, &IrfQuery::element(IrfKind::Reduced, 0, 0, 0)).unwrap(),
            1.0
        );
        assert_eq!(
            evaluate_zeta(&psi, &IrfQuery::element(IrfKind::Reduced, 0, 1, 0)).unwrap(),
            0.0
        );
        // decreasing response peaks at impact
        let q = IrfQuery::max_over_horizons(IrfKind::Reduced, 1, 1, 10);
        assert_eq!(evaluate_zeta(&psi, &q).unwrap(), 1.0);
        assert!(evaluate_zeta(&psi, &IrfQuery::element(IrfKind::Reduced, 2, 0, 0)).is_err());
        assert!(evaluate_zeta(&psi, &IrfQuery::element(IrfKind::Reduced, 0, 0, 11)).is_err());
        assert!(evaluate_zeta(&psi, &IrfQuery::element(IrfKind::StructuralCholesky, 0, 0, 1)).is_err());
    }
}
