#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use wimp_core::rng::{substream, StreamRng};

pub fn rng(seed: u64) -> StreamRng {
    substream(seed, &[0xC0FFEE])
}

pub fn normal_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Spectral radius of the companion matrix, computed with nalgebra directly.
pub fn spectral_radius(a: &[DMatrix<f64>]) -> f64 {
    let k = a[0].nrows();
    let p = a.len();
    let mut c = DMatrix::zeros(k * p, k * p);
    for (i, ai) in a.iter().enumerate() {
        c.view_mut((0, i * k), (k, k)).copy_from(ai);
    }
    for i in 0..k * (p - 1) {
        c[(k + i, i)] = 1.0;
    }
    c.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Random VAR(p) coefficients with companion spectral radius below `bound`.
pub fn stable_var<R: Rng>(k: usize, p: usize, bound: f64, rng: &mut R) -> Vec<DMatrix<f64>> {
    let mut a: Vec<DMatrix<f64>> = (0..p)
        .map(|_| normal_matrix(k, k, rng) * (0.4 / (k as f64).sqrt()))
        .collect();
    while spectral_radius(&a) >= bound {
        for m in &mut a {
            *m *= 0.8;
        }
    }
    a
}

/// Levels path `y_t = sum_i A_i y_{t-i} + e_t` from zero initial values.
pub fn simulate_var(a: &[DMatrix<f64>], noise: &DMatrix<f64>) -> DMatrix<f64> {
    let (t_total, k) = noise.shape();
    let mut y = DMatrix::<f64>::zeros(t_total, k);
    for t in 0..t_total {
        for r in 0..k {
            let mut v = noise[(t, r)];
            for (i, ai) in a.iter().enumerate() {
                if t > i {
                    for c in 0..k {
                        v += ai[(r, c)] * y[(t - i - 1, c)];
                    }
                }
            }
            y[(t, r)] = v;
        }
    }
    y
}

/// Random walk plus cointegrated noise: a generic I(1) sample.
pub fn random_levels<R: Rng>(t: usize, k: usize, rng: &mut R) -> DMatrix<f64> {
    let e = normal_matrix(t, k, rng);
    let mut y = DMatrix::zeros(t, k);
    for s in 0..t {
        for c in 0..k {
            let prev = if s > 0 { y[(s - 1, c)] } else { 0.0 };
            y[(s, c)] = if c == 0 {
                prev + e[(s, c)]
            } else {
                0.5 * prev + 0.5 * y[(s, 0)] + e[(s, c)]
            };
        }
    }
    y
}

/// Least squares through the SVD, independent of the library's normal equations.
pub fn lstsq(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    x.clone().svd(true, true).solve(y, 1e-14).expect("svd solve")
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    (a - b).abs().max()
}
