#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use nnls_approx::ColMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random dense instance with entries uniform in [-1, 1].
pub fn random_instance(seed: u64, n: usize, l: usize) -> (ColMatrix<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * l).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    (ColMatrix::from_col_major(n, l, data).unwrap(), b)
}

pub fn squared_residual(a: &ColMatrix<f64>, b: &[f64], x: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    ax.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()
}

/// Minimum of `‖Ax − b‖²` over `x ≥ 0` by trying every column subset.
///
/// Some optimal solution has linearly independent support, and on that support it
/// is the unconstrained least squares solution, so the minimum over subsets whose
/// least squares solution is non-negative is the optimum.
pub fn exhaustive_nnls(a: &ColMatrix<f64>, b: &[f64]) -> (f64, Vec<f64>) {
    let n = a.nrows();
    let l = a.ncols();
    assert!(l <= 16, "exhaustive oracle is exponential in l");
    let bv = DVector::from_column_slice(b);
    let mut best = (bv.norm_squared(), vec![0.0; l]);
    for mask in 1u32..(1 << l) {
        let cols: Vec<usize> = (0..l).filter(|k| mask & (1 << k) != 0).collect();
        let sub = DMatrix::from_fn(n, cols.len(), |i, j| a.get(i, cols[j]));
        let z = sub.clone().svd(true, true).solve(&bv, 1e-13).unwrap();
        if z.iter().any(|&v| v < -1e-13) {
            continue;
        }
        let r = (&sub * &z - &bv).norm_squared();
        if r < best.0 {
            let mut x = vec![0.0; l];
            for (j, &c) in cols.iter().enumerate() {
                x[c] = z[j].max(0.0);
            }
            best = (r, x);
        }
    }
    best
}

/// Largest violation of the KKT conditions at `x`: feasibility, `w ≤ 0` on the bound
/// and `w = 0` on the interior, with `w = Aᵀ(b − Ax)`.
pub fn kkt_violation(a: &ColMatrix<f64>, b: &[f64], x: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
    let w = a.tr_mul_vec(&r);
    let mut worst = 0.0f64;
    for (&xk, &wk) in x.iter().zip(&w) {
        worst = worst.max(-xk);
        worst = worst.max(if xk > 0.0 { wk.abs() } else { wk });
    }
    worst
}

/// Pinned rational model `1 + Σ u (1/(1 + v x) − 1/(1 + v))` in the unsimplified form.
pub fn rational_model_direct(terms: &[(f64, f64)], x: f64) -> f64 {
    1.0 + terms.iter().map(|&(u, v)| u * (1.0 / (1.0 + v * x) - 1.0 / (1.0 + v))).sum::<f64>()
}

/// Pinned exponential model `1 + Σ u (exp(−v x) − 1)`.
pub fn exp_model_direct(terms: &[(f64, f64)], x: f64) -> f64 {
    1.0 + terms.iter().map(|&(u, v)| u * ((-v * x).exp() - 1.0)).sum::<f64>()
}

/// `(Σ w_j (r(x_j) − f(x_j))²)^{1/2}` with `n` midpoints in `θ = ln x` on `[1, b]`.
pub fn log_midpoint_residual(b: f64, n: usize, r: impl Fn(f64) -> f64, f: impl Fn(f64) -> f64) -> f64 {
    let h = b.ln() / n as f64;
    let s: f64 = (0..n)
        .map(|j| {
            let x = ((j as f64 + 0.5) * h).exp();
            let d = r(x) - f(x);
            h * d * d
        })
        .sum();
    s.sqrt()
}

/// Same with `θ = ln(1 + x)` on `[0, b]`.
pub fn log1p_midpoint_residual(b: f64, n: usize, r: impl Fn(f64) -> f64, f: impl Fn(f64) -> f64) -> f64 {
    let h = (1.0 + b).ln() / n as f64;
    let s: f64 = (0..n)
        .map(|j| {
            let x = ((j as f64 + 0.5) * h).exp() - 1.0;
            let d = r(x) - f(x);
            h * d * d
        })
        .sum();
    s.sqrt()
}
