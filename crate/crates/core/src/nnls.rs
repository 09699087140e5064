//! Lawson–Hanson active-set NNLS with a per-outer-iteration trace.
//!
//! Each outer iteration promotes the zero-set index with the largest positive
//! dual component `w = Aᵀ(b − A ũ)`, then the inner loop restores feasibility
//! by stepping toward the restricted least squares solution and demoting
//! indices that reach zero. A snapshot of `ũ` is kept after every outer
//! iteration so that iterates with a given support size can be selected later.

use serde::{Deserialize, Serialize};

use crate::design::DesignSystem;
use crate::error::{invalid, Result};
use crate::linalg::{lstsq_columns, ColMatrix};
use crate::scalar::{dot, norm2, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnlsOptions<T> {
    /// Cap on outer (promotion) iterations.
    pub max_outer: usize,
    /// Entries at or below `zero_tol · max_k ũ_k` count as zero.
    pub zero_tol: T,
    /// Promotion stops once `max w ≤ kkt_tol · ‖Aᵀ b‖∞` over the zero set.
    pub kkt_tol: T,
}

impl<T: Scalar> Default for NnlsOptions<T> {
    fn default() -> Self {
        NnlsOptions { max_outer: 500, zero_tol: T::lit(1e-12), kkt_tol: T::lit(1e-10) }
    }
}

impl<T: Scalar> NnlsOptions<T> {
    pub fn with_max_outer(max_outer: usize) -> Self {
        NnlsOptions { max_outer, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.max_outer == 0 {
            return Err(invalid("max_outer must be at least 1"));
        }
        if !(self.zero_tol > T::zero()) || !(self.kkt_tol > T::zero()) {
            return Err(invalid("NNLS tolerances must be positive"));
        }
        Ok(())
    }
}

/// State after one completed outer iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<T> {
    /// 1-based outer iteration index.
    pub iter: usize,
    /// `‖A ũ − b‖`.
    pub residual_norm: T,
    /// Number of coefficients above the zero threshold.
    pub support_size: usize,
    pub coefficients: Vec<T>,
    /// A candidate was rejected or a restricted solve was rank deficient.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The zero set is empty or carries no dual component above tolerance.
    KktSatisfied,
    MaxIterations,
    /// Every dual-positive candidate was rejected as numerically dependent.
    Stalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NnlsTrace<T> {
    records: Vec<IterationRecord<T>>,
    terminated: Termination,
    zero_tol: T,
    kkt_tol: T,
    /// `‖Aᵀ b‖∞`, the scale of the KKT tolerance.
    dual_scale: T,
}

impl<T: Scalar> NnlsTrace<T> {
    pub fn records(&self) -> &[IterationRecord<T>] {
        &self.records
    }

    pub fn terminated(&self) -> Termination {
        self.terminated
    }

    pub fn zero_tol(&self) -> T {
        self.zero_tol
    }

    pub fn kkt_tol(&self) -> T {
        self.kkt_tol
    }

    pub fn dual_scale(&self) -> T {
        self.dual_scale
    }

    /// Index of the last record.
    pub fn final_index(&self) -> Option<usize> {
        self.records.len().checked_sub(1)
    }

    pub fn final_record(&self) -> Option<&IterationRecord<T>> {
        self.records.last()
    }

    /// Last iterate, or `None` for an empty trace (zero solution).
    pub fn solution(&self) -> Option<&[T]> {
        self.records.last().map(|r| r.coefficients.as_slice())
    }

    /// Distinct support sizes in ascending order.
    pub fn support_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.records.iter().map(|r| r.support_size).collect();
        sizes.sort_unstable();
        sizes.dedup();
        sizes
    }

    /// Threshold below which an entry of `coefficients` counts as zero.
    pub fn zero_threshold(&self, coefficients: &[T]) -> T {
        zero_threshold(self.zero_tol, coefficients)
    }
}

fn zero_threshold<T: Scalar>(zero_tol: T, x: &[T]) -> T {
    zero_tol * x.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
}

fn support_size<T: Scalar>(zero_tol: T, x: &[T]) -> usize {
    let thresh = zero_threshold(zero_tol, x);
    x.iter().filter(|&&v| v > thresh).count()
}

/// `b − A x` using only the listed columns.
fn residual_on<T: Scalar>(a: &ColMatrix<T>, b: &[T], cols: &[usize], x: &[T]) -> Vec<T> {
    let mut r = b.to_vec();
    for &k in cols {
        let xk = x[k];
        if xk != T::zero() {
            for (ri, &aik) in r.iter_mut().zip(a.col(k)) {
                *ri = *ri - xk * aik;
            }
        }
    }
    r
}

/// Dual vector `Aᵀ(b − A x)`.
pub fn dual_vector<T: Scalar>(a: &ColMatrix<T>, b: &[T], x: &[T]) -> Vec<T> {
    let cols: Vec<usize> = (0..a.ncols()).collect();
    let r = residual_on(a, b, &cols, x);
    a.tr_mul_vec(&r)
}

/// Runs the solver on an assembled design system.
pub fn solve_nnls<T: Scalar>(system: &DesignSystem<T>, opts: &NnlsOptions<T>) -> Result<NnlsTrace<T>> {
    nnls_trace(system.matrix(), system.rhs(), opts)
}

/// Runs the solver on `min ‖A ũ − b‖, ũ ≥ 0`.
pub fn nnls_trace<T: Scalar>(a: &ColMatrix<T>, b: &[T], opts: &NnlsOptions<T>) -> Result<NnlsTrace<T>> {
    opts.validate()?;
    let n = a.nrows();
    let l = a.ncols();
    if b.len() != n {
        return Err(invalid(format!("right-hand side has {} entries, matrix has {n} rows", b.len())));
    }
    if n == 0 || l == 0 {
        return Err(invalid("NNLS needs a nonempty matrix"));
    }
    if b.iter().chain(a.col(0)).any(|v| !v.is_finite()) {
        return Err(invalid("NNLS input contains non-finite values"));
    }

    let dual_scale = a.tr_mul_vec(b).iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    let mut trace = NnlsTrace {
        records: Vec::new(),
        terminated: Termination::KktSatisfied,
        zero_tol: opts.zero_tol,
        kkt_tol: opts.kkt_tol,
        dual_scale,
    };
    if dual_scale == T::zero() {
        return Ok(trace);
    }
    let promote_above = opts.kkt_tol * dual_scale;
    let inner_cap = 3 * l;

    let mut x = vec![T::zero(); l];
    let mut passive: Vec<usize> = Vec::new();
    let mut in_passive = vec![false; l];
    let mut residual = b.to_vec();
    let mut rejected = vec![false; l];

    for iter in 1..=opts.max_outer {
        let dual: Vec<T> = (0..l)
            .map(|k| if in_passive[k] { T::zero() } else { dot(a.col(k), &residual) })
            .collect();
        rejected.iter_mut().for_each(|r| *r = false);
        let mut degenerate = false;

        // Promotion with the independence and sign test of the classical method.
        let mut z = loop {
            let mut best: Option<(usize, T)> = None;
            for (k, &wk) in dual.iter().enumerate() {
                if in_passive[k] || rejected[k] || !(wk > promote_above) {
                    continue;
                }
                if best.is_none_or(|(_, bw)| wk > bw) {
                    best = Some((k, wk));
                }
            }
            let Some((t, _)) = best else {
                trace.terminated =
                    if degenerate { Termination::Stalled } else { Termination::KktSatisfied };
                return Ok(trace);
            };
            passive.push(t);
            let sol = lstsq_columns(a, &passive, b);
            let zt = *sol.coefficients.last().expect("nonempty passive set");
            if sol.is_rank_deficient() || !(zt > T::zero()) {
                passive.pop();
                rejected[t] = true;
                degenerate = true;
                continue;
            }
            in_passive[t] = true;
            break sol.coefficients;
        };

        let mut inner = 0;
        while z.iter().any(|&zk| !(zk > T::zero())) {
            inner += 1;
            if inner > inner_cap {
                degenerate = true;
                break;
            }
            let mut step = T::one();
            let mut blocking = None;
            for (i, &k) in passive.iter().enumerate() {
                if !(z[i] > T::zero()) {
                    let denom = x[k] - z[i];
                    let ratio = if denom > T::zero() { x[k] / denom } else { T::zero() };
                    if ratio < step || blocking.is_none() {
                        step = step.min(ratio);
                        blocking = Some(k);
                    }
                }
            }
            for (i, &k) in passive.iter().enumerate() {
                x[k] = x[k] + step * (z[i] - x[k]);
            }
            let thresh = zero_threshold(opts.zero_tol, &x);
            passive.retain(|&k| {
                let keep = Some(k) != blocking && x[k] > thresh;
                if !keep {
                    x[k] = T::zero();
                    in_passive[k] = false;
                }
                keep
            });
            if passive.is_empty() {
                z.clear();
                break;
            }
            let sol = lstsq_columns(a, &passive, b);
            degenerate |= sol.is_rank_deficient();
            z = sol.coefficients;
        }

        // Accept the restricted solution, dropping anything left infeasible after the cap.
        let mut kept = Vec::with_capacity(passive.len());
        for (i, &k) in passive.iter().enumerate() {
            if z[i] > T::zero() {
                x[k] = z[i];
                kept.push(k);
            } else {
                x[k] = T::zero();
                in_passive[k] = false;
            }
        }
        passive = kept;

        residual = residual_on(a, b, &passive, &x);
        trace.records.push(IterationRecord {
            iter,
            residual_norm: norm2(&residual),
            support_size: support_size(opts.zero_tol, &x),
            coefficients: x.clone(),
            degenerate,
        });
    }

    trace.terminated = Termination::MaxIterations;
    Ok(trace)
}
