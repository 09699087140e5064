//! Dense column-major storage and an orthogonal-factorization least squares solve
//! restricted to a subset of columns.

use crate::error::{invalid, Result};
use crate::scalar::{dot, norm2, Scalar};

/// Dense matrix stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct ColMatrix<T> {
    nrows: usize,
    ncols: usize,
    data: Vec<T>,
}

impl<T: Scalar> ColMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        ColMatrix { nrows, ncols, data: vec![T::zero(); nrows * ncols] }
    }

    pub fn from_col_major(nrows: usize, ncols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(invalid(format!(
                "expected {} entries for a {nrows}×{ncols} matrix, got {}",
                nrows * ncols,
                data.len()
            )));
        }
        Ok(ColMatrix { nrows, ncols, data })
    }

    /// Builds from rows given as slices of equal length.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(invalid("rows have unequal lengths"));
        }
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[col * self.nrows + row]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[col * self.nrows + row] = value;
    }

    #[inline]
    pub fn col(&self, col: usize) -> &[T] {
        &self.data[col * self.nrows..(col + 1) * self.nrows]
    }

    #[inline]
    pub fn col_mut(&mut self, col: usize) -> &mut [T] {
        &mut self.data[col * self.nrows..(col + 1) * self.nrows]
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.ncols, "dimension mismatch in A·x");
        let mut out = vec![T::zero(); self.nrows];
        for (k, &xk) in x.iter().enumerate() {
            if xk != T::zero() {
                axpy(xk, self.col(k), &mut out);
            }
        }
        out
    }

    /// `Aᵀ y`.
    pub fn tr_mul_vec(&self, y: &[T]) -> Vec<T> {
        assert_eq!(y.len(), self.nrows, "dimension mismatch in Aᵀ·y");
        (0..self.ncols).map(|k| dot(self.col(k), y)).collect()
    }
}

#[inline]
pub(crate) fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

/// Solution of `min ‖A_S z − b‖` over the columns `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSolution<T> {
    /// Coefficients in the order of the requested columns.
    pub coefficients: Vec<T>,
    /// Numerical rank of the column-equilibrated subproblem.
    pub rank: usize,
}

impl<T> SubsetSolution<T> {
    pub fn is_rank_deficient(&self) -> bool {
        self.rank < self.coefficients.len()
    }
}

/// Relative threshold on the pivots of the equilibrated triangular factor.
pub(crate) fn rank_tolerance<T: Scalar>() -> T {
    T::lit(100.0) * T::epsilon()
}

/// Householder reflector `H = I − τ v vᵀ` with `v[0] = 1` that maps `x` onto `β e₁`.
/// Returns `(τ, β)` and overwrites `x[1..]` with the tail of `v`.
fn householder<T: Scalar>(x: &mut [T]) -> (T, T) {
    let alpha = x[0];
    let tail = norm2(&x[1..]);
    if tail == T::zero() {
        return (T::zero(), alpha);
    }
    let norm = alpha.hypot(tail);
    let beta = if alpha >= T::zero() { -norm } else { norm };
    let scale = (alpha - beta).recip();
    for xi in &mut x[1..] {
        *xi = *xi * scale;
    }
    ((beta - alpha) / beta, beta)
}

/// Applies `I − τ v vᵀ` (with implicit `v[0] = 1`) to `y`.
#[inline]
fn apply_reflector<T: Scalar>(tau: T, v_tail: &[T], y: &mut [T]) {
    if tau == T::zero() {
        return;
    }
    let s = tau * (y[0] + dot(v_tail, &y[1..]));
    y[0] = y[0] - s;
    axpy(-s, v_tail, &mut y[1..]);
}

/// Least squares on the columns `cols` of `a` via column-equilibrated,
/// column-pivoted Householder QR.
///
/// When the equilibrated subproblem is numerically rank deficient, the
/// minimum-norm solution in equilibrated coordinates is returned through a
/// complete orthogonal decomposition and `rank < cols.len()`.
pub fn lstsq_columns<T: Scalar>(a: &ColMatrix<T>, cols: &[usize], b: &[T]) -> SubsetSolution<T> {
    let n = a.nrows();
    let p = cols.len();
    assert_eq!(b.len(), n, "right-hand side length must equal the row count");
    assert!(cols.iter().all(|&c| c < a.ncols()), "column index out of range");
    if p == 0 {
        return SubsetSolution { coefficients: Vec::new(), rank: 0 };
    }

    // Equilibrated working copy; zero columns stay zero and are pivoted last.
    let mut scales = Vec::with_capacity(p);
    let mut work = Vec::with_capacity(n * p);
    for &c in cols {
        let col = a.col(c);
        let s = norm2(col);
        scales.push(s);
        if s > T::zero() {
            work.extend(col.iter().map(|&v| v / s));
        } else {
            work.extend(col.iter().copied());
        }
    }
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..p).collect();
    let steps = n.min(p);
    let mut diag = Vec::with_capacity(steps);

    for k in 0..steps {
        // Pivot on the largest remaining column norm, first index on ties.
        let mut best = k;
        let mut best_norm = T::zero();
        for j in k..p {
            let nj = norm2(&work[j * n + k..(j + 1) * n]);
            if nj > best_norm {
                best_norm = nj;
                best = j;
            }
        }
        if best != k {
            for i in 0..n {
                work.swap(k * n + i, best * n + i);
            }
            perm.swap(k, best);
        }
        let (head, rest) = work.split_at_mut((k + 1) * n);
        let col_k = &mut head[k * n + k..];
        let (tau, beta) = householder(col_k);
        col_k[0] = beta;
        diag.push(beta);
        let v_tail = &col_k[1..];
        for j in (k + 1)..p {
            let start = (j - k - 1) * n + k;
            apply_reflector(tau, v_tail, &mut rest[start..start + n - k]);
        }
        apply_reflector(tau, v_tail, &mut rhs[k..]);
    }

    let lead = diag.first().map_or(T::zero(), |d| d.abs());
    let tol = rank_tolerance::<T>() * lead;
    let rank = if lead == T::zero() {
        0
    } else {
        diag.iter().take_while(|d| d.abs() > tol).count()
    };

    let r = |i: usize, j: usize| work[j * n + i];
    let mut y = vec![T::zero(); p];
    if rank == p {
        for i in (0..p).rev() {
            let s = ((i + 1)..p).fold(rhs[i], |s, j| s - r(i, j) * y[j]);
            y[i] = s / r(i, i);
        }
    } else if rank > 0 {
        y = min_norm_trapezoid(rank, p, r, &rhs[..rank]);
    }

    let mut coefficients = vec![T::zero(); p];
    for (k, &orig) in perm.iter().enumerate() {
        let s = scales[orig];
        coefficients[orig] = if s > T::zero() { y[k] / s } else { T::zero() };
    }
    SubsetSolution { coefficients, rank }
}

/// Minimum-norm solution of `R y = c` for an upper-trapezoidal `R` of shape
/// `rank × p` with nonsingular leading block, using a QR factorization of `Rᵀ`.
fn min_norm_trapezoid<T: Scalar>(
    rank: usize,
    p: usize,
    r: impl Fn(usize, usize) -> T,
    c: &[T],
) -> Vec<T> {
    // Rᵀ = Q L with L upper triangular (rank × rank), so R = Lᵀ Qᵀ.
    let mut rt = Vec::with_capacity(p * rank);
    for i in 0..rank {
        for j in 0..p {
            rt.push(if j >= i { r(i, j) } else { T::zero() });
        }
    }
    let mut taus = Vec::with_capacity(rank);
    for k in 0..rank {
        let (head, rest) = rt.split_at_mut((k + 1) * p);
        let col_k = &mut head[k * p + k..];
        let (tau, beta) = householder(col_k);
        col_k[0] = beta;
        taus.push(tau);
        let v_tail = &col_k[1..];
        for j in (k + 1)..rank {
            let start = (j - k - 1) * p + k;
            apply_reflector(tau, v_tail, &mut rest[start..start + p - k]);
        }
    }
    let l = |i: usize, j: usize| rt[j * p + i];
    // Lᵀ s = c (forward substitution), then y = Q [s; 0].
    let mut y = vec![T::zero(); p];
    for i in 0..rank {
        let mut s = c[i];
        for (j, &yj) in y.iter().enumerate().take(i) {
            s = s - l(j, i) * yj;
        }
        y[i] = s / l(i, i);
    }
    for k in (0..rank).rev() {
        let v_tail = &rt[k * p + k + 1..(k + 1) * p];
        apply_reflector(taus[k], v_tail, &mut y[k..]);
    }
    y
}
