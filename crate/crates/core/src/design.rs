//! Weighted least squares system over an expanded dictionary.
//!
//! Row `j` is scaled by `sqrt(w_j)`, so `‖rhs − A ũ‖²` equals the discrete
//! weighted residual `Σ_j w_j (f(x_j) − offset − Σ_k ũ_k φ(x_j, ṽ_k))²`.

use std::io::Write;

use crate::dictionary::{Atom, BasisFamily, CandidateSet, TargetFunction};
use crate::error::{invalid, Result};
use crate::grid::{QuadratureGrid, TransformKind, WeightKind};
use crate::linalg::{lstsq_columns, ColMatrix};
use crate::scalar::Scalar;

/// Grid parameters a system was assembled on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSummary<T> {
    pub a: T,
    pub b: T,
    pub n: usize,
    pub transform: TransformKind,
    pub weight: WeightKind,
}

impl<T: Scalar> GridSummary<T> {
    fn of(grid: &QuadratureGrid<T>) -> Self {
        GridSummary {
            a: grid.a(),
            b: grid.b(),
            n: grid.len(),
            transform: grid.transform(),
            weight: grid.weight_kind(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DesignSystem<T> {
    matrix: ColMatrix<T>,
    rhs: Vec<T>,
    grid: GridSummary<T>,
    candidates: CandidateSet<T>,
    family: BasisFamily<T>,
}

/// Restricted least squares solution scattered back to dictionary length.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedSolution<T> {
    pub coefficients: Vec<T>,
    pub degenerate: bool,
}

impl<T: Scalar> DesignSystem<T> {
    pub fn matrix(&self) -> &ColMatrix<T> {
        &self.matrix
    }

    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }

    pub fn grid(&self) -> &GridSummary<T> {
        &self.grid
    }

    pub fn candidates(&self) -> &CandidateSet<T> {
        &self.candidates
    }

    pub fn family(&self) -> &BasisFamily<T> {
        &self.family
    }

    /// `(n, l)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.matrix.nrows(), self.matrix.ncols())
    }

    /// `‖rhs − A ũ‖²`.
    pub fn objective(&self, coefficients: &[T]) -> T {
        let fit = self.matrix.mul_vec(coefficients);
        self.rhs.iter().zip(&fit).fold(T::zero(), |acc, (&b, &f)| {
            let r = b - f;
            acc + r * r
        })
    }

    /// Unconstrained least squares on the columns in `support`; zero elsewhere.
    pub fn solve_restricted(&self, support: &[usize]) -> Result<RestrictedSolution<T>> {
        if support.is_empty() {
            return Err(invalid("restricted solve needs a nonempty support"));
        }
        let l = self.matrix.ncols();
        if let Some(&bad) = support.iter().find(|&&k| k >= l) {
            return Err(invalid(format!("support index {bad} out of range for {l} columns")));
        }
        let mut seen = vec![false; l];
        for &k in support {
            if std::mem::replace(&mut seen[k], true) {
                return Err(invalid(format!("support index {k} repeated")));
            }
        }
        let sol = lstsq_columns(&self.matrix, support, &self.rhs);
        let mut coefficients = vec![T::zero(); l];
        for (&k, &z) in support.iter().zip(&sol.coefficients) {
            coefficients[k] = z;
        }
        Ok(RestrictedSolution { coefficients, degenerate: sol.is_rank_deficient() })
    }

    /// Writes `n l` on the first line followed by the augmented rows `A | rhs`, row-major.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let (n, l) = self.shape();
        writeln!(out, "# n={n} l={l} layout=row-major columns=a_1..a_l,rhs")?;
        for j in 0..n {
            for k in 0..l {
                write!(out, "{:e},", self.matrix.get(j, k))?;
            }
            writeln!(out, "{:e}", self.rhs[j])?;
        }
        Ok(())
    }
}

/// Assembles `A[j,k] = sqrt(w_j) φ(x_j, ṽ_k)` and `rhs[j] = sqrt(w_j) (f(x_j) − offset)`.
pub fn assemble<T: Scalar>(
    grid: &QuadratureGrid<T>,
    family: &BasisFamily<T>,
    candidates: &CandidateSet<T>,
    target: &TargetFunction<T>,
) -> Result<DesignSystem<T>> {
    let (matrix, rhs) = assemble_atoms(grid, family, candidates, target)?;
    Ok(DesignSystem {
        matrix,
        rhs,
        grid: GridSummary::of(grid),
        candidates: candidates.clone(),
        family: *family,
    })
}

/// Matrix and right-hand side for any [`Atom`] implementation.
pub fn assemble_atoms<T: Scalar, A: Atom<T>>(
    grid: &QuadratureGrid<T>,
    atom: &A,
    candidates: &CandidateSet<T>,
    target: &TargetFunction<T>,
) -> Result<(ColMatrix<T>, Vec<T>)> {
    if grid.is_empty() || candidates.is_empty() {
        return Err(invalid("assembly needs a nonempty grid and candidate set"));
    }
    let first = grid.nodes()[0];
    if first < atom.domain_start() {
        return Err(invalid(format!(
            "grid starts at x = {first}, below the atom domain x ≥ {}",
            atom.domain_start()
        )));
    }
    if first < target.domain_start() {
        return Err(invalid(format!(
            "grid starts at x = {first}, below the target domain x ≥ {}",
            target.domain_start()
        )));
    }

    let n = grid.len();
    let l = candidates.len();
    let row_scale: Vec<T> = grid.weights().iter().map(|w| w.sqrt()).collect();
    let offset = atom.offset();
    let rhs: Vec<T> = grid
        .nodes()
        .iter()
        .zip(&row_scale)
        .map(|(&x, &s)| s * (target.value(x) - offset))
        .collect();

    let mut matrix = ColMatrix::zeros(n, l);
    for (k, &v) in candidates.values().iter().enumerate() {
        let col = matrix.col_mut(k);
        for ((entry, &x), &s) in col.iter_mut().zip(grid.nodes()).zip(&row_scale) {
            *entry = s * atom.value(x, v);
        }
        if col.iter().all(|&e| e == T::zero()) {
            return Err(invalid(format!(
                "atom column for v = {v} vanishes on every grid node"
            )));
        }
    }
    Ok((matrix, rhs))
}
