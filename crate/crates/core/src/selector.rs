//! Picks the solver iterate with a requested number of terms and extracts the
//! sparse model `offset + Σ u_i φ(x, v_i)`.

use crate::dictionary::{BasisFamily, CandidateSet, Term};
use crate::error::{invalid, Error, Result};
use crate::nnls::NnlsTrace;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseApproximant<T> {
    terms: Vec<Term<T>>,
    family: BasisFamily<T>,
    selected_iter: Option<usize>,
    residual_norm: Option<T>,
}

impl<T: Scalar> SparseApproximant<T> {
    /// Model from explicit terms; they are sorted by ascending `v`.
    pub fn new(family: BasisFamily<T>, mut terms: Vec<Term<T>>) -> Result<Self> {
        if terms.iter().any(|t| !(t.u > T::zero()) || !t.u.is_finite()) {
            return Err(invalid("approximant coefficients must be finite and positive"));
        }
        if terms.iter().any(|t| !(t.v >= T::zero()) || !t.v.is_finite()) {
            return Err(invalid("approximant parameters must be finite and non-negative"));
        }
        terms.sort_by(|a, b| a.v.partial_cmp(&b.v).expect("finite parameters"));
        if terms.windows(2).any(|w| w[0].v == w[1].v) {
            return Err(invalid("approximant parameters must be distinct"));
        }
        Ok(SparseApproximant { terms, family, selected_iter: None, residual_norm: None })
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn family(&self) -> &BasisFamily<T> {
        &self.family
    }

    pub fn pin_value(&self) -> T {
        self.family.pin_value()
    }

    /// Outer iteration the terms were taken from, if produced by [`select`].
    pub fn selected_iter(&self) -> Option<usize> {
        self.selected_iter
    }

    /// Recorded solver residual at the selected iteration.
    pub fn residual_norm(&self) -> Option<T> {
        self.residual_norm
    }

    /// Model value without domain checks.
    #[inline]
    pub fn value(&self, x: T) -> T {
        let kind = self.family.kind();
        self.terms
            .iter()
            .fold(self.family.pin_value(), |acc, t| acc + t.u * kind.value(x, t.v))
    }
}

/// Checked model evaluation.
pub fn evaluate_model<T: Scalar>(approx: &SparseApproximant<T>, x: T) -> Result<T> {
    let start: T = approx.family.kind().domain_start();
    if !(x >= start) {
        return Err(invalid(format!("model is defined for x ≥ {start}, got x = {x}")));
    }
    Ok(approx.value(x))
}

/// Among iterates with exactly `m` positive coefficients, takes the one with
/// the least residual (earliest on ties).
pub fn select<T: Scalar>(
    trace: &NnlsTrace<T>,
    candidates: &CandidateSet<T>,
    family: &BasisFamily<T>,
    m: usize,
) -> Result<SparseApproximant<T>> {
    if m == 0 {
        return Err(invalid("term count m must be at least 1"));
    }
    let best = trace
        .records()
        .iter()
        .filter(|r| r.support_size == m)
        .fold(None, |best: Option<&crate::nnls::IterationRecord<T>>, r| match best {
            Some(b) if !(r.residual_norm < b.residual_norm) => Some(b),
            _ => Some(r),
        })
        .ok_or_else(|| Error::SupportNotAttained { requested: m, attained: trace.support_sizes() })?;

    if best.coefficients.len() != candidates.len() {
        return Err(invalid(format!(
            "trace has {} coefficients but the candidate set has {} values",
            best.coefficients.len(),
            candidates.len()
        )));
    }
    let thresh = trace.zero_threshold(&best.coefficients);
    let terms = best
        .coefficients
        .iter()
        .zip(candidates.values())
        .filter(|(&u, _)| u > thresh)
        .map(|(&u, &v)| Term { u, v })
        .collect();
    let mut approx = SparseApproximant::new(*family, terms)?;
    approx.selected_iter = Some(best.iter);
    approx.residual_norm = Some(best.residual_norm);
    Ok(approx)
}
