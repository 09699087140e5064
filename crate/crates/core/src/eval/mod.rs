//! Pointwise accuracy and weighted residuals of an approximant.

mod reference;

pub use reference::{load_reference_by_id, load_reference_params, ReferenceTable};

use crate::dictionary::TargetFunction;
use crate::error::{invalid, Result};
use crate::grid::QuadratureGrid;
use crate::scalar::Scalar;
use crate::selector::SparseApproximant;

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport<T> {
    pub nodes: Vec<T>,
    /// `|r(x_j) − f(x_j)|` with the model offset included.
    pub epsilon: Vec<T>,
    pub max_epsilon: T,
    /// `(Σ_j w_j (r(x_j) − f(x_j))²)^{1/2}`.
    pub residual_norm: T,
}

/// Accuracy of `approx` against `target` on the nodes of `grid`.
pub fn error_curve<T: Scalar>(
    approx: &SparseApproximant<T>,
    grid: &QuadratureGrid<T>,
    target: &TargetFunction<T>,
) -> Result<ErrorReport<T>> {
    let first = *grid.nodes().first().ok_or_else(|| invalid("empty grid"))?;
    let atom_start: T = approx.family().kind().domain_start();
    if first < atom_start || first < target.domain_start() {
        return Err(invalid(format!(
            "grid starts at x = {first}, outside the model or target domain"
        )));
    }
    let mut epsilon = Vec::with_capacity(grid.len());
    let mut energy = T::zero();
    for (&x, &w) in grid.nodes().iter().zip(grid.weights()) {
        let diff = approx.value(x) - target.value(x);
        energy = energy + w * diff * diff;
        epsilon.push(diff.abs());
    }
    let max_epsilon = epsilon.iter().fold(T::zero(), |m, &e| m.max(e));
    Ok(ErrorReport {
        nodes: grid.nodes().to_vec(),
        epsilon,
        max_epsilon,
        residual_norm: energy.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::{AtomKind, BasisFamily, Term};
    use crate::grid::{build_grid, TransformKind, WeightKind};

    #[test]
    fn exact_model_has_zero_error() {
        let grid = build_grid(0.0, 20.0, 100, TransformKind::ExpMinusOne, WeightKind::InverseOnePlusX)
            .unwrap();
        let terms = vec![Term { u: 0.4, v: 0.3 }, Term { u: 0.1, v: 5.0 }];
        let target = TargetFunction::planted(AtomKind::ExpPinned, 1.0, terms.clone()).unwrap();
        let fam = BasisFamily::new(AtomKind::ExpPinned, 1.0).unwrap();
        let approx = SparseApproximant::new(fam, terms).unwrap();
        let report = error_curve(&approx, &grid, &target).unwrap();
        assert!(report.epsilon.iter().all(|&e| e == 0.0));
        assert_eq!(report.residual_norm, 0.0);
        assert_eq!(report.max_epsilon, 0.0);
    }

    #[test]
    fn constant_model_error_is_target_deviation() {
        let grid = build_grid(1.0, 1e4, 50, TransformKind::Exp, WeightKind::InverseX).unwrap();
        let target = TargetFunction::power_neg(0.5).unwrap();
        let fam = BasisFamily::new(AtomKind::RationalPinned, 1.0).unwrap();
        let approx = SparseApproximant::<f64>::new(fam, vec![]).unwrap();
        let report = error_curve(&approx, &grid, &target).unwrap();
        for (&x, &e) in report.nodes.iter().zip(&report.epsilon) {
            assert!((e - (1.0 - x.powf(-0.5))).abs() < 1e-15);
        }
        let max = report.epsilon.iter().cloned().fold(0.0, f64::max);
        assert_eq!(report.max_epsilon, max);
    }

    #[test]
    fn rejects_grid_outside_domain() {
        let grid = build_grid(0.0, 5.0, 10, TransformKind::Identity, WeightKind::Unit).unwrap();
        let target = TargetFunction::power_neg(0.5).unwrap();
        let fam = BasisFamily::new(AtomKind::RationalPinned, 1.0).unwrap();
        let approx = SparseApproximant::new(fam, vec![]).unwrap();
        assert!(error_curve(&approx, &grid, &target).is_err());
    }
}
