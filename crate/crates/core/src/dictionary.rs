//! Atom families φ(x, v), candidate parameter sets and target functions.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Closed-form atom shapes.
///
/// The pinned shapes vanish at their pin abscissa, so a model
/// `f(a) + Σ u_i φ(x, v_i)` interpolates the target at `a` for any coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomKind {
    /// `1/(1 + v x)`.
    RationalRaw,
    /// `exp(−v x)`.
    ExpRaw,
    /// `1/(1 + v x) − 1/(1 + v)`, zero at `x = 1`.
    RationalPinned,
    /// `exp(−v x) − 1`, zero at `x = 0`.
    ExpPinned,
}

impl AtomKind {
    /// Abscissa at which the atom vanishes, for pinned shapes.
    pub fn pin_abscissa<T: Scalar>(self) -> Option<T> {
        match self {
            AtomKind::RationalPinned => Some(T::one()),
            AtomKind::ExpPinned => Some(T::zero()),
            AtomKind::RationalRaw | AtomKind::ExpRaw => None,
        }
    }

    /// Smallest admissible abscissa.
    pub fn domain_start<T: Scalar>(self) -> T {
        match self {
            AtomKind::RationalPinned => T::one(),
            AtomKind::RationalRaw | AtomKind::ExpRaw | AtomKind::ExpPinned => T::zero(),
        }
    }

    pub fn is_pinned(self) -> bool {
        matches!(self, AtomKind::RationalPinned | AtomKind::ExpPinned)
    }

    /// Atom value without domain checks.
    ///
    /// The pinned rational atom uses the cancellation-free form
    /// `v (1 − x) / ((1 + v x)(1 + v))`; the pinned exponential uses `expm1`.
    #[inline]
    pub fn value<T: Scalar>(self, x: T, v: T) -> T {
        let one = T::one();
        match self {
            AtomKind::RationalRaw => (one + v * x).recip(),
            AtomKind::ExpRaw => (-v * x).exp(),
            AtomKind::RationalPinned => v * (one - x) / ((one + v * x) * (one + v)),
            AtomKind::ExpPinned => (-v * x).exp_m1(),
        }
    }
}

/// Shapes that can populate a dictionary.
///
/// [`BasisFamily`] covers the built-in shapes; other parametric atoms can be
/// assembled into a design by implementing this trait.
pub trait Atom<T: Scalar> {
    /// φ(x, v) for `x` in the domain and `v ≥ 0`.
    fn value(&self, x: T, v: T) -> T;

    /// Smallest admissible abscissa.
    fn domain_start(&self) -> T;

    /// Constant added to every model built from this family.
    fn offset(&self) -> T {
        T::zero()
    }
}

/// An atom shape together with the additive offset of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFamily<T> {
    kind: AtomKind,
    pin_value: T,
}

impl<T: Scalar> BasisFamily<T> {
    /// Family with an explicit offset. Raw shapes require `pin_value = 0`.
    pub fn new(kind: AtomKind, pin_value: T) -> Result<Self> {
        if !pin_value.is_finite() {
            return Err(invalid(format!("pin value must be finite, got {pin_value}")));
        }
        if !kind.is_pinned() && pin_value != T::zero() {
            return Err(invalid(format!("{kind:?} carries no pin offset, got {pin_value}")));
        }
        Ok(BasisFamily { kind, pin_value })
    }

    /// Family whose offset is the target value at the pin abscissa (zero for raw shapes).
    pub fn for_target(kind: AtomKind, target: &TargetFunction<T>) -> Result<Self> {
        let pin_value = match kind.pin_abscissa() {
            Some(a) => eval_target(target, a)?,
            None => T::zero(),
        };
        Self::new(kind, pin_value)
    }

    pub fn kind(&self) -> AtomKind {
        self.kind
    }

    pub fn pin_value(&self) -> T {
        self.pin_value
    }
}

impl<T: Scalar> Atom<T> for BasisFamily<T> {
    #[inline]
    fn value(&self, x: T, v: T) -> T {
        self.kind.value(x, v)
    }

    fn domain_start(&self) -> T {
        self.kind.domain_start()
    }

    fn offset(&self) -> T {
        self.pin_value
    }
}

/// Checked atom evaluation. `v = 0` yields the boundary limit of the formula.
pub fn eval_atom<T: Scalar>(family: &BasisFamily<T>, x: T, v: T) -> Result<T> {
    if !(v >= T::zero()) || !v.is_finite() {
        return Err(invalid(format!("atom parameter must be a finite non-negative number, got v = {v}")));
    }
    let start: T = family.kind.domain_start();
    if !(x >= start) {
        return Err(invalid(format!(
            "{:?} atoms are defined for x ≥ {start}, got x = {x}",
            family.kind
        )));
    }
    Ok(family.kind.value(x, v))
}

/// A single model term `u φ(x, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term<T> {
    pub u: T,
    pub v: T,
}

/// How candidate values are distributed over `[c, d]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    /// Constant ratio between neighbours.
    #[default]
    Geometric,
    /// Constant difference between neighbours.
    Uniform,
}

/// Sorted, strictly positive candidate values for the nonlinear parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet<T> {
    values: Vec<T>,
    c: T,
    d: T,
}

impl<T: Scalar> CandidateSet<T> {
    /// Wraps explicit values; they must be positive and sorted.
    pub fn from_values(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("candidate set must not be empty"));
        }
        if values.iter().any(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(invalid("candidate values must be finite and strictly positive"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("candidate values must be sorted ascending"));
        }
        let c = values[0];
        let d = values[values.len() - 1];
        Ok(CandidateSet { values, c, d })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn d(&self) -> T {
        self.d
    }
}

/// `l` values covering `[c, d]` inclusive.
pub fn build_candidates<T: Scalar>(c: T, d: T, l: usize, spacing: Spacing) -> Result<CandidateSet<T>> {
    if !(c > T::zero()) {
        return Err(invalid(format!("candidate interval requires c > 0 (atoms need v > 0), got c = {c}")));
    }
    if !(c < d) || !d.is_finite() {
        return Err(invalid(format!("candidate interval requires c < d, got [{c}, {d}]")));
    }
    if l < 2 {
        return Err(invalid(format!("candidate set needs l ≥ 2 values, got {l}")));
    }
    let last = T::from_count(l - 1);
    let mut values: Vec<T> = match spacing {
        Spacing::Geometric => {
            let ratio = d / c;
            (0..l).map(|k| c * ratio.powf(T::from_count(k) / last)).collect()
        }
        Spacing::Uniform => {
            let width = d - c;
            (0..l).map(|k| c + width * (T::from_count(k) / last)).collect()
        }
    };
    values[0] = c;
    values[l - 1] = d;
    CandidateSet::from_values(values)
}

/// Function being approximated.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetFunction<T> {
    /// `x^{−α}` for `x ≥ 1`.
    PowerNeg { alpha: T },
    /// `exp(−x^α)` for `x ≥ 0`.
    StretchedExp { alpha: T },
    /// `offset + Σ u_i φ(x, v_i)` built from known atoms; used for recovery checks.
    Planted { kind: AtomKind, offset: T, terms: Vec<Term<T>> },
}

impl<T: Scalar> TargetFunction<T> {
    pub fn power_neg(alpha: T) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(TargetFunction::PowerNeg { alpha })
    }

    pub fn stretched_exp(alpha: T) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(TargetFunction::StretchedExp { alpha })
    }

    pub fn planted(kind: AtomKind, offset: T, terms: Vec<Term<T>>) -> Result<Self> {
        if terms.iter().any(|t| !(t.v >= T::zero()) || !t.u.is_finite() || !t.v.is_finite()) {
            return Err(invalid("planted terms need finite u and non-negative v"));
        }
        Ok(TargetFunction::Planted { kind, offset, terms })
    }

    pub fn alpha(&self) -> Option<T> {
        match *self {
            TargetFunction::PowerNeg { alpha } | TargetFunction::StretchedExp { alpha } => Some(alpha),
            TargetFunction::Planted { .. } => None,
        }
    }

    pub fn domain_start(&self) -> T {
        match self {
            TargetFunction::PowerNeg { .. } => T::one(),
            TargetFunction::StretchedExp { .. } => T::zero(),
            TargetFunction::Planted { kind, .. } => kind.domain_start(),
        }
    }

    /// Value without domain checks.
    #[inline]
    pub fn value(&self, x: T) -> T {
        match self {
            TargetFunction::PowerNeg { alpha } => x.powf(-*alpha),
            TargetFunction::StretchedExp { alpha } => (-x.powf(*alpha)).exp(),
            TargetFunction::Planted { kind, offset, terms } => {
                terms.iter().fold(*offset, |acc, t| acc + t.u * kind.value(x, t.v))
            }
        }
    }
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        Err(invalid(format!("exponent alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Checked target evaluation.
pub fn eval_target<T: Scalar>(f: &TargetFunction<T>, x: T) -> Result<T> {
    let start = f.domain_start();
    if !(x >= start) || x.is_nan() {
        return Err(invalid(format!("target is evaluated for x ≥ {start}, got x = {x}")));
    }
    Ok(f.value(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn family(kind: AtomKind) -> BasisFamily<f64> {
        let pin = if kind.is_pinned() { 1.0 } else { 0.0 };
        BasisFamily::new(kind, pin).unwrap()
    }

    #[test]
    fn raw_rational_limit_at_zero_parameter() {
        let f = family(AtomKind::RationalRaw);
        assert_eq!(eval_atom(&f, 123.0, 0.0).unwrap(), 1.0);
        assert_eq!(eval_atom(&f, 0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn pinned_rational_vanishes_at_one() {
        let f = family(AtomKind::RationalPinned);
        for &v in &[1e-15, 1e-3, 0.5, 1.0, 37.0, 1e8] {
            assert_eq!(eval_atom(&f, 1.0, v).unwrap(), 0.0);
        }
    }

    #[test]
    fn pinned_exponential_value() {
        let f = family(AtomKind::ExpPinned);
        let got = eval_atom(&f, 2.0, 2f64.ln()).unwrap();
        let independent = 0.25 - 1.0;
        assert!((got - independent).abs() < 1e-15, "{got}");
    }

    #[test]
    fn pinned_rational_matches_difference_form() {
        let f = family(AtomKind::RationalPinned);
        for &(x, v) in &[(2.0, 0.5), (10.0, 3.0), (1e6, 1e-2)] {
            let direct = 1.0 / (1.0 + v * x) - 1.0 / (1.0 + v);
            let got = eval_atom(&f, x, v).unwrap();
            assert!((got - direct).abs() <= 1e-15 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_negative_parameter_and_out_of_domain() {
        let f = family(AtomKind::RationalPinned);
        assert!(eval_atom(&f, 2.0, -1.0).is_err());
        assert!(eval_atom(&f, 0.5, 1.0).is_err());
        assert!(eval_atom(&family(AtomKind::ExpPinned), -0.1, 1.0).is_err());
        assert!(BasisFamily::new(AtomKind::ExpRaw, 1.0).is_err());
    }

    #[test]
    fn geometric_candidates() {
        let s = build_candidates(1.0, 100.0, 3, Spacing::Geometric).unwrap();
        assert_eq!(s.values(), &[1.0, 10.0, 100.0]);

        let s = build_candidates(1e-4f64, 1e4, 1000, Spacing::Geometric).unwrap();
        assert_eq!(s.len(), 1000);
        assert_eq!(s.values()[0], 1e-4);
        assert_eq!(s.values()[999], 1e4);
        let r = s.values()[1] / s.values()[0];
        for w in s.values().windows(2) {
            assert!(((w[1] / w[0]) - r).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_candidates() {
        let s = build_candidates(1.0, 2.0, 5, Spacing::Uniform).unwrap();
        assert_eq!(s.values(), &[1.0, 1.25, 1.5, 1.75, 2.0]);
    }

    #[test]
    fn candidate_errors() {
        assert!(build_candidates(0.0, 1.0, 10, Spacing::Geometric).is_err());
        assert!(build_candidates(-1.0, 1.0, 10, Spacing::Uniform).is_err());
        assert!(build_candidates(2.0, 1.0, 10, Spacing::Geometric).is_err());
        assert!(build_candidates(1.0, 2.0, 1, Spacing::Geometric).is_err());
    }

    #[test]
    fn target_values() {
        let p = TargetFunction::power_neg(0.5).unwrap();
        assert_eq!(eval_target(&p, 4.0).unwrap(), 0.5);
        let p = TargetFunction::power_neg(0.25).unwrap();
        assert_eq!(eval_target(&p, 16.0).unwrap(), 0.5);
        let s = TargetFunction::stretched_exp(0.5).unwrap();
        assert_eq!(eval_target(&s, 0.0).unwrap(), 1.0);
        assert!(eval_target(&p, 0.5).is_err());
        assert!(TargetFunction::power_neg(1.0).is_err());
        assert!(TargetFunction::stretched_exp(0.0).is_err());
    }

    #[test]
    fn pin_value_is_target_at_pin_abscissa() {
        let t = TargetFunction::power_neg(0.3).unwrap();
        let f = BasisFamily::for_target(AtomKind::RationalPinned, &t).unwrap();
        assert_eq!(f.pin_value(), 1.0);
        let f = BasisFamily::for_target(AtomKind::RationalRaw, &t).unwrap();
        assert_eq!(f.pin_value(), 0.0);
    }

    proptest! {
        #[test]
        fn pinned_atoms_vanish_exactly(v in 1e-15f64..1e6) {
            prop_assert_eq!(AtomKind::RationalPinned.value(1.0, v), 0.0);
            prop_assert_eq!(AtomKind::ExpPinned.value(0.0, v), 0.0);
        }

        #[test]
        fn pinned_atoms_are_non_positive(x in 0.0f64..1e12, v in 1e-12f64..1e4) {
            prop_assert!(AtomKind::ExpPinned.value(x, v) <= 0.0);
            prop_assert!(AtomKind::RationalPinned.value(x + 1.0, v) <= 0.0);
        }

        #[test]
        fn pinned_exponential_decreases_in_parameter(
            x in 1e-3f64..1e1, v in 1e-3f64..1.0, dv in 1e-3f64..1.0,
        ) {
            prop_assert!(AtomKind::ExpPinned.value(x, v + dv) < AtomKind::ExpPinned.value(x, v));
        }

        // The pinned rational atom decreases in v only up to v = 1/sqrt(x),
        // where it attains its minimum, and increases back toward zero after.
        #[test]
        fn pinned_rational_is_unimodal_in_parameter(
            x in 1.5f64..1e6, s in 0.01f64..0.9, t in 0.01f64..0.9,
        ) {
            let turn = 1.0 / x.sqrt();
            let (lo, hi) = if s < t { (s, t) } else { (t, s) };
            prop_assume!(hi - lo > 1e-3);
            let phi = |v: f64| AtomKind::RationalPinned.value(x, v);
            prop_assert!(phi(hi * turn) < phi(lo * turn));
            prop_assert!(phi(turn / hi) < phi(turn / lo));
        }
    }
}
