//! Midpoint quadrature grids on `[a, b]` under a monotone change of variable.
//!
//! The interval is mapped to `[θ(a), θ(b)]`, split into `n` equal parts, and the
//! nodes are the images of the part midpoints. Each weight folds the residual
//! weight ϱ and the Jacobian `dx/dθ` into the rectangle-rule measure, so
//! `Σ w_j g(x_j)` approximates `∫ ϱ(x) g(x) dx`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Change of variable `x = x(θ)` used to place nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    /// `x = θ`.
    Identity,
    /// `x = exp(θ)`; requires `a ≥ 1`.
    Exp,
    /// `x = exp(θ) − 1`; requires `a ≥ 0`.
    ExpMinusOne,
}

impl TransformKind {
    pub fn validate_interval<T: Scalar>(self, a: T, b: T) -> Result<()> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(invalid(format!("interval endpoints must be finite, got [{a}, {b}]")));
        }
        if !(a < b) {
            return Err(invalid(format!("interval requires a < b, got [{a}, {b}]")));
        }
        match self {
            TransformKind::Identity => Ok(()),
            TransformKind::Exp if a < T::one() => Err(invalid(format!(
                "transform x = exp(θ) requires a ≥ 1 (θ = ln x ≥ 0), got a = {a}"
            ))),
            TransformKind::ExpMinusOne if a < T::zero() => Err(invalid(format!(
                "transform x = exp(θ) - 1 requires a ≥ 0 (θ = ln(1 + x) ≥ 0), got a = {a}"
            ))),
            _ => Ok(()),
        }
    }

    /// θ(x).
    pub fn to_theta<T: Scalar>(self, x: T) -> T {
        match self {
            TransformKind::Identity => x,
            TransformKind::Exp => x.ln(),
            TransformKind::ExpMinusOne => x.ln_1p(),
        }
    }

    /// x(θ).
    pub fn from_theta<T: Scalar>(self, theta: T) -> T {
        match self {
            TransformKind::Identity => theta,
            TransformKind::Exp => theta.exp(),
            TransformKind::ExpMinusOne => theta.exp_m1(),
        }
    }

    /// dx/dθ at θ.
    pub fn jacobian<T: Scalar>(self, theta: T) -> T {
        match self {
            TransformKind::Identity => T::one(),
            TransformKind::Exp | TransformKind::ExpMinusOne => theta.exp(),
        }
    }
}

/// Weight ϱ(x) of the residual functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// ϱ(x) = 1.
    Unit,
    /// ϱ(x) = 1/x.
    InverseX,
    /// ϱ(x) = 1/(1 + x).
    InverseOnePlusX,
}

impl WeightKind {
    pub fn eval<T: Scalar>(self, x: T) -> T {
        match self {
            WeightKind::Unit => T::one(),
            WeightKind::InverseX => x.recip(),
            WeightKind::InverseOnePlusX => (T::one() + x).recip(),
        }
    }

    fn validate_interval<T: Scalar>(self, a: T) -> Result<()> {
        match self {
            WeightKind::InverseX if a <= T::zero() => Err(invalid(format!(
                "weight 1/x requires x > 0 over the grid, got a = {a}"
            ))),
            WeightKind::InverseOnePlusX if a <= -T::one() => Err(invalid(format!(
                "weight 1/(1 + x) requires x > -1 over the grid, got a = {a}"
            ))),
            _ => Ok(()),
        }
    }
}

/// ϱ(x(θ))·x'(θ). The two pairings used by the experiments cancel to one exactly.
fn measure_density<T: Scalar>(transform: TransformKind, weight: WeightKind, theta: T, x: T) -> T {
    match (transform, weight) {
        (TransformKind::Exp, WeightKind::InverseX)
        | (TransformKind::ExpMinusOne, WeightKind::InverseOnePlusX)
        | (TransformKind::Identity, WeightKind::Unit) => T::one(),
        _ => weight.eval(x) * transform.jacobian(theta),
    }
}

/// Nodes and weights of a rectangle rule in the transformed variable.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
    a: T,
    b: T,
    beta: T,
    transform: TransformKind,
    weight: WeightKind,
}

impl<T: Scalar> QuadratureGrid<T> {
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// Length of the transformed interval, `θ(b) − θ(a)`.
    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn transform(&self) -> TransformKind {
        self.transform
    }

    pub fn weight_kind(&self) -> WeightKind {
        self.weight
    }

    /// `Σ w_j g(x_j)`.
    pub fn integrate(&self, mut g: impl FnMut(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * g(x))
    }
}

/// Builds the midpoint grid with `n` equal steps in θ.
pub fn build_grid<T: Scalar>(
    a: T,
    b: T,
    n: usize,
    transform: TransformKind,
    weight: WeightKind,
) -> Result<QuadratureGrid<T>> {
    if n == 0 {
        return Err(invalid("grid needs at least one node (n ≥ 1)"));
    }
    transform.validate_interval(a, b)?;
    weight.validate_interval(a)?;

    let theta_a = transform.to_theta(a);
    let theta_b = transform.to_theta(b);
    let beta = theta_b - theta_a;
    let step = beta / T::from_count(n);
    let half = T::lit(0.5);

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 0..n {
        let theta = theta_a + (T::from_count(j) + half) * step;
        let x = transform.from_theta(theta);
        nodes.push(x);
        weights.push(measure_density(transform, weight, theta, x) * step);
    }

    if nodes.windows(2).any(|w| !(w[0] < w[1])) || !(nodes[0] > a && nodes[n - 1] < b) {
        return Err(invalid(format!(
            "n = {n} too large to resolve distinct nodes on [{a}, {b}] in this precision"
        )));
    }

    Ok(QuadratureGrid { nodes, weights, a, b, beta, transform, weight })
}
