//! Numerical integration backbone.
//!
//! * [`integrate_1d`]: globally adaptive 21-point Gauss-Kronrod on finite
//!   intervals and on `[a, inf)` through a change of variables.
//! * [`integrate_2d`] / [`integrate_2d_oracle`]: nested 1D integration over
//!   the `(p0, q)` quarter plane. The oracle variant is intentionally free of
//!   any closed-form reduction and is used to cross-check the force routes.
//! * [`polylog`] and [`inner_mode_integral`]: the closed form of the
//!   Bose-Einstein-type mode integral.

mod gauss_kronrod;
mod polylog;

pub use polylog::{inner_mode_integral, polylog};

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use gauss_kronrod::{qk21, EVALS_PER_RULE};

/// Change of variables used to map `[a, inf)` onto the unit interval.
///
/// Both maps send `s in (0, 1]` to `x in [a, inf)` with `s -> 0` at infinity,
/// so the far tail is resolved in the well-conditioned neighbourhood of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SemiInfiniteTransform {
    /// `x = a - L ln s`. Flattens integrands decaying like `exp(-x/L)`.
    #[default]
    Exponential,
    /// `x = a + L (1 - s) / s`. Suited to power-law tails.
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub semi_infinite_transform: SemiInfiniteTransform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            semi_infinite_transform: SemiInfiniteTransform::Exponential,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(CasimirError::invalid("rel_tol", "must be finite and > 0"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(CasimirError::invalid("abs_tol", "must be finite and > 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(CasimirError::invalid("max_subdivisions", "must be >= 1"));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_transform(mut self, transform: SemiInfiniteTransform) -> Self {
        self.semi_infinite_transform = transform;
        self
    }

    pub fn with_max_subdivisions(mut self, max_subdivisions: usize) -> Self {
        self.max_subdivisions = max_subdivisions;
        self
    }

    /// Tolerance target for an integral of the given magnitude.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl IntegralResult {
    /// Turns an unconverged result into an integration-failure error.
    pub fn require_converged(self, spec: &QuadratureSpec) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(CasimirError::IntegrationFailure {
                achieved: self.error_estimate,
                requested: spec.target(self.value),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite {
        a: f64,
        b: f64,
    },
    /// `[start, inf)`; `scale` is the characteristic decay length of the
    /// integrand and sets the stretch of the change of variables.
    SemiInfinite {
        start: f64,
        scale: f64,
    },
}

impl Domain {
    pub fn finite(a: f64, b: f64) -> Self {
        Domain::Finite { a, b }
    }

    pub fn semi_infinite(start: f64) -> Self {
        Domain::SemiInfinite { start, scale: 1.0 }
    }

    pub fn with_scale(self, scale: f64) -> Self {
        match self {
            Domain::SemiInfinite { start, .. } => Domain::SemiInfinite { start, scale },
            finite => finite,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    order: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // Largest error first; ties broken by creation order for determinism.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.order.cmp(&self.order))
    }
}

fn adaptive<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    initial_pieces: usize,
    spec: &QuadratureSpec,
) -> IntegralResult {
    let mut heap = BinaryHeap::new();
    let mut order = 0;
    let mut evaluations = 0;
    let mut total_value = 0.0;
    let mut total_error = 0.0;

    let pieces = initial_pieces.max(1);
    let width = (b - a) / pieces as f64;
    for i in 0..pieces {
        let lo = a + width * i as f64;
        let hi = if i + 1 == pieces { b } else { lo + width };
        let est = qk21(f, lo, hi);
        evaluations += EVALS_PER_RULE;
        total_value += est.value;
        total_error += est.error;
        heap.push(Segment {
            a: lo,
            b: hi,
            value: est.value,
            error: est.error,
            order,
        });
        order += 1;
    }

    let mut exhausted = Vec::new();
    while total_error > spec.target(total_value) && heap.len() < spec.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval no longer splittable in floating point.
            exhausted.push(worst);
            continue;
        }
        let left = qk21(f, worst.a, mid);
        let right = qk21(f, mid, worst.b);
        evaluations += 2 * EVALS_PER_RULE;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: left.value,
            error: left.error,
            order,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: right.value,
            error: right.error,
            order: order + 1,
        });
        order += 2;
    }

    // Re-sum in a fixed order to shed the drift of the running totals.
    let mut segments: Vec<Segment> = heap.into_vec();
    segments.extend(exhausted);
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = segments.iter().map(|s| s.value).sum();
    let error: f64 = segments.iter().map(|s| s.error).sum();

    IntegralResult {
        value,
        error_estimate: error,
        evaluations,
        converged: error <= spec.target(value) && value.is_finite(),
    }
}

/// Adaptive integral of `f` over `domain`.
///
/// Endpoints are never evaluated. When the subdivision budget runs out the
/// best estimate is returned with `converged == false`.
pub fn integrate_1d<F: FnMut(f64) -> f64>(
    mut f: F,
    domain: Domain,
    spec: &QuadratureSpec,
) -> IntegralResult {
    match domain {
        Domain::Finite { a, b } => {
            if a == b {
                return IntegralResult {
                    value: 0.0,
                    error_estimate: 0.0,
                    evaluations: 0,
                    converged: true,
                };
            }
            adaptive(&mut f, a, b, 1, spec)
        }
        Domain::SemiInfinite { start, scale } => {
            let scale = if scale > 0.0 && scale.is_finite() {
                scale
            } else {
                1.0
            };
            let mut mapped = |s: f64| -> f64 {
                let (x, jacobian) = match spec.semi_infinite_transform {
                    SemiInfiniteTransform::Exponential => (start - scale * s.ln(), scale / s),
                    SemiInfiniteTransform::Rational => {
                        (start + scale * (1.0 - s) / s, scale / (s * s))
                    }
                };
                if !x.is_finite() {
                    return 0.0;
                }
                let fx = f(x);
                if fx == 0.0 {
                    0.0
                } else {
                    fx * jacobian
                }
            };
            adaptive(&mut mapped, 0.0, 1.0, 4, spec)
        }
    }
}

/// Nested integral `int_outer dp0 int_inner dq f(p0, q)`.
///
/// The inner integrals use the same tolerances as the outer one. The reported
/// error is the outer estimate plus the worst relative inner error applied to
/// the total; inner values below `abs_tol / rel_tol` count at that size.
pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    outer: Domain,
    inner: Domain,
    spec: &QuadratureSpec,
) -> IntegralResult {
    let inner_evaluations = Cell::new(0usize);
    let inner_rel_error = Cell::new(0.0f64);
    let inner_converged = Cell::new(true);

    let outer_result = integrate_1d(
        |p0| {
            let r = integrate_1d(|q| f(p0, q), inner, spec);
            inner_evaluations.set(inner_evaluations.get() + r.evaluations);
            // Inner integrals deep in the tail converge on abs_tol; measure
            // their error against the scale where the two tolerances meet.
            let floor = spec.abs_tol / spec.rel_tol;
            if r.error_estimate > 0.0 {
                let rel = r.error_estimate / r.value.abs().max(floor);
                if rel > inner_rel_error.get() {
                    inner_rel_error.set(rel);
                }
            }
            if !r.converged {
                inner_converged.set(false);
            }
            r.value
        },
        outer,
        spec,
    );

    let error = outer_result.error_estimate + inner_rel_error.get() * outer_result.value.abs();
    IntegralResult {
        value: outer_result.value,
        error_estimate: error,
        evaluations: inner_evaluations.get(),
        converged: outer_result.converged && inner_converged.get(),
    }
}

/// Brute-force integral of `f(p0, q)` over the quarter plane `[0, inf)^2`.
pub fn integrate_2d_oracle<F: FnMut(f64, f64) -> f64>(
    f: F,
    spec: &QuadratureSpec,
) -> IntegralResult {
    integrate_2d(
        f,
        Domain::semi_infinite(0.0),
        Domain::semi_infinite(0.0),
        spec,
    )
}
