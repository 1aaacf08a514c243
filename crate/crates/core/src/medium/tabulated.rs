//! Coupling density `g(w) = nu^2(w) / rho` sampled on a positive, ascending
//! grid. Linear between samples and zero outside the grid.
//!
//! Because `g` is piecewise linear, both dispersion integrals have closed
//! forms on every segment; they are summed segment by segment.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{CasimirError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct TabulatedCoupling {
    omega: Vec<f64>,
    g: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    omega: Vec<f64>,
    g: Vec<f64>,
}

impl TryFrom<RawTable> for TabulatedCoupling {
    type Error = CasimirError;

    fn try_from(raw: RawTable) -> Result<Self> {
        TabulatedCoupling::new(raw.omega, raw.g)
    }
}

impl From<TabulatedCoupling> for RawTable {
    fn from(t: TabulatedCoupling) -> Self {
        RawTable {
            omega: t.omega,
            g: t.g,
        }
    }
}

impl TabulatedCoupling {
    pub fn new(omega: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        if omega.len() != g.len() {
            return Err(CasimirError::invalid(
                "g",
                format!(
                    "length {} does not match omega length {}",
                    g.len(),
                    omega.len()
                ),
            ));
        }
        if omega.len() < 2 {
            return Err(CasimirError::invalid("omega", "needs at least two samples"));
        }
        for (i, w) in omega.iter().enumerate() {
            if !(w.is_finite() && *w > 0.0) {
                return Err(CasimirError::invalid(
                    format!("omega[{i}]"),
                    "must be finite and > 0",
                ));
            }
            if i > 0 && *w <= omega[i - 1] {
                return Err(CasimirError::invalid(
                    format!("omega[{i}]"),
                    "grid must be strictly ascending",
                ));
            }
        }
        for (i, v) in g.iter().enumerate() {
            if !(v.is_finite() && *v >= 0.0) {
                return Err(CasimirError::invalid(
                    format!("g[{i}]"),
                    "must be finite and >= 0",
                ));
            }
        }
        Ok(TabulatedCoupling { omega, g })
    }

    /// Samples `coupling` at the given grid points.
    pub fn from_fn<F: Fn(f64) -> f64>(grid: Vec<f64>, coupling: F) -> Result<Self> {
        let g = grid.iter().map(|&w| coupling(w)).collect();
        TabulatedCoupling::new(grid, g)
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn max_frequency(&self) -> f64 {
        *self.omega.last().expect("validated non-empty")
    }

    pub fn is_zero(&self) -> bool {
        self.g.iter().all(|&v| v == 0.0)
    }

    /// Interpolated coupling, zero outside the grid.
    pub fn coupling(&self, w: f64) -> f64 {
        let first = self.omega[0];
        let last = self.max_frequency();
        if !(w >= first && w <= last) {
            return 0.0;
        }
        let i = self.omega.partition_point(|&x| x <= w);
        if i == self.omega.len() {
            return self.g[i - 1];
        }
        let (w0, w1) = (self.omega[i - 1], self.omega[i]);
        let t = (w - w0) / (w1 - w0);
        self.g[i - 1] + t * (self.g[i] - self.g[i - 1])
    }

    fn segments(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.omega
            .windows(2)
            .zip(self.g.windows(2))
            .map(|(w, g)| (w[0], w[1], g[0], g[1]))
    }

    /// `int g(w) / (w^2 + xi^2) dw` over the grid support.
    pub fn chi_bar(&self, xi: f64) -> f64 {
        let mut total = 0.0;
        for (a, b, ga, gb) in self.segments() {
            if ga == 0.0 && gb == 0.0 {
                continue;
            }
            let slope = (gb - ga) / (b - a);
            let intercept = ga - slope * a;
            let piece = if xi == 0.0 {
                // int (c0 + c1 w) / w^2 = c0 (1/a - 1/b) + c1 ln(b/a)
                intercept * (b - a) / (a * b) + slope * (b / a).ln()
            } else {
                // int (c0 + c1 w)/(w^2 + xi^2) = c0/xi atan(w/xi) + c1/2 ln(w^2 + xi^2)
                let atan_diff = ((b - a) * xi).atan2(xi * xi + a * b);
                let log_ratio = ((b - a) * (b + a) / (a * a + xi * xi)).ln_1p();
                intercept / xi * atan_diff + 0.5 * slope * log_ratio
            };
            total += piece;
        }
        total.max(0.0)
    }

    /// `Im chi(w) = pi g(w) / (2 w)` from the retarded prescription.
    pub fn im_chi(&self, w: f64) -> f64 {
        FRAC_PI_2 * self.coupling(w) / w
    }

    /// Retarded `chi(w)`: principal value of `int g(w')/(w'^2 - w^2) dw'`
    /// plus `i pi g(w) / (2w)`.
    pub fn chi_real_axis(&self, w: f64) -> Result<Complex64> {
        let first = self.omega[0];
        let last = self.max_frequency();
        if (w == first && self.g[0] != 0.0) || (w == last && *self.g.last().unwrap() != 0.0) {
            return Err(CasimirError::Pole {
                kind: "tabulated chi",
                k: 0.0,
                freq: w,
                eta: 0.0,
            });
        }
        // On each segment g(w') = g_s(w) + c1 (w' - w), where g_s is the
        // segment's linear function continued to w, so
        //   g(w')/(w'^2 - w^2) = g_s(w)/(2w) [1/(w'-w) - 1/(w'+w)] + c1/(w'+w).
        // The ln|w' - w| pieces cancel in the principal value wherever g is
        // continuous, so they are dropped at w' = w.
        let mut re = 0.0;
        for (a, b, ga, gb) in self.segments() {
            let slope = (gb - ga) / (b - a);
            let g_at = ga + slope * (w - a);
            let antiderivative = |x: f64| -> f64 {
                let near = (x - w).abs();
                let log_near = if near == 0.0 { 0.0 } else { near.ln() };
                g_at / (2.0 * w) * (log_near - (x + w).ln()) + slope * (x + w).ln()
            };
            re += antiderivative(b) - antiderivative(a);
        }
        Ok(Complex64::new(re, self.im_chi(w)))
    }
}
