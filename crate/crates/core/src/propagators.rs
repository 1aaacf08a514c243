//! Free and dressed two-point functions in Fourier space.
//!
//! Real-axis values use the retarded prescription `omega -> omega + i eta`
//! with an explicit, configurable `eta`; setting `eta = 0` turns every
//! on-shell evaluation into a [`CasimirError::Pole`]. Euclidean values
//! (`omega = i xi`) have no poles and are what the force routes consume.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::medium::{FieldKind, Medium};

pub const DEFAULT_ETA: f64 = 1e-8;

// Relative size below which a real-axis denominator counts as on-shell.
const POLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Real,
    Euclidean,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::Real => "real",
            Axis::Euclidean => "euclidean",
        }
    }
}

/// `(|k|, frequency)` on either axis. On the Euclidean axis `freq` is `xi >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumFrequencyPoint {
    pub k: f64,
    pub freq: f64,
    pub axis: Axis,
}

impl MomentumFrequencyPoint {
    pub fn real(k: f64, omega: f64) -> Self {
        MomentumFrequencyPoint {
            k,
            freq: omega,
            axis: Axis::Real,
        }
    }

    pub fn euclidean(k: f64, xi: f64) -> Self {
        MomentumFrequencyPoint {
            k,
            freq: xi,
            axis: Axis::Euclidean,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k >= 0.0 && self.k.is_finite()) {
            return Err(CasimirError::domain(
                "propagator point",
                format!("k = {} must be >= 0", self.k),
            ));
        }
        if !self.freq.is_finite() {
            return Err(CasimirError::domain(
                "propagator point",
                "frequency must be finite",
            ));
        }
        if self.axis == Axis::Euclidean && self.freq < 0.0 {
            return Err(CasimirError::domain(
                "propagator point",
                format!("Euclidean frequency {} must be >= 0", self.freq),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PropagatorKind {
    G0,
    Gomega,
    Gphiphi,
    GphiP,
    GphiM,
    GPP,
    GMM,
}

impl PropagatorKind {
    pub const ALL: [PropagatorKind; 7] = [
        PropagatorKind::G0,
        PropagatorKind::Gomega,
        PropagatorKind::Gphiphi,
        PropagatorKind::GphiP,
        PropagatorKind::GphiM,
        PropagatorKind::GPP,
        PropagatorKind::GMM,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PropagatorKind::G0 => "G0",
            PropagatorKind::Gomega => "Gomega",
            PropagatorKind::Gphiphi => "Gphiphi",
            PropagatorKind::GphiP => "GphiP",
            PropagatorKind::GphiM => "GphiM",
            PropagatorKind::GPP => "GPP",
            PropagatorKind::GMM => "GMM",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        PropagatorKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(name))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorValue {
    pub kind: PropagatorKind,
    pub axis: Axis,
    /// Purely real on the Euclidean axis.
    pub value: Complex64,
}

fn check_pole(
    denom: Complex64,
    scale: f64,
    eta: f64,
    kind: &'static str,
    k: f64,
    freq: f64,
) -> Result<()> {
    let on_shell = denom.norm() <= POLE_TOLERANCE * scale.max(1.0);
    if denom.norm() == 0.0 || (eta == 0.0 && on_shell) {
        return Err(CasimirError::Pole { kind, k, freq, eta });
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if eta >= 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(CasimirError::domain(
            "propagator",
            format!("eta = {eta} must be finite and >= 0"),
        ))
    }
}

// a^2 - (w + i eta)^2, with a^2 - w^2 factored to keep it exact near the cone.
fn shifted_difference(a: f64, w: f64, eta: f64) -> Complex64 {
    Complex64::new((a - w) * (a + w) + eta * eta, -2.0 * w * eta)
}

/// Free field propagator `1 / (k^2 - (omega + i eta)^2)`.
pub fn g0(k: f64, omega: f64, eta: f64) -> Result<Complex64> {
    check_eta(eta)?;
    if k == 0.0 && omega == 0.0 {
        return Err(CasimirError::Pole {
            kind: "G0",
            k,
            freq: omega,
            eta,
        });
    }
    let denom = shifted_difference(k, omega, eta);
    check_pole(denom, k * k + omega * omega, eta, "G0", k, omega)?;
    Ok(denom.inv())
}

/// Free field propagator at imaginary frequency, `1 / (k^2 + xi^2)`.
pub fn g0_euclidean(k: f64, xi: f64) -> Result<f64> {
    let denom = k * k + xi * xi;
    if denom == 0.0 {
        return Err(CasimirError::Pole {
            kind: "G0",
            k,
            freq: xi,
            eta: 0.0,
        });
    }
    Ok(1.0 / denom)
}

/// Reservoir oscillator propagator `1 / (omega_res^2 - (omega' + i eta)^2)`,
/// normalised by the density. It carries no momentum dependence.
pub fn g_omega(omega_res: f64, omega_prime: f64, eta: f64) -> Result<Complex64> {
    check_eta(eta)?;
    if !(omega_res > 0.0 && omega_res.is_finite()) {
        return Err(CasimirError::domain(
            "g_omega",
            format!("omega_res = {omega_res} must be > 0"),
        ));
    }
    let denom = shifted_difference(omega_res, omega_prime, eta);
    check_pole(
        denom,
        omega_res * omega_res,
        eta,
        "Gomega",
        0.0,
        omega_prime,
    )?;
    Ok(denom.inv())
}

pub fn g_omega_euclidean(omega_res: f64, xi: f64) -> Result<f64> {
    if !(omega_res > 0.0 && omega_res.is_finite()) {
        return Err(CasimirError::domain(
            "g_omega",
            format!("omega_res = {omega_res} must be > 0"),
        ));
    }
    Ok(1.0 / (omega_res * omega_res + xi * xi))
}

/// Entry of the reservoir boundary matrix between points a distance `h`
/// apart along the plate normal.
///
/// The reservoir propagator is independent of momentum, i.e. local in space
/// (proportional to `delta(x - x')`). Its value across a gap `h > 0` is
/// therefore identically zero; at `h = 0` the momentum-space coefficient is
/// returned (the coincident `delta(0)` factor is separation independent).
pub fn reservoir_gap_entry(omega_res: f64, xi: f64, h: f64) -> Result<f64> {
    if !(h >= 0.0 && h.is_finite()) {
        return Err(CasimirError::domain(
            "reservoir_gap_entry",
            format!("H = {h} must be >= 0"),
        ));
    }
    let local = g_omega_euclidean(omega_res, xi)?;
    Ok(if h == 0.0 { local } else { 0.0 })
}

/// Dressed field propagator.
///
/// Real axis: `1 / (k^2 (1 - chi_m) - (omega + i eta)^2 (1 + chi_e))`;
/// Euclidean: `1 / (k^2 (1 - chi_bar_m) + xi^2 (1 + chi_bar_e))`. For a scalar
/// field the magnetic response is dropped.
pub fn g_phiphi(
    medium: &Medium,
    kind: FieldKind,
    point: MomentumFrequencyPoint,
    eta: f64,
) -> Result<PropagatorValue> {
    point.validate()?;
    let k = point.k;
    let value = match point.axis {
        Axis::Euclidean => {
            let xi = point.freq;
            let chi_e = medium.electric.chi_bar(xi)?;
            let chi_m = match kind {
                FieldKind::Scalar => 0.0,
                FieldKind::Em => {
                    let chi_m = medium.magnetic.chi_bar(xi)?;
                    if chi_m >= 1.0 {
                        return Err(CasimirError::MediumInstability { xi, chi_m });
                    }
                    chi_m
                }
            };
            let denom = k * k * (1.0 - chi_m) + xi * xi * (1.0 + chi_e);
            if denom <= 0.0 {
                return Err(CasimirError::Pole {
                    kind: "Gphiphi",
                    k,
                    freq: xi,
                    eta: 0.0,
                });
            }
            Complex64::new(1.0 / denom, 0.0)
        }
        Axis::Real => {
            check_eta(eta)?;
            let omega = point.freq;
            let (chi_e, chi_m) = real_axis_responses(medium, kind, omega)?;
            let w = Complex64::new(omega, eta);
            let denom = k * k * (1.0 - chi_m) - w * w * (1.0 + chi_e);
            check_pole(denom, k * k + omega * omega, eta, "Gphiphi", k, omega)?;
            denom.inv()
        }
    };
    Ok(PropagatorValue {
        kind: PropagatorKind::Gphiphi,
        axis: point.axis,
        value,
    })
}

fn real_axis_responses(
    medium: &Medium,
    kind: FieldKind,
    omega: f64,
) -> Result<(Complex64, Complex64)> {
    let chi_e = if medium.electric.is_zero() {
        Complex64::new(0.0, 0.0)
    } else {
        medium.electric.chi_real_axis(omega)?
    };
    let chi_m = match kind {
        FieldKind::Em if !medium.magnetic.is_zero() => medium.magnetic.chi_real_axis(omega)?,
        _ => Complex64::new(0.0, 0.0),
    };
    Ok((chi_e, chi_m))
}

// Im chi is odd in omega.
fn noise_term(model: &crate::medium::SusceptibilityModel, omega: f64) -> Result<f64> {
    if omega == 0.0 || model.is_zero() {
        return Ok(0.0);
    }
    Ok(omega.signum() * model.im_chi_real_axis(omega.abs())?)
}

/// Real-axis correlators between the field, the polarization `P` and the
/// magnetization `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCorrelators {
    pub g_phi_p: Complex64,
    pub g_phi_m: Complex64,
    pub g_pp: Complex64,
    pub g_mm: Complex64,
}

impl CrossCorrelators {
    pub fn get(&self, kind: PropagatorKind) -> Option<Complex64> {
        match kind {
            PropagatorKind::GphiP => Some(self.g_phi_p),
            PropagatorKind::GphiM => Some(self.g_phi_m),
            PropagatorKind::GPP => Some(self.g_pp),
            PropagatorKind::GMM => Some(self.g_mm),
            _ => None,
        }
    }
}

/// ```text
/// G_phiP = i w chi_e G_phiphi
/// G_phiM = i |k| w chi_m G_phiphi
/// G_PP   = Im chi_e(w) + w^2 chi_e^2 G_phiphi
/// G_MM   = Im chi_m(w) + |k|^2 chi_m^2 G_phiphi
/// ```
///
/// `G_phiphi` here is the full magnetodielectric propagator. The extra
/// factor `w` in `G_phiM` (absent from the `chi_m^2` term of `G_MM`) is kept
/// as written; the two are not dimensionally parallel.
pub fn cross_correlators(
    medium: &Medium,
    point: MomentumFrequencyPoint,
    eta: f64,
) -> Result<CrossCorrelators> {
    point.validate()?;
    if point.axis != Axis::Real {
        return Err(CasimirError::domain(
            "cross_correlators",
            "cross-correlators are defined on the real frequency axis only",
        ));
    }
    let (k, omega) = (point.k, point.freq);
    let g = g_phiphi(medium, FieldKind::Em, point, eta)?.value;
    let (chi_e, chi_m) = real_axis_responses(medium, FieldKind::Em, omega)?;
    let i = Complex64::i();
    Ok(CrossCorrelators {
        g_phi_p: i * omega * chi_e * g,
        g_phi_m: i * k * omega * chi_m * g,
        g_pp: noise_term(&medium.electric, omega)? + omega * omega * chi_e * chi_e * g,
        g_mm: noise_term(&medium.magnetic, omega)? + k * k * chi_m * chi_m * g,
    })
}

/// Evaluates one correlator by name. `G0`, `Gomega` (with reservoir
/// frequency `omega_res`) and `Gphiphi` are available on both axes; the
/// cross-correlators on the real axis only.
pub fn evaluate(
    medium: &Medium,
    field: FieldKind,
    kind: PropagatorKind,
    point: MomentumFrequencyPoint,
    eta: f64,
    omega_res: f64,
) -> Result<PropagatorValue> {
    point.validate()?;
    let value = match (kind, point.axis) {
        (PropagatorKind::G0, Axis::Real) => g0(point.k, point.freq, eta)?,
        (PropagatorKind::G0, Axis::Euclidean) => g0_euclidean(point.k, point.freq)?.into(),
        (PropagatorKind::Gomega, Axis::Real) => g_omega(omega_res, point.freq, eta)?,
        (PropagatorKind::Gomega, Axis::Euclidean) => {
            g_omega_euclidean(omega_res, point.freq)?.into()
        }
        (PropagatorKind::Gphiphi, _) => g_phiphi(medium, field, point, eta)?.value,
        (other, _) => cross_correlators(medium, point, eta)?
            .get(other)
            .expect("remaining kinds are cross-correlators"),
    };
    Ok(PropagatorValue {
        kind,
        axis: point.axis,
        value,
    })
}

/// Partial sum `G0 sum_{n=0}^{N} r^n` of the Dyson series for the
/// electrically dressed propagator, `r = (omega + i eta)^2 chi_e(omega) G0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DysonPartialSum {
    pub value: Complex64,
    pub g0: Complex64,
    pub ratio: Complex64,
    pub order: usize,
    /// `|r| >= 1`: the series does not converge and `value` is meaningless
    /// as an approximation.
    pub diverged: bool,
}

impl DysonPartialSum {
    /// `|G0| |r|^(N+1) / (1 - |r|)`, the geometric tail bound.
    pub fn tail_bound(&self) -> f64 {
        let r = self.ratio.norm();
        if r >= 1.0 {
            f64::INFINITY
        } else {
            self.g0.norm() * r.powi(self.order as i32 + 1) / (1.0 - r)
        }
    }
}

pub fn dyson_ratio(
    medium: &Medium,
    k: f64,
    omega: f64,
    eta: f64,
) -> Result<(Complex64, Complex64)> {
    let free = g0(k, omega, eta)?;
    let chi_e = if medium.electric.is_zero() {
        Complex64::new(0.0, 0.0)
    } else {
        medium.electric.chi_real_axis(omega)?
    };
    let w = Complex64::new(omega, eta);
    Ok((free, w * w * chi_e * free))
}

pub fn dyson_partial_sum(
    medium: &Medium,
    point: MomentumFrequencyPoint,
    order: usize,
    eta: f64,
) -> Result<DysonPartialSum> {
    point.validate()?;
    if point.axis != Axis::Real {
        return Err(CasimirError::domain(
            "dyson_partial_sum",
            "series is evaluated on the real axis",
        ));
    }
    let (free, ratio) = dyson_ratio(medium, point.k, point.freq, eta)?;
    // Horner form: G0 (1 + r (1 + r (...))).
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..order {
        acc = 1.0 + ratio * acc;
    }
    Ok(DysonPartialSum {
        value: free * acc,
        g0: free,
        ratio,
        order,
        diverged: ratio.norm() >= 1.0,
    })
}

/// Fourier-space field propagator between the plates:
/// `G(p, H) = exp(-E H) / (2E)` with `E = sqrt(n^2(p0) p0^2 + q^2)`.
///
/// For EM fields the boundary matrix entries carry an extra factor
/// `mu_bar(p0)`; it does not depend on `H` and drops out of the force, so it
/// is reported separately in `mu_prefactor` rather than folded into `value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapKernel {
    pub energy: f64,
    pub separation: f64,
    pub value: f64,
    pub mu_prefactor: f64,
}

impl GapKernel {
    pub fn at(&self, separation: f64) -> f64 {
        (-self.energy * separation).exp() / (2.0 * self.energy)
    }
}

/// `E(p0, q)^2 = n^2(p0) p0^2 + q^2`.
pub fn mode_energy_sq(medium: &Medium, kind: FieldKind, p0: f64, q: f64) -> Result<f64> {
    // n^2 p0^2 -> 0 as p0 -> 0 for every model, including Drude.
    let temporal = if p0 == 0.0 {
        0.0
    } else {
        medium.refractive_index_sq(kind, p0)? * p0 * p0
    };
    Ok(temporal + q * q)
}

pub fn gap_kernel(
    medium: &Medium,
    kind: FieldKind,
    p0: f64,
    q: f64,
    separation: f64,
) -> Result<GapKernel> {
    if !(p0 >= 0.0 && q >= 0.0 && p0.is_finite() && q.is_finite()) {
        return Err(CasimirError::domain(
            "gap_kernel",
            "p0 and q must be finite and >= 0",
        ));
    }
    if !(separation >= 0.0 && separation.is_finite()) {
        return Err(CasimirError::domain(
            "gap_kernel",
            format!("H = {separation} must be >= 0"),
        ));
    }
    let energy = mode_energy_sq(medium, kind, p0, q)?.sqrt();
    if energy.is_nan() || energy <= 0.0 {
        return Err(CasimirError::DegenerateMode { p0, q });
    }
    let mu_prefactor = match kind {
        FieldKind::Scalar => 1.0,
        FieldKind::Em => medium.mu_bar(p0)?,
    };
    Ok(GapKernel {
        energy,
        separation,
        value: (-energy * separation).exp() / (2.0 * energy),
        mu_prefactor,
    })
}
