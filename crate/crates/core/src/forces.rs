//! Casimir force per unit area between the plates.
//!
//! Three routes are provided:
//!
//! * [`force_field_bc`]: boundary conditions on the field (and, equivalently,
//!   on field and matter together). The transverse integral is done in closed
//!   form with polylogarithms, leaving one adaptive pass over `p0`.
//! * [`force_polarization_bc`]: boundary conditions on the polarization only,
//!   integrated over `(p0, q)` directly.
//! * [`force_via_action_fd`]: central difference of the per-mode log
//!   determinant integrated over all modes.
//!
//! All forces are attractive-negative. `E(p0, q) = sqrt(n^2(p0) p0^2 + q^2)`
//! throughout.
//!
//! Imposing conditions on both the field and the matter gives the same
//! determinant H-dependence as imposing them on the field alone: the matter
//! block of the boundary matrix is built from the reservoir propagator, whose
//! gap entries vanish (see [`reservoir_gap_entry`]), so it only contributes an
//! H-independent factor. That case therefore runs through [`force_field_bc`].

use std::cell::RefCell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::medium::{FieldKind, Medium};
use crate::propagators::{g_omega_euclidean, mode_energy_sq, reservoir_gap_entry};
use crate::quadrature::{
    inner_mode_integral, integrate_1d, integrate_2d, Domain, IntegralResult, QuadratureSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// Conditions on the field; also covers conditions on field and matter.
    Field,
    /// Conditions on the polarization field only.
    Polarization,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceQuery {
    pub medium: Medium,
    pub kind: FieldKind,
    pub bc: BoundaryCondition,
    pub separation: f64,
    pub spec: QuadratureSpec,
    /// Number of independent polarizations summed for EM fields (1 or 2).
    pub em_polarization_multiplicity: u8,
}

impl ForceQuery {
    pub fn new(medium: Medium, kind: FieldKind, separation: f64) -> Self {
        ForceQuery {
            medium,
            kind,
            bc: BoundaryCondition::Field,
            separation,
            spec: QuadratureSpec::default(),
            em_polarization_multiplicity: match kind {
                FieldKind::Scalar => 1,
                FieldKind::Em => 2,
            },
        }
    }

    pub fn with_bc(mut self, bc: BoundaryCondition) -> Self {
        self.bc = bc;
        self
    }

    pub fn with_spec(mut self, spec: QuadratureSpec) -> Self {
        self.spec = spec;
        self
    }

    pub fn with_separation(mut self, separation: f64) -> Self {
        self.separation = separation;
        self
    }

    pub fn with_multiplicity(mut self, multiplicity: u8) -> Self {
        self.em_polarization_multiplicity = multiplicity;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.separation > 0.0 && self.separation.is_finite()) {
            return Err(CasimirError::domain(
                "force",
                format!("H = {} must be > 0", self.separation),
            ));
        }
        match (self.kind, self.em_polarization_multiplicity) {
            (FieldKind::Scalar, 1) | (FieldKind::Em, 1) | (FieldKind::Em, 2) => {}
            (kind, m) => {
                return Err(CasimirError::domain(
                    "force",
                    format!("multiplicity {m} not allowed for {kind:?} field"),
                ))
            }
        }
        self.spec.validate()?;
        self.medium.validate()?;
        if self.kind == FieldKind::Em && !self.medium.magnetic.is_zero() {
            self.medium.check_magnetic_stability()?;
        }
        Ok(())
    }

    fn multiplicity(&self) -> f64 {
        f64::from(self.em_polarization_multiplicity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceResult {
    pub separation: f64,
    pub force_per_area: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// Force over the vacuum force for the same field and multiplicity.
    pub vacuum_ratio: f64,
    pub converged: bool,
}

/// Ideal-conductor force without a medium: `-pi^2 / (480 H^4)` for a scalar
/// field and twice that for the EM field.
pub fn vacuum_force_analytic(kind: FieldKind, separation: f64) -> f64 {
    let scalar = -PI * PI / (480.0 * separation.powi(4));
    match kind {
        FieldKind::Scalar => scalar,
        FieldKind::Em => 2.0 * scalar,
    }
}

fn scalar_vacuum(separation: f64) -> f64 {
    vacuum_force_analytic(FieldKind::Scalar, separation)
}

// Integrand failures cannot unwind through the integrator; the first one is
// parked here and the integrand returns 0 from then on.
struct FirstError(RefCell<Option<CasimirError>>);

impl FirstError {
    fn new() -> Self {
        FirstError(RefCell::new(None))
    }

    fn guard(&self, value: Result<f64>) -> f64 {
        if self.0.borrow().is_some() {
            return 0.0;
        }
        match value {
            Ok(v) => v,
            Err(e) => {
                *self.0.borrow_mut() = Some(e);
                0.0
            }
        }
    }

    fn into_result<T>(self, value: T) -> Result<T> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => Ok(value),
        }
    }
}

fn half_decay_domain(separation: f64) -> Domain {
    Domain::semi_infinite(0.0).with_scale(0.5 / separation)
}

fn finish(query: &ForceQuery, raw: IntegralResult, prefactor: f64) -> ForceResult {
    let force = prefactor * raw.value;
    ForceResult {
        separation: query.separation,
        force_per_area: force + 0.0,
        error_estimate: prefactor.abs() * raw.error_estimate,
        evaluations: raw.evaluations,
        vacuum_ratio: force / (query.multiplicity() * scalar_vacuum(query.separation)) + 0.0,
        converged: raw.converged,
    }
}

/// `F(H) = -(m / 2 pi^2) int_0^inf dp0 I3(n(p0) p0, H)` where `I3` is
/// [`inner_mode_integral`] and `m` the polarization multiplicity.
pub fn force_field_bc(query: &ForceQuery) -> Result<ForceResult> {
    query.validate()?;
    if query.bc != BoundaryCondition::Field {
        return Err(CasimirError::domain(
            "force_field_bc",
            "query asks for polarization boundary conditions",
        ));
    }
    let h = query.separation;
    let failure = FirstError::new();
    let raw = integrate_1d(
        |p0| {
            failure.guard(
                query
                    .medium
                    .refractive_index(query.kind, p0)
                    .and_then(|n| inner_mode_integral(n * p0, h)),
            )
        },
        half_decay_domain(h),
        &query.spec,
    );
    let mut result = finish(query, raw, -query.multiplicity() / (2.0 * PI * PI));
    // The single pass has no inner error to add; it counts its own samples.
    result.evaluations = raw.evaluations;
    failure.into_result(result)
}

/// Absorption entering the polarization-boundary integrand: `Im chi` at the
/// real frequency `omega = p0`, from the coupling density. Alternative
/// readings of this term only need to change this function.
pub fn polarization_absorption(medium: &Medium, p0: f64) -> Result<f64> {
    if p0 == 0.0 || medium.electric.is_zero() {
        return Ok(0.0);
    }
    medium.electric.im_chi_real_axis(p0)
}

/// `q chi_bar^2 E / (alpha e^(2EH) - 1)` with `alpha = E Im chi + chi_bar^2`.
/// Zero wherever `chi_bar` vanishes.
pub fn polarization_integrand(medium: &Medium, p0: f64, q: f64, separation: f64) -> Result<f64> {
    let chi = medium.electric.chi_bar(p0)?;
    if chi == 0.0 {
        return Ok(0.0);
    }
    let energy = mode_energy_sq(medium, FieldKind::Scalar, p0, q)?.sqrt();
    let alpha = energy * polarization_absorption(medium, p0)? + chi * chi;
    let x = 2.0 * energy * separation;
    if x > 700.0 {
        return Ok(0.0);
    }
    // alpha e^x - 1 = alpha (e^x - 1) + (alpha - 1)
    let denominator = alpha * x.exp_m1() + (alpha - 1.0);
    if denominator.is_nan() || denominator <= 0.0 {
        return Err(CasimirError::InvalidRegime { p0, q, denominator });
    }
    Ok(q * chi * chi * energy / denominator)
}

/// `F(H) = -(1 / 2 pi^2) int dp0 int q dq chi_bar^2 E / (alpha e^(2EH) - 1)`,
/// scalar field only.
pub fn force_polarization_bc(query: &ForceQuery) -> Result<ForceResult> {
    query.validate()?;
    if query.kind != FieldKind::Scalar {
        return Err(CasimirError::domain(
            "force_polarization_bc",
            "polarization boundary conditions are implemented for the scalar field",
        ));
    }
    if query.bc != BoundaryCondition::Polarization {
        return Err(CasimirError::domain(
            "force_polarization_bc",
            "query asks for field boundary conditions",
        ));
    }
    let h = query.separation;
    if query.medium.electric.is_zero() {
        return Ok(ForceResult {
            separation: h,
            force_per_area: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            vacuum_ratio: 0.0,
            converged: true,
        });
    }
    let failure = FirstError::new();
    let raw = integrate_2d(
        |p0, q| failure.guard(polarization_integrand(&query.medium, p0, q, h)),
        half_decay_domain(h),
        half_decay_domain(h),
        &query.spec,
    );
    failure.into_result(finish(query, raw, -1.0 / (2.0 * PI * PI)))
}

/// Dispatches on `query.bc`.
pub fn force(query: &ForceQuery) -> Result<ForceResult> {
    match query.bc {
        BoundaryCondition::Field => force_field_bc(query),
        BoundaryCondition::Polarization => force_polarization_bc(query),
    }
}

/// Separation-dependent part of `ln det` of the per-mode boundary matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeLogDet {
    pub energy: f64,
    pub separation: f64,
    pub value: f64,
}

fn check_mode(energy: f64, separation: f64) -> Result<()> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(CasimirError::domain(
            "mode_logdet",
            format!("E = {energy} must be > 0"),
        ));
    }
    if separation.is_nan() || separation <= 0.0 {
        return Err(CasimirError::domain(
            "mode_logdet",
            format!("H = {separation}: the coincident-plate determinant is singular"),
        ));
    }
    Ok(())
}

// ln det [[d, o], [o, d]] - ln d^2
fn ratio_logdet(diagonal: f64, off_diagonal: f64) -> f64 {
    let ratio = off_diagonal / diagonal;
    (-ratio * ratio).ln_1p()
}

/// Dirichlet conditions: the matrix entries are the gap kernel
/// `exp(-E|z|)/(2E)` at `z = 0` and `z = H`, giving `ln(1 - exp(-2EH))`.
pub fn mode_logdet(energy: f64, separation: f64) -> Result<ModeLogDet> {
    check_mode(energy, separation)?;
    let kernel = |z: f64| (-energy * z).exp() / (2.0 * energy);
    Ok(ModeLogDet {
        energy,
        separation,
        value: ratio_logdet(kernel(0.0), kernel(separation)),
    })
}

/// Neumann conditions: the entries are `-d^2/dz^2` of the kernel,
/// `-E exp(-E|z|)/2`, whose coincident value diverges. Only the ratio of the
/// gap entry to the diagonal enters the force, so the diagonal is taken as
/// the smooth part `-E/2`; the result coincides with [`mode_logdet`].
pub fn mode_logdet_neumann(energy: f64, separation: f64) -> Result<ModeLogDet> {
    check_mode(energy, separation)?;
    let kernel = |z: f64| -0.5 * energy * (-energy * z).exp();
    Ok(ModeLogDet {
        energy,
        separation,
        value: ratio_logdet(kernel(0.0), kernel(separation)),
    })
}

/// Energy per unit area, `(m / 4 pi^2) int dp0 int q dq ln(1 - exp(-2EH))`.
/// Its negative derivative in `H` is the field-boundary force.
pub fn casimir_energy(query: &ForceQuery) -> Result<IntegralResult> {
    query.validate()?;
    let h = query.separation;
    let failure = FirstError::new();
    let raw = integrate_2d(
        |p0, q| {
            failure.guard(mode_energy_sq(&query.medium, query.kind, p0, q).map(|e2| {
                let energy = e2.sqrt();
                q * (-(-2.0 * energy * h).exp()).ln_1p()
            }))
        },
        half_decay_domain(h),
        half_decay_domain(h),
        &query.spec,
    );
    let prefactor = query.multiplicity() / (4.0 * PI * PI);
    failure.into_result(IntegralResult {
        value: prefactor * raw.value,
        error_estimate: prefactor * raw.error_estimate,
        ..raw
    })
}

/// `-(S(H + delta) - S(H - delta)) / (2 delta)` with `S` from
/// [`casimir_energy`]. The result is accurate to `O(delta^2)` provided the
/// quadrature tolerance is well below the difference being resolved.
pub fn force_via_action_fd(query: &ForceQuery, delta: f64) -> Result<ForceResult> {
    query.validate()?;
    if query.bc != BoundaryCondition::Field {
        return Err(CasimirError::domain(
            "force_via_action_fd",
            "only field boundary conditions",
        ));
    }
    if !(delta > 0.0 && delta < query.separation) {
        return Err(CasimirError::domain(
            "force_via_action_fd",
            format!(
                "step {delta} must satisfy 0 < delta < H = {}",
                query.separation
            ),
        ));
    }
    let h = query.separation;
    let upper = casimir_energy(&query.clone().with_separation(h + delta))?;
    let lower = casimir_energy(&query.clone().with_separation(h - delta))?;
    let force = -(upper.value - lower.value) / (2.0 * delta);
    Ok(ForceResult {
        separation: h,
        force_per_area: force,
        error_estimate: (upper.error_estimate + lower.error_estimate) / (2.0 * delta),
        evaluations: upper.evaluations + lower.evaluations,
        vacuum_ratio: force / (query.multiplicity() * scalar_vacuum(h)),
        converged: upper.converged && lower.converged,
    })
}

/// Force in a non-dispersive dielectric `chi_e = chi0` relative to vacuum.
/// Should equal `1 / sqrt(1 + chi0)`.
pub fn nondispersive_scaling_check(chi0: f64, kind: FieldKind, separation: f64) -> Result<f64> {
    let medium = Medium::dielectric(crate::medium::SusceptibilityModel::Constant { chi0 })?;
    let result = force_field_bc(&ForceQuery::new(medium, kind, separation))?;
    Ok(result.force_per_area / vacuum_force_analytic(kind, separation))
}

/// Force from boundary conditions on the matter field alone.
///
/// The per-mode matrix is built from the reservoir propagator: diagonal
/// entries at coincidence, off-diagonal entries across the gap. The energy
/// is integrated over all modes and differentiated by central difference
/// exactly as in [`force_via_action_fd`].
pub fn matter_only_force(
    omega_res: f64,
    separation: f64,
    delta: f64,
    spec: &QuadratureSpec,
) -> Result<ForceResult> {
    spec.validate()?;
    if !(delta > 0.0 && delta < separation) {
        return Err(CasimirError::domain(
            "matter_only_force",
            format!("step {delta} must satisfy 0 < delta < H = {separation}"),
        ));
    }
    let energy_at = |h: f64| -> Result<IntegralResult> {
        let failure = FirstError::new();
        let raw = integrate_2d(
            |p0, q| {
                failure.guard((|| {
                    let diagonal = g_omega_euclidean(omega_res, p0)?;
                    let gap = reservoir_gap_entry(omega_res, p0, h)?;
                    Ok(q * ratio_logdet(diagonal, gap))
                })())
            },
            half_decay_domain(h),
            half_decay_domain(h),
            spec,
        );
        failure.into_result(raw)
    };
    let upper = energy_at(separation + delta)?;
    let lower = energy_at(separation - delta)?;
    let force = -(upper.value - lower.value) / (2.0 * delta) / (4.0 * PI * PI);
    Ok(ForceResult {
        separation,
        force_per_area: force + 0.0,
        error_estimate: (upper.error_estimate + lower.error_estimate) / (2.0 * delta),
        evaluations: upper.evaluations + lower.evaluations,
        vacuum_ratio: force / scalar_vacuum(separation) + 0.0,
        converged: upper.converged && lower.converged,
    })
}
