//! Susceptibility models of an oscillator-continuum medium.
//!
//! Every model is characterised by its coupling density `g(w) = nu^2(w)/rho`.
//! On the imaginary frequency axis the susceptibility is
//!
//! ```text
//! chi_bar(xi) = int_0^inf g(w) / (w^2 + xi^2) dw,      eps_bar = 1 + chi_bar
//! ```
//!
//! which is real and positive. On the real axis the retarded susceptibility
//! has `Im chi(w) = pi g(w) / (2w)`, and the dispersion relation
//! `chi_bar(xi) = (2/pi) int_0^inf w Im chi(w) / (w^2 + xi^2) dw` closes
//! exactly; [`SusceptibilityModel::kk_imaginary_axis`] evaluates that
//! integral numerically as an independent check of the closed forms.
//!
//! Natural units (`hbar = c = 1`) throughout.

mod file;
mod tabulated;

pub use file::{parse_medium_json, read_medium_file};
pub use tabulated::TabulatedCoupling;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};
use crate::quadrature::{
    integrate_1d, Domain, IntegralResult, QuadratureSpec, SemiInfiniteTransform,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SusceptibilityModel {
    /// Instantaneous, lossless response `chi(t) = chi0 delta(t)`.
    Constant {
        chi0: f64,
    },
    Lorentz {
        omega_p: f64,
        omega_0: f64,
        gamma: f64,
    },
    Drude {
        omega_p: f64,
        gamma: f64,
    },
    /// Coupling concentrated at one frequency: `g(w) = omega_p^2 delta(w - omega_0)`.
    SharpResonance {
        omega_p: f64,
        omega_0: f64,
    },
    TabulatedCoupling(TabulatedCoupling),
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CasimirError::invalid(
            field,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

fn non_negative(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(CasimirError::invalid(
            field,
            format!("must be finite and >= 0, got {v}"),
        ))
    }
}

impl SusceptibilityModel {
    pub fn zero() -> Self {
        SusceptibilityModel::Constant { chi0: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        use SusceptibilityModel::*;
        match *self {
            Constant { chi0 } => non_negative("chi0", chi0),
            Lorentz {
                omega_p,
                omega_0,
                gamma,
            } => {
                positive("omega_p", omega_p)?;
                positive("omega_0", omega_0)?;
                non_negative("gamma", gamma)
            }
            Drude { omega_p, gamma } => {
                positive("omega_p", omega_p)?;
                positive("gamma", gamma)
            }
            SharpResonance { omega_p, omega_0 } => {
                positive("omega_p", omega_p)?;
                positive("omega_0", omega_0)
            }
            // Validated at construction.
            TabulatedCoupling(_) => Ok(()),
        }
    }

    /// Identically vanishing response.
    pub fn is_zero(&self) -> bool {
        match self {
            SusceptibilityModel::Constant { chi0 } => *chi0 == 0.0,
            SusceptibilityModel::TabulatedCoupling(t) => t.is_zero(),
            _ => false,
        }
    }

    /// Whether the model has non-zero absorption on the real axis.
    pub fn is_lossy(&self) -> bool {
        match self {
            SusceptibilityModel::Lorentz { gamma, .. } => *gamma > 0.0,
            SusceptibilityModel::Drude { .. } => true,
            SusceptibilityModel::TabulatedCoupling(t) => !t.is_zero(),
            _ => false,
        }
    }

    /// Largest frequency parameter of the model; zero for `Constant`.
    pub fn max_frequency(&self) -> f64 {
        use SusceptibilityModel::*;
        match self {
            Constant { .. } => 0.0,
            Lorentz {
                omega_p,
                omega_0,
                gamma,
            } => omega_p.max(*omega_0).max(*gamma),
            Drude { omega_p, gamma } => omega_p.max(*gamma),
            SharpResonance { omega_p, omega_0 } => omega_p.max(*omega_0),
            TabulatedCoupling(t) => t.max_frequency(),
        }
    }

    /// Susceptibility on the imaginary axis, `chi_bar(xi) = chi(i xi)`.
    pub fn chi_bar(&self, xi: f64) -> Result<f64> {
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(CasimirError::domain(
                "chi_bar",
                format!("xi = {xi} must be finite and >= 0"),
            ));
        }
        use SusceptibilityModel::*;
        let value = match self {
            Constant { chi0 } => *chi0,
            Lorentz {
                omega_p,
                omega_0,
                gamma,
            } => omega_p * omega_p / (omega_0 * omega_0 + xi * xi + gamma * xi),
            Drude { omega_p, gamma } => {
                if xi == 0.0 {
                    return Err(CasimirError::domain(
                        "chi_bar",
                        "Drude response diverges at xi = 0",
                    ));
                }
                omega_p * omega_p / (xi * (xi + gamma))
            }
            SharpResonance { omega_p, omega_0 } => {
                omega_p * omega_p / (omega_0 * omega_0 + xi * xi)
            }
            TabulatedCoupling(t) => t.chi_bar(xi),
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(CasimirError::domain(
                "chi_bar",
                format!("non-finite value at xi = {xi}"),
            ))
        }
    }

    /// Retarded susceptibility `chi(w)` on the real axis.
    pub fn chi_real_axis(&self, omega: f64) -> Result<Complex64> {
        if !omega.is_finite() {
            return Err(CasimirError::domain(
                "chi_real_axis",
                "omega must be finite",
            ));
        }
        use SusceptibilityModel::*;
        let w = omega;
        match self {
            Constant { chi0 } => Ok(Complex64::new(*chi0, 0.0)),
            Lorentz {
                omega_p,
                omega_0,
                gamma,
            } => {
                let denom = Complex64::new(omega_0 * omega_0 - w * w, -gamma * w);
                if denom.norm() == 0.0 {
                    return Err(CasimirError::Pole {
                        kind: "chi",
                        k: 0.0,
                        freq: w,
                        eta: 0.0,
                    });
                }
                Ok(omega_p * omega_p / denom)
            }
            Drude { omega_p, gamma } => {
                if w == 0.0 {
                    return Err(CasimirError::domain(
                        "chi_real_axis",
                        "Drude response diverges at omega = 0",
                    ));
                }
                Ok(omega_p * omega_p / Complex64::new(-w * w, -gamma * w))
            }
            SharpResonance { omega_p, omega_0 } => {
                if w.abs() == *omega_0 {
                    return Err(CasimirError::UnsupportedDistribution("sharp-resonance chi"));
                }
                Ok(Complex64::new(
                    omega_p * omega_p / (omega_0 * omega_0 - w * w),
                    0.0,
                ))
            }
            TabulatedCoupling(t) => {
                if w <= 0.0 {
                    return Err(CasimirError::domain(
                        "chi_real_axis",
                        "tabulated model needs omega > 0",
                    ));
                }
                t.chi_real_axis(w)
            }
        }
    }

    /// Absorptive part `Im chi(w)` for `w > 0`.
    pub fn im_chi_real_axis(&self, omega: f64) -> Result<f64> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(CasimirError::domain(
                "im_chi_real_axis",
                format!("omega = {omega} must be > 0"),
            ));
        }
        use SusceptibilityModel::*;
        let w = omega;
        Ok(match self {
            Constant { .. } => 0.0,
            Lorentz {
                omega_p,
                omega_0,
                gamma,
            } => {
                let detuning = omega_0 * omega_0 - w * w;
                omega_p * omega_p * gamma * w / (detuning * detuning + gamma * gamma * w * w)
            }
            Drude { omega_p, gamma } => omega_p * omega_p * gamma / (w * (w * w + gamma * gamma)),
            SharpResonance { omega_0, .. } => {
                if w == *omega_0 {
                    return Err(CasimirError::UnsupportedDistribution(
                        "sharp-resonance Im chi",
                    ));
                }
                0.0
            }
            TabulatedCoupling(t) => t.im_chi(w),
        })
    }

    /// `chi_bar(xi)` recomputed from the absorption spectrum through the
    /// dispersion integral `(2/pi) int_0^inf w Im chi(w) / (w^2 + xi^2) dw`.
    ///
    /// The semi-infinite tail always uses the rational map: the integrand
    /// decays as a power law.
    pub fn kk_imaginary_axis(&self, xi: f64, quad: &QuadratureSpec) -> Result<IntegralResult> {
        quad.validate()?;
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(CasimirError::domain(
                "kk_imaginary_axis",
                format!("xi = {xi} must be >= 0"),
            ));
        }
        if !self.is_lossy() {
            return Err(CasimirError::domain(
                "kk_imaginary_axis",
                "model has no absorption; the dispersion integral is undefined",
            ));
        }

        let integrand = |w: f64| -> f64 {
            // w > 0 inside open rules; errors cannot occur for lossy models.
            let im = self.im_chi_real_axis(w).unwrap_or(0.0);
            std::f64::consts::FRAC_2_PI * w * im / (w * w + xi * xi)
        };

        let mut breakpoints: Vec<f64> = match self {
            SusceptibilityModel::TabulatedCoupling(t) => t.omega().to_vec(),
            SusceptibilityModel::Lorentz { omega_0, gamma, .. } => {
                vec![0.0, (omega_0 - gamma).max(0.0), *omega_0, omega_0 + gamma]
            }
            SusceptibilityModel::Drude { gamma, .. } => vec![0.0, *gamma],
            _ => unreachable!("lossless models rejected above"),
        };
        if xi > 0.0 && !matches!(self, SusceptibilityModel::TabulatedCoupling(_)) {
            breakpoints.push(xi);
        }
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();

        let pieces = breakpoints.len();
        let piece_spec = quad.with_abs_tol(quad.abs_tol / pieces as f64);
        let mut total = IntegralResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        };
        let mut add = |r: IntegralResult| {
            total.value += r.value;
            total.error_estimate += r.error_estimate;
            total.evaluations += r.evaluations;
            total.converged &= r.converged;
        };
        for pair in breakpoints.windows(2) {
            add(integrate_1d(
                integrand,
                Domain::finite(pair[0], pair[1]),
                &piece_spec,
            ));
        }
        if !matches!(self, SusceptibilityModel::TabulatedCoupling(_)) {
            let start = *breakpoints.last().unwrap();
            let tail_spec = piece_spec.with_transform(SemiInfiniteTransform::Rational);
            add(integrate_1d(
                integrand,
                Domain::semi_infinite(start).with_scale(start.max(1e-300)),
                &tail_spec,
            ));
        }
        total.converged = total.converged && total.error_estimate <= quad.target(total.value);
        total.require_converged(quad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    /// Massless scalar field; the magnetic response is ignored.
    Scalar,
    /// Electromagnetic field (one polarization per mode sum).
    #[serde(alias = "EM")]
    Em,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Medium {
    pub electric: SusceptibilityModel,
    #[serde(default = "SusceptibilityModel::zero")]
    pub magnetic: SusceptibilityModel,
}

impl Medium {
    pub fn new(electric: SusceptibilityModel, magnetic: SusceptibilityModel) -> Result<Self> {
        let medium = Medium { electric, magnetic };
        medium.validate()?;
        Ok(medium)
    }

    pub fn vacuum() -> Self {
        Medium {
            electric: SusceptibilityModel::zero(),
            magnetic: SusceptibilityModel::zero(),
        }
    }

    /// Non-magnetic medium with the given electric response.
    pub fn dielectric(electric: SusceptibilityModel) -> Result<Self> {
        Medium::new(electric, SusceptibilityModel::zero())
    }

    pub fn validate(&self) -> Result<()> {
        self.electric
            .validate()
            .map_err(|e| prefix_field(e, "electric"))?;
        self.magnetic
            .validate()
            .map_err(|e| prefix_field(e, "magnetic"))
    }

    /// Checks that the permeability stays positive on the whole imaginary
    /// axis. For every dispersive model `chi_bar` peaks at `xi -> 0`, so the
    /// static value (or its divergence, for Drude) decides.
    pub fn check_magnetic_stability(&self) -> Result<()> {
        let chi_m = match &self.magnetic {
            SusceptibilityModel::Drude { .. } => f64::INFINITY,
            m => m.chi_bar(0.0)?,
        };
        if chi_m >= 1.0 {
            return Err(CasimirError::MediumInstability { xi: 0.0, chi_m });
        }
        Ok(())
    }

    /// `eps_bar(xi) = 1 + chi_bar_e(xi)`.
    pub fn eps_bar(&self, xi: f64) -> Result<f64> {
        Ok(1.0 + self.electric.chi_bar(xi)?)
    }

    /// `mu_bar(xi) = 1 / (1 - chi_bar_m(xi))`.
    pub fn mu_bar(&self, xi: f64) -> Result<f64> {
        let chi_m = self.magnetic.chi_bar(xi)?;
        if chi_m >= 1.0 {
            return Err(CasimirError::MediumInstability { xi, chi_m });
        }
        Ok(1.0 / (1.0 - chi_m))
    }

    /// Squared refractive index at imaginary frequency.
    pub fn refractive_index_sq(&self, kind: FieldKind, xi: f64) -> Result<f64> {
        let eps = self.eps_bar(xi)?;
        match kind {
            FieldKind::Scalar => Ok(eps),
            FieldKind::Em => Ok(eps * self.mu_bar(xi)?),
        }
    }

    /// `n(xi)`: `sqrt(eps_bar)` for a scalar field, `sqrt(eps_bar mu_bar)` for EM.
    pub fn refractive_index(&self, kind: FieldKind, xi: f64) -> Result<f64> {
        Ok(self.refractive_index_sq(kind, xi)?.sqrt())
    }
}

fn prefix_field(err: CasimirError, prefix: &str) -> CasimirError {
    match err {
        CasimirError::InvalidModel { field, reason } => CasimirError::InvalidModel {
            field: format!("{prefix}.{field}"),
            reason,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lorentz(omega_p: f64, omega_0: f64, gamma: f64) -> SusceptibilityModel {
        SusceptibilityModel::Lorentz {
            omega_p,
            omega_0,
            gamma,
        }
    }

    #[test]
    fn closed_forms() {
        let c = SusceptibilityModel::Constant { chi0: 3.0 };
        assert_eq!(c.chi_bar(7.0).unwrap(), 3.0);
        let s = SusceptibilityModel::SharpResonance {
            omega_p: 2.0,
            omega_0: 1.0,
        };
        assert_eq!(s.chi_bar(1.0).unwrap(), 2.0);
        assert!((lorentz(1.0, 2.0, 0.5).chi_bar(3.0).unwrap() - 1.0 / 14.5).abs() < 1e-16);
    }

    #[test]
    fn drude_static_divergence_is_an_error() {
        let d = SusceptibilityModel::Drude {
            omega_p: 1.0,
            gamma: 0.5,
        };
        assert!(matches!(d.chi_bar(0.0), Err(CasimirError::Domain { .. })));
        assert!(d.chi_bar(1e-12).unwrap().is_finite());
    }

    #[test]
    fn imaginary_part_on_real_axis() {
        let c = SusceptibilityModel::Constant { chi0: 3.0 };
        assert_eq!(c.im_chi_real_axis(1.0).unwrap(), 0.0);
        assert!((lorentz(1.0, 1.0, 0.1).im_chi_real_axis(1.0).unwrap() - 10.0).abs() < 1e-12);
        assert!(c.im_chi_real_axis(0.0).is_err());
        assert!(c.im_chi_real_axis(-1.0).is_err());
        let s = SusceptibilityModel::SharpResonance {
            omega_p: 1.0,
            omega_0: 1.0,
        };
        assert_eq!(s.im_chi_real_axis(0.5).unwrap(), 0.0);
        assert!(matches!(
            s.im_chi_real_axis(1.0),
            Err(CasimirError::UnsupportedDistribution(_))
        ));
    }

    #[test]
    fn im_chi_is_the_imaginary_part_of_the_complex_response() {
        for m in [
            lorentz(1.0, 1.0, 0.1),
            lorentz(1.3, 0.7, 2.0),
            SusceptibilityModel::Drude {
                omega_p: 1.0,
                gamma: 0.5,
            },
        ] {
            for w in [0.1, 0.9, 1.0, 2.0, 7.5] {
                let full = m.chi_real_axis(w).unwrap();
                let im = m.im_chi_real_axis(w).unwrap();
                assert!(
                    (full.im - im).abs() <= 1e-14 * im.abs().max(1.0),
                    "{m:?} w={w}"
                );
            }
        }
    }

    #[test]
    fn kk_rejects_lossless_models() {
        let q = QuadratureSpec::default();
        assert!(SusceptibilityModel::Constant { chi0: 3.0 }
            .kk_imaginary_axis(1.0, &q)
            .is_err());
        assert!(lorentz(1.0, 1.0, 0.0).kk_imaginary_axis(1.0, &q).is_err());
    }

    #[test]
    fn kk_closure_examples() {
        let q = QuadratureSpec::default();
        let r = lorentz(1.0, 1.0, 0.1).kk_imaginary_axis(0.0, &q).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6);
        let r = lorentz(1.0, 2.0, 0.5).kk_imaginary_axis(3.0, &q).unwrap();
        assert!((r.value - 0.068_965_517_241_379_31).abs() < 1e-6);
    }

    #[test]
    fn refractive_index_examples() {
        let vac = Medium::vacuum();
        assert_eq!(vac.refractive_index(FieldKind::Scalar, 5.0).unwrap(), 1.0);
        let d = Medium::dielectric(SusceptibilityModel::Constant { chi0: 3.0 }).unwrap();
        assert_eq!(d.refractive_index(FieldKind::Scalar, 0.3).unwrap(), 2.0);
        let md = Medium::new(
            SusceptibilityModel::Constant { chi0: 1.0 },
            SusceptibilityModel::Constant { chi0: 0.5 },
        )
        .unwrap();
        assert_eq!(md.refractive_index(FieldKind::Em, 11.0).unwrap(), 2.0);
        // Scalar ignores the magnetic response.
        assert!(
            (md.refractive_index(FieldKind::Scalar, 11.0).unwrap() - 2f64.sqrt()).abs() < 1e-15
        );
    }

    #[test]
    fn magnetic_instability() {
        let m = Medium::new(
            SusceptibilityModel::zero(),
            SusceptibilityModel::Constant { chi0: 1.0 },
        )
        .unwrap();
        assert!(matches!(
            m.refractive_index(FieldKind::Em, 1.0),
            Err(CasimirError::MediumInstability { .. })
        ));
        assert!(m.refractive_index(FieldKind::Scalar, 1.0).is_ok());
        assert!(m.check_magnetic_stability().is_err());
        let drude_m = Medium::new(
            SusceptibilityModel::zero(),
            SusceptibilityModel::Drude {
                omega_p: 0.1,
                gamma: 1.0,
            },
        )
        .unwrap();
        assert!(drude_m.check_magnetic_stability().is_err());
    }

    #[test]
    fn invalid_parameters_name_the_field() {
        let err = Medium::new(lorentz(1.0, -1.0, 0.1), SusceptibilityModel::zero()).unwrap_err();
        match err {
            CasimirError::InvalidModel { field, .. } => assert_eq!(field, "electric.omega_0"),
            other => panic!("{other:?}"),
        }
        assert!(SusceptibilityModel::Drude {
            omega_p: 1.0,
            gamma: 0.0
        }
        .validate()
        .is_err());
        assert!(SusceptibilityModel::Constant { chi0: f64::NAN }
            .validate()
            .is_err());
    }
}
