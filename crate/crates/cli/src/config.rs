//! Run configuration: an optional JSON file overlaid by command-line flags.
//!
//! ```json
//! {
//!   "medium": "media/lorentz.json",
//!   "field": "scalar",
//!   "bc": "field",
//!   "hmin": 0.5, "hmax": 5.0, "points": 10, "log": true,
//!   "rel_tol": 1e-9, "abs_tol": 1e-12,
//!   "format": "csv",
//!   "out": "force.csv",
//!   "scale": 1.0
//! }
//! ```
//!
//! Every key is optional. The relative tolerance is resolved as flag, then
//! file, then `CASIMIR_MEDIUM_RELTOL`, then the library default.

use std::path::{Path, PathBuf};

use casimir_core::forces::BoundaryCondition;
use casimir_core::medium::FieldKind;
use casimir_core::quadrature::QuadratureSpec;
use serde::Deserialize;

pub const RELTOL_ENV: &str = "CASIMIR_MEDIUM_RELTOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FieldArg {
    Scalar,
    #[serde(alias = "EM")]
    Em,
}

impl From<FieldArg> for FieldKind {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Scalar => FieldKind::Scalar,
            FieldArg::Em => FieldKind::Em,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BcArg {
    Field,
    Polarization,
}

impl From<BcArg> for BoundaryCondition {
    fn from(b: BcArg) -> Self {
        match b {
            BcArg::Field => BoundaryCondition::Field,
            BcArg::Polarization => BoundaryCondition::Polarization,
        }
    }
}

/// Contents of `--config`; unset keys fall through to defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub medium: Option<PathBuf>,
    pub field: Option<FieldArg>,
    pub bc: Option<BcArg>,
    pub hmin: Option<f64>,
    pub hmax: Option<f64>,
    pub points: Option<usize>,
    pub log: Option<bool>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub scale: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text =
            std::fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub h_min: f64,
    pub h_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.h_min > 0.0 && self.h_min.is_finite()) {
            return Err(format!("hmin: {} must be > 0", self.h_min));
        }
        if !(self.h_max >= self.h_min && self.h_max.is_finite()) {
            return Err(format!(
                "hmax: {} must be >= hmin ({})",
                self.h_max, self.h_min
            ));
        }
        if self.points < 1 {
            return Err("points: must be >= 1".to_string());
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.h_min];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                if i + 1 == self.points {
                    return self.h_max;
                }
                match self.spacing {
                    Spacing::Linear => self.h_min + t * (self.h_max - self.h_min),
                    Spacing::Log => self.h_min * (t * (self.h_max / self.h_min).ln()).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub medium: Option<PathBuf>,
    pub field: FieldKind,
    pub bc: BoundaryCondition,
    pub grid: Grid,
    pub spec: QuadratureSpec,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Multiplies force and error columns, e.g. to restore `hbar c`.
    pub scale: f64,
}

/// Resolves the relative tolerance from flag, file, environment, default.
pub fn resolve_rel_tol(
    flag: Option<f64>,
    file: Option<f64>,
    env: Option<&str>,
) -> Result<f64, String> {
    if let Some(v) = flag.or(file) {
        return Ok(v);
    }
    match env {
        Some(text) => text
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("{RELTOL_ENV}: '{text}' is not a number ({e})")),
        None => Ok(QuadratureSpec::default().rel_tol),
    }
}

pub fn build_spec(rel_tol: f64, abs_tol: Option<f64>) -> Result<QuadratureSpec, String> {
    let mut spec = QuadratureSpec::default().with_rel_tol(rel_tol);
    if let Some(a) = abs_tol {
        spec = spec.with_abs_tol(a);
    }
    spec.validate().map_err(|e| format!("tolerance: {e}"))?;
    Ok(spec)
}
