//! `casimir`: force curves, self-checks and propagator dumps.
//!
//! Natural units throughout (`hbar = c = 1`): lengths and inverse
//! frequencies share one unit and the force is per unit plate area. With
//! `H` in metres, `--scale 3.16152677e-26` (the value of `hbar c` in J m)
//! turns the force columns into N/m^2.
//!
//! Exit codes: 0 success, 1 malformed input, 2 medium outside its stable
//! regime, 3 unconverged integral or propagator pole, 4 failed check.

mod config;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use casimir_core::checks::{run_suite, Suite};
use casimir_core::forces::{force, ForceQuery, ForceResult};
use casimir_core::medium::{read_medium_file, FieldKind, Medium};
use casimir_core::propagators::{
    evaluate, Axis, MomentumFrequencyPoint, PropagatorKind, DEFAULT_ETA,
};
use casimir_core::CasimirError;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use config::{
    build_spec, resolve_rel_tol, BcArg, FieldArg, FileConfig, Format, Grid, RunConfig, Spacing,
    RELTOL_ENV,
};

#[derive(Parser)]
#[command(
    name = "casimir",
    version,
    about = "Casimir force between ideal plates enclosing a dispersive medium"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Force per unit area on a grid of plate separations.
    Force(ForceArgs),
    /// Run a self-check suite: limits, kk, dyson or action.
    Check { suite: String },
    /// Dump propagator values as CSV.
    Propagator(PropagatorArgs),
}

#[derive(clap::Args)]
struct ForceArgs {
    /// JSON run configuration; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// JSON medium definition (vacuum when omitted).
    #[arg(long)]
    medium: Option<PathBuf>,
    #[arg(long, value_enum)]
    field: Option<FieldArg>,
    #[arg(long, value_enum)]
    bc: Option<BcArg>,
    #[arg(long)]
    hmin: Option<f64>,
    /// Defaults to hmin.
    #[arg(long)]
    hmax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Logarithmic grid spacing.
    #[arg(long)]
    log: bool,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Multiplier applied to the force and error columns.
    #[arg(long)]
    scale: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Real,
    Euclidean,
}

#[derive(clap::Args)]
struct PropagatorArgs {
    #[arg(long)]
    medium: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "scalar")]
    field: FieldArg,
    #[arg(long, value_enum, default_value = "euclidean")]
    axis: AxisArg,
    /// `k,freq`; repeat for several points.
    #[arg(long = "point", value_parser = parse_point, required = true)]
    points: Vec<(f64, f64)>,
    /// Comma-separated: G0, Gomega, Gphiphi, GphiP, GphiM, GPP, GMM.
    #[arg(long, value_delimiter = ',', default_value = "Gphiphi")]
    kind: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_ETA)]
    eta: f64,
    /// Reservoir frequency used by Gomega.
    #[arg(long, default_value_t = 1.0)]
    omega_res: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_point(text: &str) -> Result<(f64, f64), String> {
    let (k, freq) = text
        .split_once(',')
        .ok_or_else(|| format!("'{text}': expected k,freq"))?;
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("'{s}': {e}"));
    Ok((parse(k)?, parse(freq)?))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<CasimirError> for Failure {
    fn from(e: CasimirError) -> Self {
        let code = match e {
            CasimirError::MediumInstability { .. } | CasimirError::InvalidRegime { .. } => 2,
            CasimirError::IntegrationFailure { .. } | CasimirError::Pole { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Force(args) => cmd_force(args),
        Command::Check { suite } => cmd_check(&suite),
        Command::Propagator(args) => cmd_propagator(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load_medium(path: Option<&PathBuf>) -> Result<Medium, Failure> {
    match path {
        Some(p) => read_medium_file(p).map_err(|e| Failure::malformed(format!("medium: {e}"))),
        None => Ok(Medium::vacuum()),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::malformed(format!("out {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::malformed(format!("stdout: {e}")))
        }
    }
}

fn resolve_force_config(args: ForceArgs) -> Result<RunConfig, Failure> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p).map_err(Failure::malformed)?,
        None => FileConfig::default(),
    };
    let env = std::env::var(RELTOL_ENV).ok();
    let rel_tol =
        resolve_rel_tol(args.rel_tol, file.rel_tol, env.as_deref()).map_err(Failure::malformed)?;
    let spec = build_spec(rel_tol, args.abs_tol.or(file.abs_tol)).map_err(Failure::malformed)?;
    let h_min = args.hmin.or(file.hmin).unwrap_or(1.0);
    let grid = Grid {
        h_min,
        h_max: args.hmax.or(file.hmax).unwrap_or(h_min),
        points: args.points.or(file.points).unwrap_or(1),
        spacing: if args.log || file.log.unwrap_or(false) {
            Spacing::Log
        } else {
            Spacing::Linear
        },
    };
    grid.validate().map_err(Failure::malformed)?;
    let scale = args.scale.or(file.scale).unwrap_or(1.0);
    if !scale.is_finite() {
        return Err(Failure::malformed(format!("scale: {scale} must be finite")));
    }
    Ok(RunConfig {
        medium: args.medium.or(file.medium),
        field: args.field.or(file.field).unwrap_or(FieldArg::Scalar).into(),
        bc: args.bc.or(file.bc).unwrap_or(BcArg::Field).into(),
        grid,
        spec,
        format: args.format.or(file.format).unwrap_or(Format::Csv),
        out: args.out.or(file.out),
        scale,
    })
}

#[derive(Serialize)]
struct ForceRow {
    #[serde(rename = "H")]
    separation: f64,
    force_per_area: f64,
    error_estimate: f64,
    vacuum_ratio: f64,
    evaluations: usize,
    converged: bool,
}

impl ForceRow {
    fn new(r: &ForceResult, scale: f64) -> Self {
        ForceRow {
            separation: r.separation,
            force_per_area: r.force_per_area * scale,
            error_estimate: r.error_estimate * scale.abs(),
            vacuum_ratio: r.vacuum_ratio,
            evaluations: r.evaluations,
            converged: r.converged,
        }
    }
}

fn cmd_force(args: ForceArgs) -> Result<u8, Failure> {
    let config = resolve_force_config(args)?;
    let medium = load_medium(config.medium.as_ref())?;
    let template = ForceQuery::new(medium, config.field, config.grid.h_min)
        .with_bc(config.bc)
        .with_spec(config.spec);
    template.validate()?;

    // Rows are independent; collect keeps grid order.
    let results: Vec<_> = config
        .grid
        .values()
        .par_iter()
        .map(|&h| force(&template.clone().with_separation(h)))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        rows.push(ForceRow::new(&r?, config.scale));
    }

    let text = match config.format {
        Format::Csv => {
            let mut s = String::from(
                "H,force_per_area,error_estimate,vacuum_ratio,evaluations,converged\n",
            );
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    table::number(r.separation),
                    table::number(r.force_per_area),
                    table::number(r.error_estimate),
                    table::number(r.vacuum_ratio),
                    r.evaluations,
                    r.converged
                ));
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows)
                .map_err(|e| Failure::malformed(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    emit(config.out.as_ref(), &text)?;
    if rows.iter().all(|r| r.converged) {
        Ok(0)
    } else {
        eprintln!("warning: some rows did not reach the requested tolerance");
        Ok(3)
    }
}

fn cmd_check(name: &str) -> Result<u8, Failure> {
    let suite = Suite::parse(name).ok_or_else(|| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.as_str()).collect();
        Failure::malformed(format!(
            "unknown suite '{name}'\n\nUsage: casimir check <{}>",
            names.join("|")
        ))
    })?;
    let outcomes = run_suite(suite);
    let mut failed = 0;
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        match &o.failure {
            Some(msg) => println!("{status} {}: {msg}", o.name),
            None => println!(
                "{status} {}: deviation {} (tolerance {})",
                o.name,
                table::number(o.deviation),
                table::number(o.tolerance)
            ),
        }
        if !o.passed {
            failed += 1;
        }
    }
    println!(
        "{}: {} passed, {} failed",
        suite.as_str(),
        outcomes.len() - failed,
        failed
    );
    Ok(if failed == 0 { 0 } else { 4 })
}

fn cmd_propagator(args: PropagatorArgs) -> Result<u8, Failure> {
    let medium = load_medium(args.medium.as_ref())?;
    let field: FieldKind = args.field.into();
    if !(args.eta >= 0.0 && args.eta.is_finite()) {
        return Err(Failure::malformed(format!(
            "eta: {} must be finite and >= 0",
            args.eta
        )));
    }
    let kinds = args
        .kind
        .iter()
        .map(|k| {
            PropagatorKind::parse(k.trim())
                .ok_or_else(|| Failure::malformed(format!("kind: unknown correlator '{k}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let points: Vec<MomentumFrequencyPoint> = args
        .points
        .iter()
        .map(|&(k, freq)| match args.axis {
            AxisArg::Real => MomentumFrequencyPoint::real(k, freq),
            AxisArg::Euclidean => MomentumFrequencyPoint::euclidean(k, freq),
        })
        .collect();
    for p in &points {
        p.validate()
            .map_err(|e| Failure::malformed(format!("point: {e}")))?;
        if p.axis == Axis::Euclidean {
            if let Some(k) = kinds.iter().find(|k| {
                !matches!(
                    k,
                    PropagatorKind::G0 | PropagatorKind::Gomega | PropagatorKind::Gphiphi
                )
            }) {
                return Err(Failure::malformed(format!(
                    "kind: {} is defined on the real axis only",
                    k.as_str()
                )));
            }
        }
    }

    let mut text = String::from("axis,kind,k,freq,re,im\n");
    let mut hit_pole = false;
    for p in &points {
        for &kind in &kinds {
            let (re, im) = match evaluate(&medium, field, kind, *p, args.eta, args.omega_res) {
                Ok(v) => (table::number(v.value.re), table::number(v.value.im)),
                Err(CasimirError::Pole { .. }) => {
                    hit_pole = true;
                    ("pole".to_string(), "pole".to_string())
                }
                Err(e) => return Err(e.into()),
            };
            text.push_str(&format!(
                "{},{},{},{},{re},{im}\n",
                p.axis.as_str(),
                kind.as_str(),
                table::number(p.k),
                table::number(p.freq)
            ));
        }
    }
    emit(args.out.as_ref(), &text)?;
    Ok(if hit_pole { 3 } else { 0 })
}
