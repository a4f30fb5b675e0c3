//! Command-line front end.
//!
//! Every subcommand writes a CSV (or a `quantity,value` report) to `--out`
//! or to standard output. Exit codes: 0 success, 1 usage, 2 numerical
//! failure, 3 I/O.

pub mod config;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::figure;
use crate::geometry::{validate_spec, GeometryError};
use crate::metrology::{total_error, MetrologyError};
use crate::pfa::{force_with_method, ratio_curve, ForceMethod, PfaError};
use crate::plates::{free_energy_pp, pressure_pp, tau, PhysicsError};

use config::{CommandKind, ConfigFile, RunConfig};
use output::{emit, sci, Csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Metrology(#[from] MetrologyError),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error(transparent)]
    Pfa(#[from] PfaError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Metrology(_) => EXIT_USAGE,
            CliError::Pfa(PfaError::ProfileMismatch { .. })
            | CliError::Pfa(PfaError::InvalidParameter { .. })
            | CliError::Pfa(PfaError::Geometry(_)) => EXIT_USAGE,
            CliError::Physics(PhysicsError::InvalidSeparation(_))
            | CliError::Physics(PhysicsError::InvalidTemperature(_)) => EXIT_USAGE,
            CliError::Physics(_) | CliError::Pfa(_) => EXIT_NUMERICAL,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "casimir-pfa",
    version,
    about = "Casimir force between a plate and an imperfect spherical lens"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plate–plate free energy per unit area over a separation grid.
    Fpp(Flags),
    /// Plate–plate pressure over a separation grid.
    Pressure(Flags),
    /// Lens–plate force over a separation grid.
    Force(Flags),
    /// Imperfect-lens force over the simplified perfect-sphere force.
    Ratio(Flags),
    /// Ratio curves for the three model imperfections, 1–3 μm at 300 K.
    #[command(name = "reproduce-fig2")]
    ReproduceFig2(Flags),
    /// Combine random and systematic errors from a budget file.
    #[command(name = "combine-errors")]
    CombineErrors(Flags),
    /// Check an imperfection against the optical surface specification.
    #[command(name = "validate-lens")]
    ValidateLens(Flags),
}

/// Flags shared by all subcommands. Lengths accept nm, um, mm, cm, m.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Flat `key = value` configuration file; flags take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// perfect, bubble or pit.
    #[arg(long)]
    pub profile: Option<String>,
    /// Lens curvature radius.
    #[arg(long = "R", value_name = "LENGTH")]
    pub radius: Option<String>,
    /// Imperfection curvature radius.
    #[arg(long = "R1", value_name = "LENGTH")]
    pub cap_radius: Option<String>,
    /// Imperfection thickness or depth.
    #[arg(long = "D1", value_name = "LENGTH")]
    pub cap_depth: Option<String>,
    /// Lens thickness (defaults to R).
    #[arg(long = "D", value_name = "LENGTH")]
    pub thickness: Option<String>,
    /// Temperature (default 300 K).
    #[arg(long = "T", value_name = "TEMPERATURE")]
    pub temperature: Option<String>,
    #[arg(long = "a-start", value_name = "LENGTH")]
    pub a_start: Option<String>,
    #[arg(long = "a-stop", value_name = "LENGTH")]
    pub a_stop: Option<String>,
    #[arg(long = "a-step", value_name = "LENGTH")]
    pub a_step: Option<String>,
    /// Explicit comma-separated separations; an empty list is allowed.
    #[arg(long = "a", value_name = "LIST")]
    pub a_list: Option<String>,
    /// quadrature, full, simplified, bubble or pit.
    #[arg(long)]
    pub method: Option<String>,
    /// Relative quadrature tolerance (default 1e-9).
    #[arg(long)]
    pub tol: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

impl Flags {
    fn as_map(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("profile", &self.profile),
            ("R", &self.radius),
            ("R1", &self.cap_radius),
            ("D1", &self.cap_depth),
            ("D", &self.thickness),
            ("T", &self.temperature),
            ("a-start", &self.a_start),
            ("a-stop", &self.a_stop),
            ("a-step", &self.a_step),
            ("a", &self.a_list),
            ("method", &self.method),
            ("tol", &self.tol),
        ];
        let mut map: BTreeMap<String, String> = pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        if let Some(out) = &self.out {
            map.insert("out".into(), out.display().to_string());
        }
        map
    }
}

impl Command {
    fn split(&self) -> (CommandKind, &Flags) {
        match self {
            Command::Fpp(f) => (CommandKind::Fpp, f),
            Command::Pressure(f) => (CommandKind::Pressure, f),
            Command::Force(f) => (CommandKind::Force, f),
            Command::Ratio(f) => (CommandKind::Ratio, f),
            Command::ReproduceFig2(f) => (CommandKind::ReproduceFig2, f),
            Command::CombineErrors(f) => (CommandKind::CombineErrors, f),
            Command::ValidateLens(f) => (CommandKind::ValidateLens, f),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (kind, flags) = command.split();
    let file = match &flags.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let config = RunConfig::resolve(kind, &flags.as_map(), &file)?;
    let body = match kind {
        CommandKind::Fpp => plate_table(&config, false)?,
        CommandKind::Pressure => plate_table(&config, true)?,
        CommandKind::Force => force_table(&config)?,
        CommandKind::Ratio => ratio_table(&config)?,
        CommandKind::ReproduceFig2 => fig2_table()?,
        CommandKind::CombineErrors => error_report(&config)?,
        CommandKind::ValidateLens => lens_report(&config)?,
    };
    emit(config.out.as_deref(), &body, stdout)
}

fn plate_table(config: &RunConfig, pressure: bool) -> Result<String, CliError> {
    let t = config.temperature;
    let header = if pressure {
        "z_m,tau,P_N_per_m2"
    } else {
        "z_m,tau,F_pp_J_per_m2"
    };
    let mut csv = Csv::with_header(header);
    for &z in config.grid()? {
        let value = if pressure {
            pressure_pp(z, t)?
        } else {
            free_energy_pp(z, t)?.value
        };
        csv.row([sci(z), sci(tau(z, t)?), sci(value)]);
    }
    Ok(csv.as_str().to_string())
}

fn force_table(config: &RunConfig) -> Result<String, CliError> {
    let profile = config.profile()?;
    let method = config.method.unwrap_or(match profile.kind() {
        crate::geometry::ProfileKind::Perfect => ForceMethod::PerfectSimplified,
        crate::geometry::ProfileKind::Bubble => ForceMethod::Bubble,
        crate::geometry::ProfileKind::Pit => ForceMethod::Pit,
    });
    let mut csv = Csv::with_header("a_m,F_N,method");
    for &a in config.grid()? {
        let force = force_with_method(&profile, method, a, config.temperature, config.tol)?;
        csv.row([sci(a), sci(force.magnitude()), method.name().to_string()]);
    }
    Ok(csv.as_str().to_string())
}

fn ratio_table(config: &RunConfig) -> Result<String, CliError> {
    let profile = config.profile()?;
    let curve = ratio_curve(&profile, config.grid()?, config.temperature)?;
    let mut csv = Csv::with_header("a_m,ratio");
    for (a, r) in curve.separations.iter().zip(&curve.ratios) {
        csv.row([sci(*a), sci(*r)]);
    }
    Ok(csv.as_str().to_string())
}

fn fig2_table() -> Result<String, CliError> {
    let mut csv = Csv::with_header(figure::CSV_HEADER);
    for row in figure::rows(figure::TEMPERATURE)? {
        csv.row([
            sci(row.a_um),
            sci(row.ratios[0]),
            sci(row.ratios[1]),
            sci(row.ratios[2]),
        ]);
    }
    Ok(csv.as_str().to_string())
}

fn error_report(config: &RunConfig) -> Result<String, CliError> {
    let budget = config.error_budget()?;
    let combined = total_error(&budget)?;
    let mut csv = Csv::with_header("quantity,value");
    csv.row(["r".to_string(), sci(combined.ratio)]);
    csv.row(["rule".to_string(), combined.rule.to_string()]);
    csv.row(["Delta_s".to_string(), sci(combined.systematic)]);
    csv.row(["Delta_t".to_string(), sci(combined.total)]);
    if let Some(rel) = combined.relative {
        csv.row(["delta_t".to_string(), sci(rel)]);
    }
    Ok(csv.as_str().to_string())
}

fn lens_report(config: &RunConfig) -> Result<String, CliError> {
    let profile = config.profile()?;
    let report = validate_spec(&profile);
    let mut csv = Csv::with_header("check,value_m,limit_m,passed");
    for check in &report.checks {
        csv.row([
            check.name.to_string(),
            sci(check.value),
            sci(check.limit),
            check.passed.to_string(),
        ]);
    }
    Ok(csv.as_str().to_string())
}
