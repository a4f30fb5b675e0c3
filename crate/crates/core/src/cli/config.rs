//! Flat `key = value` configuration files and their merge with flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::geometry::{LensProfile, ProfileKind};
use crate::metrology::{ErrorBudget, Interpolation, KTable, QTable, Systematic};
use crate::pfa::{ForceMethod, DEFAULT_QUAD_TOL};
use crate::units::{parse_length, parse_temperature};

use super::CliError;

/// Keys shared by flags and configuration files.
pub const RUN_KEYS: [&str; 13] = [
    "profile", "R", "R1", "D1", "D", "T", "a-start", "a-stop", "a-step", "a", "method", "tol",
    "out",
];

/// Keys only meaningful to `combine-errors`.
pub const BUDGET_KEYS: [&str; 11] = [
    "random",
    "systematic",
    "systematic-total",
    "s-mean",
    "beta",
    "k",
    "q",
    "k-table",
    "q-table",
    "q-interpolation",
    "measured",
];

pub const DEFAULT_TEMPERATURE: f64 = 300.0;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parsed configuration file, remembering its directory for relative paths.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub values: BTreeMap<String, String>,
    pub base_dir: PathBuf,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::parse(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                usage(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            if !RUN_KEYS.contains(&key) && !BUDGET_KEYS.contains(&key) {
                return Err(usage(format!(
                    "config line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            if values
                .insert(key.to_string(), value.trim().to_string())
                .is_some()
            {
                return Err(usage(format!(
                    "config line {}: duplicate key `{key}`",
                    lineno + 1
                )));
            }
        }
        Ok(ConfigFile {
            values,
            base_dir: PathBuf::new(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Fpp,
    Pressure,
    Force,
    Ratio,
    ReproduceFig2,
    CombineErrors,
    ValidateLens,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommandKind::Fpp => "fpp",
            CommandKind::Pressure => "pressure",
            CommandKind::Force => "force",
            CommandKind::Ratio => "ratio",
            CommandKind::ReproduceFig2 => "reproduce-fig2",
            CommandKind::CombineErrors => "combine-errors",
            CommandKind::ValidateLens => "validate-lens",
        })
    }
}

/// Fully parsed run settings; flags override the configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub profile_kind: Option<ProfileKind>,
    pub radius: Option<f64>,
    pub thickness: Option<f64>,
    pub cap_radius: Option<f64>,
    pub cap_depth: Option<f64>,
    pub temperature: f64,
    pub grid: Option<Vec<f64>>,
    pub method: Option<ForceMethod>,
    pub tol: f64,
    pub out: Option<PathBuf>,
    /// Raw budget keys for `combine-errors`.
    pub budget: BTreeMap<String, String>,
    pub base_dir: PathBuf,
}

fn parse_kind(s: &str) -> Result<ProfileKind, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "perfect" => Ok(ProfileKind::Perfect),
        "bubble" => Ok(ProfileKind::Bubble),
        "pit" => Ok(ProfileKind::Pit),
        other => Err(usage(format!(
            "unknown profile `{other}` (perfect, bubble, pit)"
        ))),
    }
}

pub fn parse_method(s: &str) -> Result<ForceMethod, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "quadrature" | "general" => Ok(ForceMethod::GeneralQuadrature),
        "full" => Ok(ForceMethod::PerfectFull),
        "simplified" => Ok(ForceMethod::PerfectSimplified),
        "bubble" => Ok(ForceMethod::Bubble),
        "pit" => Ok(ForceMethod::Pit),
        other => Err(usage(format!(
            "unknown method `{other}` (quadrature, full, simplified, bubble, pit)"
        ))),
    }
}

fn length(key: &str, value: &str) -> Result<f64, CliError> {
    parse_length(value).map_err(|e| usage(format!("--{key}: {e}")))
}

/// Inclusive grid `start, start + step, ..., stop`.
pub fn inclusive_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if step.is_nan() || step <= 0.0 {
        return Err(usage("--a-step must be positive"));
    }
    if stop < start {
        return Err(usage("--a-stop must not be below --a-start"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

fn check_grid(grid: &[f64]) -> Result<(), CliError> {
    if grid.iter().any(|&a| a.is_nan() || a <= 0.0) {
        return Err(usage("separations must be positive"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(usage("separation grid must be strictly increasing"));
    }
    Ok(())
}

impl RunConfig {
    /// Merges `flags` (key → raw value) over `file` and parses every
    /// present run key.
    pub fn resolve(
        command: CommandKind,
        flags: &BTreeMap<String, String>,
        file: &ConfigFile,
    ) -> Result<Self, CliError> {
        let mut merged = file.values.clone();
        for (k, v) in flags {
            merged.insert(k.clone(), v.clone());
        }
        let get = |k: &str| merged.get(k).map(String::as_str);

        let opt_len = |k: &str| get(k).map(|v| length(k, v)).transpose();

        let grid = match (get("a"), get("a-start"), get("a-stop"), get("a-step")) {
            (Some(list), _, _, _) => {
                let grid = list
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| length("a", s))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(grid)
            }
            (None, Some(start), Some(stop), Some(step)) => Some(inclusive_grid(
                length("a-start", start)?,
                length("a-stop", stop)?,
                length("a-step", step)?,
            )?),
            (None, Some(start), None, None) => Some(vec![length("a-start", start)?]),
            (None, None, None, None) => None,
            _ => {
                return Err(usage(
                    "separation grid needs --a-start, --a-stop and --a-step (or --a LIST)",
                ))
            }
        };
        if let Some(g) = &grid {
            check_grid(g)?;
        }

        let temperature = match get("T") {
            Some(v) => parse_temperature(v).map_err(|e| usage(format!("--T: {e}")))?,
            None => DEFAULT_TEMPERATURE,
        };
        if temperature.is_nan() || temperature < 0.0 {
            return Err(usage("--T must be non-negative"));
        }

        let tol = match get("tol") {
            Some(v) => v
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|t| *t > 0.0 && t.is_finite())
                .ok_or_else(|| usage(format!("--tol: expected a positive number, got `{v}`")))?,
            None => DEFAULT_QUAD_TOL,
        };

        let budget = merged
            .iter()
            .filter(|(k, _)| BUDGET_KEYS.contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();

        Ok(RunConfig {
            command,
            profile_kind: get("profile").map(parse_kind).transpose()?,
            radius: opt_len("R")?,
            thickness: opt_len("D")?,
            cap_radius: opt_len("R1")?,
            cap_depth: opt_len("D1")?,
            temperature,
            grid,
            method: get("method").map(parse_method).transpose()?,
            tol,
            out: get("out").map(PathBuf::from),
            budget,
            base_dir: file.base_dir.clone(),
        })
    }

    pub fn grid(&self) -> Result<&[f64], CliError> {
        self.grid
            .as_deref()
            .ok_or_else(|| usage(format!("{}: no separation grid given", self.command)))
    }

    /// Profile kind: explicit, implied by an imperfection method, or perfect
    /// when no imperfection parameters are present.
    fn kind(&self) -> Result<ProfileKind, CliError> {
        if let Some(kind) = self.profile_kind {
            return Ok(kind);
        }
        match self.method {
            Some(ForceMethod::Bubble) => return Ok(ProfileKind::Bubble),
            Some(ForceMethod::Pit) => return Ok(ProfileKind::Pit),
            _ => {}
        }
        if self.cap_radius.is_some() || self.cap_depth.is_some() {
            return Err(usage(
                "--R1/--D1 given: choose --profile bubble or --profile pit",
            ));
        }
        Ok(ProfileKind::Perfect)
    }

    pub fn profile(&self) -> Result<LensProfile, CliError> {
        let radius = self
            .radius
            .ok_or_else(|| usage(format!("{}: --R is required", self.command)))?;
        let thickness = self.thickness.unwrap_or(radius);
        let cap = || -> Result<(f64, f64), CliError> {
            Ok((
                self.cap_radius.ok_or_else(|| usage("--R1 is required"))?,
                self.cap_depth.ok_or_else(|| usage("--D1 is required"))?,
            ))
        };
        let profile = match self.kind()? {
            ProfileKind::Perfect => LensProfile::perfect(radius, thickness),
            ProfileKind::Bubble => {
                let (r1, d1) = cap()?;
                LensProfile::bubble(radius, thickness, r1, d1)
            }
            ProfileKind::Pit => {
                let (r1, d1) = cap()?;
                LensProfile::pit(radius, thickness, r1, d1)
            }
        };
        profile.map_err(|e| usage(e.to_string()))
    }

    /// Builds the error budget from the `combine-errors` keys.
    pub fn error_budget(&self) -> Result<ErrorBudget, CliError> {
        let get = |k: &str| self.budget.get(k).map(String::as_str);
        let number = |k: &str, v: &str| -> Result<f64, CliError> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("{k}: cannot parse `{v}` as a number")))
        };
        let required = |k: &str| -> Result<f64, CliError> {
            let v = get(k).ok_or_else(|| usage(format!("budget is missing `{k}`")))?;
            number(k, v)
        };
        let optional = |k: &str| get(k).map(|v| number(k, v)).transpose();

        let systematic = match (get("systematic"), get("systematic-total")) {
            (Some(_), Some(_)) => {
                return Err(usage(
                    "give either `systematic` or `systematic-total`, not both",
                ))
            }
            (Some(list), None) => {
                let comps = list
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| number("systematic", s))
                    .collect::<Result<Vec<_>, _>>()?;
                if comps.is_empty() {
                    return Err(usage("`systematic` lists no components"));
                }
                Systematic::Components(comps)
            }
            (None, Some(total)) => Systematic::Combined(number("systematic-total", total)?),
            (None, None) => {
                return Err(usage(
                    "budget needs `systematic` components or `systematic-total`",
                ))
            }
        };

        let mut budget = ErrorBudget::new(required("random")?, systematic, required("s-mean")?);
        if let Some(beta) = optional("beta")? {
            budget.beta = beta;
        }
        budget.k = optional("k")?;
        budget.q = optional("q")?;
        budget.measured_value = optional("measured")?;
        let interpolation = match get("q-interpolation") {
            Some(v) => v.parse::<Interpolation>()?,
            None => Interpolation::Exact,
        };
        budget.q_table = QTable::new(interpolation);

        if let Some(path) = get("k-table") {
            let mut table = KTable::attested();
            for (j, k) in self.read_table(path)? {
                if j < 1.0 || j.fract() != 0.0 {
                    return Err(usage(format!(
                        "k table: J must be a positive integer, got {j}"
                    )));
                }
                table.insert(j as usize, budget.beta, k)?;
            }
            budget.k_table = table;
        }
        if let Some(path) = get("q-table") {
            for (r, q) in self.read_table(path)? {
                budget.q_table.insert(budget.beta, r, q)?;
            }
        }
        Ok(budget)
    }

    fn read_table(&self, path: &str) -> Result<Vec<(f64, f64)>, CliError> {
        let full = self.base_dir.join(path);
        let text = std::fs::read_to_string(&full).map_err(|source| CliError::Io {
            path: full.clone(),
            source,
        })?;
        parse_table(&text).map_err(|e| usage(format!("{}: {e}", full.display())))
    }
}

/// Two-column numeric table, separated by whitespace or a comma.
pub fn parse_table(text: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut rows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let parsed: Option<Vec<f64>> = cols.iter().map(|c| c.parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[key, value]) => rows.push((key, value)),
            _ => return Err(format!("line {}: expected two numbers", lineno + 1)),
        }
    }
    Ok(rows)
}
