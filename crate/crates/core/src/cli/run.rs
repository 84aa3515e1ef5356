use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::config::{RunConfig, QUICK_SAMPLES};
use super::design::build_design;
use crate::cutoff::{
    error_curve, find_cutoff, optimal_errors_vs_n, simulate_evidences, CutoffResult, ErrorCurve,
};
use crate::error::{Error, Result};
use crate::model::LinearModel;

pub const TABLE_HEADER: &str = "n,d,k_star,alpha_star,beta_star,objective_star,n_samples,seed";
pub const CURVE_HEADER: &str = "k,alpha,beta,objective";
pub const OPTIMAL_HEADER: &str = "n,alpha_star,beta_star,objective_star";

/// One line of the cut-off table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub n: usize,
    pub d: usize,
    pub k_star: f64,
    pub alpha_star: f64,
    pub beta_star: f64,
    pub objective_star: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl From<&CutoffResult> for TableRow {
    fn from(r: &CutoffResult) -> Self {
        TableRow {
            n: r.n,
            d: r.d,
            k_star: r.k_star,
            alpha_star: r.alpha_star,
            beta_star: r.beta_star,
            objective_star: r.objective_star,
            n_samples: r.n_samples,
            seed: r.seed,
        }
    }
}

/// 17 significant digits: enough to round-trip any f64.
fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn model_for(config: &RunConfig, n: usize) -> Result<LinearModel> {
    let design = build_design(
        config.model_kind,
        n,
        config.covariate_policy,
        config.seed,
        config.design_path.as_deref(),
    )?;
    LinearModel::new(design, config.sigma2)
}

/// Minimizes the error combination for every `n` in the config.
pub fn run_optimal_errors(config: &RunConfig) -> Result<Vec<CutoffResult>> {
    let (prior, part) = config.validate()?;
    optimal_errors_vs_n(
        |n| model_for(config, n),
        &prior,
        &part,
        &config.n_list,
        config.a,
        config.b,
        config.n_samples,
        config.seed,
    )
}

pub fn run_table(config: &RunConfig) -> Result<Vec<TableRow>> {
    Ok(run_optimal_errors(config)?
        .iter()
        .map(TableRow::from)
        .collect())
}

/// Error curve over a uniform `k` grid for a single sample size.
pub fn run_curve(config: &RunConfig, n: usize, grid_size: usize) -> Result<ErrorCurve> {
    let (prior, part) = config.validate()?;
    let model = model_for(config, n)?;
    let samples = simulate_evidences(&model, &prior, &part, config.n_samples, config.seed)?;
    error_curve(&samples, config.a, config.b, grid_size)
}

/// Single-`n` convenience returning the full cut-off result.
pub fn run_cutoff(config: &RunConfig, n: usize) -> Result<CutoffResult> {
    let (prior, part) = config.validate()?;
    let model = model_for(config, n)?;
    let samples = simulate_evidences(&model, &prior, &part, config.n_samples, config.seed)?;
    find_cutoff(&samples, config.a, config.b)
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from(TABLE_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.n,
            r.d,
            real(r.k_star),
            real(r.alpha_star),
            real(r.beta_star),
            real(r.objective_star),
            r.n_samples,
            r.seed
        );
    }
    s
}

pub fn curve_csv(curve: &ErrorCurve) -> String {
    let mut s = String::from(CURVE_HEADER);
    s.push('\n');
    for i in 0..curve.k_grid.len() {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            real(curve.k_grid[i]),
            real(curve.alpha[i]),
            real(curve.beta[i]),
            real(curve.objective[i])
        );
    }
    s
}

pub fn optimal_errors_csv(results: &[CutoffResult]) -> String {
    let mut s = String::from(OPTIMAL_HEADER);
    s.push('\n');
    for r in results {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            r.n,
            real(r.alpha_star),
            real(r.beta_star),
            real(r.objective_star)
        );
    }
    s
}

/// Parses a table emitted by [`table_csv`].
pub fn parse_table_csv(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == TABLE_HEADER => {}
        other => {
            return Err(Error::Validation(format!(
                "unexpected table header {other:?}"
            )))
        }
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 8 {
                return Err(Error::Validation(format!("bad table row '{line}'")));
            }
            let bad = |_| Error::Validation(format!("bad table row '{line}'"));
            let real = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Validation(format!("bad number '{s}'")))
            };
            Ok(TableRow {
                n: f[0].parse().map_err(bad)?,
                d: f[1].parse().map_err(bad)?,
                k_star: real(f[2])?,
                alpha_star: real(f[3])?,
                beta_star: real(f[4])?,
                objective_star: real(f[5])?,
                n_samples: f[6].parse().map_err(bad)?,
                seed: f[7].parse().map_err(bad)?,
            })
        })
        .collect()
}

/// What to compute and write.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Table,
    /// Error curve at `n` (default: first entry of `n_list`).
    Curve {
        n: Option<usize>,
    },
    OptimalErrors,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Table => "table",
            Command::Curve { .. } => "curve",
            Command::OptimalErrors => "optimal-errors",
        }
    }
}

/// Command-line overrides layered on top of a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub n_list: Option<Vec<usize>>,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub grid_size: Option<usize>,
    pub quick: bool,
}

impl Overrides {
    pub fn apply(&self, config: &mut RunConfig) {
        if self.quick {
            config.n_samples = QUICK_SAMPLES;
        }
        if let Some(v) = &self.n_list {
            config.n_list = v.clone();
        }
        if let Some(v) = self.n_samples {
            config.n_samples = v;
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if let Some(v) = self.a {
            config.a = v;
        }
        if let Some(v) = self.b {
            config.b = v;
        }
        if let Some(v) = &self.output_path {
            config.output_path = v.clone();
        }
        if let Some(v) = self.grid_size {
            config.grid_size = v;
        }
    }
}

/// SHA-256 of the canonical rendering of the effective config.
pub fn config_hash(config: &RunConfig) -> String {
    hex::encode(Sha256::digest(config.to_config_string().as_bytes()))
}

pub fn metadata_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

fn metadata(config: &RunConfig, command: &Command) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "tool = {}", env!("CARGO_PKG_NAME"));
    let _ = writeln!(s, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "command = {}", command.name());
    let _ = writeln!(s, "config_sha256 = {}", config_hash(config));
    let _ = writeln!(s, "seed = {}", config.seed);
    let _ = writeln!(s, "n_samples = {}", config.n_samples);
    let _ = writeln!(s, "sigma2 = {}", config.sigma2);
    let _ = writeln!(s, "model_kind = {}", config.model_kind);
    let _ = writeln!(s, "covariate_policy = {}", config.covariate_policy);
    s
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

/// Runs `command`, writes the CSV to `config.output_path` plus its
/// `.meta` sidecar, and returns the CSV path.
pub fn execute(command: &Command, config: &RunConfig) -> Result<PathBuf> {
    config.validate()?;
    let csv = match command {
        Command::Table => table_csv(&run_table(config)?),
        Command::OptimalErrors => optimal_errors_csv(&run_optimal_errors(config)?),
        Command::Curve { n } => {
            let n = n
                .or_else(|| config.n_list.first().copied())
                .ok_or_else(|| Error::Config("curve needs an n (n_list is empty)".into()))?;
            curve_csv(&run_curve(config, n, config.grid_size)?)
        }
    };
    write_file(&config.output_path, &csv)?;
    write_file(
        &metadata_path(&config.output_path),
        &metadata(config, command),
    )?;
    Ok(config.output_path.clone())
}

impl Error {
    /// Process exit status: 2 config, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Validation(_) => 2,
            Error::DimensionMismatch { .. }
            | Error::NotPositiveDefinite { .. }
            | Error::InvalidDof => 3,
            Error::File { .. } | Error::Io(_) => 4,
        }
    }
}
