//! Run configuration: a flat `key = value` text file whose keys are the
//! [`RunConfig`] field names. Vectors are written `[1, 2]`, matrices
//! `[[1, 0], [0, 1]]`. `#` starts a comment.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{GaussianDist, Partition};
use crate::numerics::{Matrix, Vector};

pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const QUICK_SAMPLES: usize = 100_000;
pub const DEFAULT_SEED: u64 = 20_190_801;
pub const DEFAULT_GRID_SIZE: usize = 101;

/// Sample sizes reported in the reference cut-off table.
pub const TABLE_N: [usize; 14] = [
    10, 50, 100, 150, 200, 250, 300, 350, 400, 450, 500, 1000, 1500, 2000,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// `y = θ₁ + ε`
    InterceptOnly,
    /// `y = θ₁ + θ₂ x + ε`
    InterceptSlope,
    /// Design matrix read from `design_path`.
    Custom,
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intercept_only" => Ok(ModelKind::InterceptOnly),
            "intercept_slope" => Ok(ModelKind::InterceptSlope),
            "custom" => Ok(ModelKind::Custom),
            other => Err(Error::Config(format!("unknown model_kind '{other}'"))),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::InterceptOnly => "intercept_only",
            ModelKind::InterceptSlope => "intercept_slope",
            ModelKind::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovariatePolicy {
    /// `x_i = i / (n - 1)` on `[0, 1]`.
    Equispaced01,
    /// `x_i` iid standard normal from the config seed.
    StandardNormalSeeded,
}

impl FromStr for CovariatePolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equispaced_01" => Ok(CovariatePolicy::Equispaced01),
            "standard_normal_seeded" => Ok(CovariatePolicy::StandardNormalSeeded),
            other => Err(Error::Config(format!("unknown covariate_policy '{other}'"))),
        }
    }
}

impl fmt::Display for CovariatePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CovariatePolicy::Equispaced01 => "equispaced_01",
            CovariatePolicy::StandardNormalSeeded => "standard_normal_seeded",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model_kind: ModelKind,
    pub n_list: Vec<usize>,
    pub sigma2: f64,
    pub prior_mean: Vec<f64>,
    pub prior_cov: Vec<Vec<f64>>,
    pub tested_indices: Vec<usize>,
    pub a: f64,
    pub b: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub covariate_policy: CovariatePolicy,
    pub output_path: PathBuf,
    pub design_path: Option<PathBuf>,
    pub grid_size: usize,
}

impl RunConfig {
    /// `y = θ₁ + ε`, `H: θ₁ = 0`, `m0 = 0`, `W0 = 1`, `σ² = 1`, `a = b = 1`.
    pub fn intercept_only() -> Self {
        RunConfig {
            model_kind: ModelKind::InterceptOnly,
            n_list: TABLE_N.to_vec(),
            sigma2: 1.0,
            prior_mean: vec![0.0],
            prior_cov: vec![vec![1.0]],
            tested_indices: vec![0],
            a: 1.0,
            b: 1.0,
            n_samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            covariate_policy: CovariatePolicy::StandardNormalSeeded,
            output_path: PathBuf::from("table_d1.csv"),
            design_path: None,
            grid_size: DEFAULT_GRID_SIZE,
        }
    }

    /// `y = θ₁ + θ₂ x + ε`, `H: θ₂ = 0`, `m0 = 0`, `W0 = I₂`, `σ² = 1`, `a = b = 1`.
    pub fn intercept_slope() -> Self {
        RunConfig {
            model_kind: ModelKind::InterceptSlope,
            prior_mean: vec![0.0, 0.0],
            prior_cov: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            tested_indices: vec![1],
            output_path: PathBuf::from("table_d2.csv"),
            ..RunConfig::intercept_only()
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        RunConfig::parse(&text)
    }

    /// Parses a config. Keys not present keep the value of the preset named
    /// by `model_kind` (which itself defaults to `intercept_only`).
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            pairs.push((key.trim().to_string(), value.trim().to_string(), lineno + 1));
        }
        let kind = pairs
            .iter()
            .find(|(k, _, _)| k == "model_kind")
            .map(|(_, v, _)| v.parse::<ModelKind>())
            .transpose()?
            .unwrap_or(ModelKind::InterceptOnly);
        let mut cfg = match kind {
            ModelKind::InterceptSlope => RunConfig::intercept_slope(),
            _ => RunConfig {
                model_kind: kind,
                ..RunConfig::intercept_only()
            },
        };
        for (key, value, lineno) in pairs {
            cfg.set(&key, &value)
                .map_err(|e| Error::Config(format!("line {lineno}: {key}: {}", strip(e))))?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "model_kind" => self.model_kind = value.parse()?,
            "n_list" => self.n_list = parse_list(value)?,
            "sigma2" => self.sigma2 = parse_scalar(value)?,
            "prior_mean" => self.prior_mean = parse_list(value)?,
            "prior_cov" => self.prior_cov = parse_matrix(value)?,
            "tested_indices" => self.tested_indices = parse_list(value)?,
            "a" => self.a = parse_scalar(value)?,
            "b" => self.b = parse_scalar(value)?,
            "n_samples" => self.n_samples = parse_scalar(value)?,
            "seed" => self.seed = parse_scalar(value)?,
            "covariate_policy" => self.covariate_policy = value.parse()?,
            "output_path" => self.output_path = PathBuf::from(unquote(value)),
            "design_path" => self.design_path = Some(PathBuf::from(unquote(value))),
            "grid_size" => self.grid_size = parse_scalar(value)?,
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Renders the config in its own file format; `parse` of the result
    /// reproduces `self`.
    pub fn to_config_string(&self) -> String {
        fn list<T: fmt::Display>(v: &[T]) -> String {
            let items: Vec<String> = v.iter().map(ToString::to_string).collect();
            format!("[{}]", items.join(", "))
        }
        let mut s = String::new();
        let rows: Vec<String> = self.prior_cov.iter().map(|r| list(r)).collect();
        let _ = writeln!(s, "model_kind = {}", self.model_kind);
        let _ = writeln!(s, "n_list = {}", list(&self.n_list));
        let _ = writeln!(s, "sigma2 = {}", self.sigma2);
        let _ = writeln!(s, "prior_mean = {}", list(&self.prior_mean));
        let _ = writeln!(s, "prior_cov = [{}]", rows.join(", "));
        let _ = writeln!(s, "tested_indices = {}", list(&self.tested_indices));
        let _ = writeln!(s, "a = {}", self.a);
        let _ = writeln!(s, "b = {}", self.b);
        let _ = writeln!(s, "n_samples = {}", self.n_samples);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "covariate_policy = {}", self.covariate_policy);
        let _ = writeln!(s, "output_path = {}", self.output_path.display());
        if let Some(p) = &self.design_path {
            let _ = writeln!(s, "design_path = {}", p.display());
        }
        let _ = writeln!(s, "grid_size = {}", self.grid_size);
        s
    }

    /// Number of regression coefficients implied by the model kind.
    pub fn parameter_count(&self) -> Result<usize> {
        match self.model_kind {
            ModelKind::InterceptOnly => Ok(1),
            ModelKind::InterceptSlope => Ok(2),
            ModelKind::Custom => {
                let path = self.design_path.as_ref().ok_or_else(|| {
                    Error::Config("model_kind = custom requires design_path".into())
                })?;
                Ok(super::design::read_design_file(path)?.cols())
            }
        }
    }

    /// Checks the config against the model dimensions, returning the prior
    /// and the partition it describes.
    pub fn validate(&self) -> Result<(GaussianDist, Partition)> {
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::Config(format!(
                "sigma2 must be positive, got {}",
                self.sigma2
            )));
        }
        if !(self.a > 0.0 && self.a.is_finite()) || !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::Config(format!(
                "weights a and b must be positive, got a = {}, b = {}",
                self.a, self.b
            )));
        }
        if self.n_samples == 0 {
            return Err(Error::Config("n_samples must be positive".into()));
        }
        if self.grid_size < 2 {
            return Err(Error::Config("grid_size must be at least 2".into()));
        }
        if self.n_list.contains(&0) {
            return Err(Error::Config("every n in n_list must be positive".into()));
        }
        if self.n_list.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Config("n_list must be ascending".into()));
        }
        let p = self.parameter_count()?;
        if let Some(&bad) = self.tested_indices.iter().find(|&&i| i >= p) {
            return Err(Error::Config(format!(
                "tested index {bad} out of range for {p} parameters"
            )));
        }
        let part = Partition::new(p, self.tested_indices.clone())
            .map_err(|e| Error::Config(format!("tested_indices: {}", strip(e))))?;
        if self.prior_mean.len() != p {
            return Err(Error::Config(format!(
                "prior_mean has {} entries, model has {p} parameters",
                self.prior_mean.len()
            )));
        }
        if self.prior_cov.len() != p || self.prior_cov.iter().any(|r| r.len() != p) {
            return Err(Error::Config(format!("prior_cov must be {p}x{p}")));
        }
        let mean = Vector::new(self.prior_mean.clone())
            .map_err(|e| Error::Config(format!("prior_mean: {}", strip(e))))?;
        let cov = Matrix::from_rows(&self.prior_cov)
            .map_err(|e| Error::Config(format!("prior_cov: {}", strip(e))))?;
        let prior = GaussianDist::new(mean, cov)
            .map_err(|_| Error::Config("prior_cov is not symmetric positive definite".into()))?;
        Ok((prior, part))
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Config(m) | Error::Validation(m) => m,
        other => other.to_string(),
    }
}

fn unquote(s: &str) -> &str {
    s.trim_matches('"')
}

fn parse_scalar<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .replace('_', "")
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse '{s}'")))
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Config(format!("expected bracketed list, got '{s}'")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(parse_scalar).collect()
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<f64>>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Config(format!("expected bracketed matrix, got '{s}'")))?;
    let mut rows = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let end = rest
            .find(']')
            .ok_or_else(|| Error::Config(format!("unterminated matrix row in '{s}'")))?;
        rows.push(parse_list(&rest[..=end])?);
        rest = rest[end + 1..]
            .trim_start()
            .trim_start_matches(',')
            .trim_start();
    }
    Ok(rows)
}
