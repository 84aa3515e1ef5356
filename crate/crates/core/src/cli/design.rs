use std::path::Path;

use super::config::{CovariatePolicy, ModelKind};
use crate::error::{Error, Result};
use crate::numerics::{Matrix, RandomSource};

/// Stream id reserved for seeded covariates.
pub const STREAM_DESIGN: u64 = 0;

/// Design matrix for `n` observations. Seeded covariates are the first `n`
/// draws of one stream, so designs for different `n` are nested.
pub fn build_design(
    kind: ModelKind,
    n: usize,
    policy: CovariatePolicy,
    seed: u64,
    custom_path: Option<&Path>,
) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::Validation("design needs at least one row".into()));
    }
    match kind {
        ModelKind::InterceptOnly => Matrix::new(n, 1, vec![1.0; n]),
        ModelKind::InterceptSlope => {
            let x: Vec<f64> = match policy {
                CovariatePolicy::Equispaced01 if n == 1 => vec![0.0],
                CovariatePolicy::Equispaced01 => {
                    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
                }
                CovariatePolicy::StandardNormalSeeded => {
                    let mut src = RandomSource::new(seed, STREAM_DESIGN);
                    (0..n).map(|_| src.normal()).collect()
                }
            };
            Matrix::new(n, 2, x.iter().flat_map(|&xi| [1.0, xi]).collect())
        }
        ModelKind::Custom => {
            let path = custom_path
                .ok_or_else(|| Error::Config("model_kind = custom requires design_path".into()))?;
            let full = read_design_file(path)?;
            if full.rows() < n {
                return Err(Error::Validation(format!(
                    "design file {} has {} rows, {n} requested",
                    path.display(),
                    full.rows()
                )));
            }
            let rows: Vec<usize> = (0..n).collect();
            let cols: Vec<usize> = (0..full.cols()).collect();
            Ok(full.select(&rows, &cols))
        }
    }
}

/// Reads a design matrix: one comma-separated row per line, `#` comments.
pub fn read_design_file(path: &Path) -> Result<Matrix> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Config(format!("{} line {}: {e}", path.display(), lineno + 1)))?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Config(format!(
            "design file {} is empty",
            path.display()
        )));
    }
    Matrix::from_rows(&rows)
}
