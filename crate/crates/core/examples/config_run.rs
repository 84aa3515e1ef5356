//! Drive a run from a config file, the way the `fbst` binary does, and show
//! the CSV plus its metadata sidecar.
//!
//! `cargo run --release --example config_run`

use std::path::Path;

use fbst_cutoff::cli::{execute, metadata_path, Command, RunConfig};
use fbst_cutoff::Result;

const CONFIG: &str = "\
model_kind = intercept_slope
n_list = [10, 50]
sigma2 = 1
prior_mean = [0, 0]
prior_cov = [[1, 0], [0, 1]]
tested_indices = [1]
a = 1
b = 1
n_samples = 20000
seed = 7
covariate_policy = equispaced_01
output_path = table.csv
";

pub fn run(dir: &Path) -> Result<(String, String)> {
    let mut config = RunConfig::parse(CONFIG)?;
    config.output_path = dir.join("table.csv");
    let csv = execute(&Command::Table, &config)?;
    Ok((
        std::fs::read_to_string(&csv)?,
        std::fs::read_to_string(metadata_path(&csv))?,
    ))
}

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("fbst-config-run");
    let (csv, meta) = run(&dir)?;
    println!("{csv}\n{meta}");
    Ok(())
}
