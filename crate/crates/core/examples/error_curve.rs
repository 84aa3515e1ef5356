//! Averaged error probabilities as a function of the cut-off k, as CSV.
//!
//! `cargo run --release --example error_curve -- [n] [n_samples] [grid_size] > curve.csv`

use fbst_cutoff::cli::{curve_csv, run_curve, RunConfig};
use fbst_cutoff::cutoff::ErrorCurve;
use fbst_cutoff::Result;

pub fn run(n: usize, n_samples: usize, grid_size: usize) -> Result<ErrorCurve> {
    let config = RunConfig {
        n_samples,
        ..RunConfig::intercept_only()
    };
    run_curve(&config, n, grid_size)
}

fn main() -> Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    let n = args.first().copied().unwrap_or(100);
    let n_samples = args.get(1).copied().unwrap_or(100_000);
    let grid = args.get(2).copied().unwrap_or(101);
    print!("{}", curve_csv(&run(n, n_samples, grid)?));
    Ok(())
}
