//! Adaptive cut-off k*(n, d) for the intercept-only (d = 1) and
//! intercept + slope (d = 2) models.
//!
//! `cargo run --release --example cutoff_table -- [n_samples] [n,n,...]`

use fbst_cutoff::cli::{run_table, RunConfig, TableRow};
use fbst_cutoff::Result;

pub fn run(n_samples: usize, n_list: &[usize]) -> Result<(Vec<TableRow>, Vec<TableRow>)> {
    let d1 = RunConfig {
        n_samples,
        n_list: n_list.to_vec(),
        ..RunConfig::intercept_only()
    };
    let d2 = RunConfig {
        n_samples,
        n_list: n_list.to_vec(),
        ..RunConfig::intercept_slope()
    };
    Ok((run_table(&d1)?, run_table(&d2)?))
}

fn main() -> Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n_samples = args.first().and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let n_list: Vec<usize> = args
        .get(1)
        .map(|s| s.split(',').filter_map(|v| v.parse().ok()).collect())
        .unwrap_or_else(|| vec![10, 50, 100, 200, 500]);
    let (d1, d2) = run(n_samples, &n_list)?;
    println!("{:>6} {:>10} {:>10}", "n", "k* d=1", "k* d=2");
    for (a, b) in d1.iter().zip(&d2) {
        println!("{:>6} {:>10.5} {:>10.5}", a.n, a.k_star, b.k_star);
    }
    Ok(())
}
