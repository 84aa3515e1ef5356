//! Optimal averaged error probabilities α*, β* and α* + β* versus n.
//!
//! `cargo run --release --example optimal_errors -- [n_samples]`

use fbst_cutoff::cli::{run_optimal_errors, RunConfig};
use fbst_cutoff::cutoff::CutoffResult;
use fbst_cutoff::Result;

pub fn run(n_samples: usize, n_list: &[usize]) -> Result<Vec<CutoffResult>> {
    let config = RunConfig {
        n_samples,
        n_list: n_list.to_vec(),
        ..RunConfig::intercept_only()
    };
    run_optimal_errors(&config)
}

fn main() -> Result<()> {
    let n_samples = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100_000);
    println!(
        "{:>6} {:>9} {:>9} {:>9} {:>9}",
        "n", "k*", "alpha*", "beta*", "sum"
    );
    for r in run(n_samples, &[10, 50, 100, 200, 500, 1000])? {
        println!(
            "{:>6} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            r.n, r.k_star, r.alpha_star, r.beta_star, r.objective_star
        );
    }
    Ok(())
}
