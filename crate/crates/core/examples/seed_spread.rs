//! Seed-to-seed spread of the Monte Carlo cut-off.
//!
//! `cargo run --release --example seed_spread -- [n_samples] [seeds] [n,...]`

use fbst_cutoff::cli::{run_cutoff, RunConfig};
use fbst_cutoff::Result;

pub struct Spread {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub k_stars: Vec<f64>,
}

pub fn spread(config: &RunConfig, n: usize, seeds: &[u64]) -> Result<Spread> {
    let k_stars = seeds
        .iter()
        .map(|&seed| {
            let cfg = RunConfig {
                seed,
                ..config.clone()
            };
            run_cutoff(&cfg, n).map(|r| r.k_star)
        })
        .collect::<Result<Vec<_>>>()?;
    let m = k_stars.len() as f64;
    let mean = k_stars.iter().sum::<f64>() / m;
    let sd = (k_stars.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0)).sqrt();
    Ok(Spread {
        n,
        mean,
        sd,
        k_stars,
    })
}

fn main() -> Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n_samples = args.first().and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let n_seeds: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let n_list: Vec<usize> = args
        .get(2)
        .map(|s| s.split(',').filter_map(|v| v.parse().ok()).collect())
        .unwrap_or_else(|| vec![10, 100, 500]);
    let seeds: Vec<u64> = (1..=n_seeds).collect();
    let config = RunConfig {
        n_samples,
        ..RunConfig::intercept_only()
    };
    println!("n,mean_k_star,sd_k_star,k_stars");
    for n in n_list {
        let s = spread(&config, n, &seeds)?;
        let ks: Vec<String> = s.k_stars.iter().map(|k| format!("{k:.5}")).collect();
        println!("{},{:.5},{:.5},{}", s.n, s.mean, s.sd, ks.join(" "));
    }
    Ok(())
}
