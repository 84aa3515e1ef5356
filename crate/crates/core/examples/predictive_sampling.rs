//! Low-rank prior-predictive sampling checked against the dense covariance.
//!
//! `cargo run --release --example predictive_sampling -- [draws]`

use fbst_cutoff::model::{GaussianDist, LinearModel, Partition};
use fbst_cutoff::numerics::Matrix;
use fbst_cutoff::predictive::{predictive_under_a, predictive_under_h, LowRankGaussian};
use fbst_cutoff::Result;

/// Largest |empirical - analytic| covariance entry, in standard errors.
pub fn worst_covariance_z(dist: &LowRankGaussian, draws: usize, seed: u64) -> f64 {
    let n = dist.n();
    let ys = dist.sample_chunked(seed, 0, draws);
    let mean: Vec<f64> = (0..n)
        .map(|i| ys.iter().map(|y| y[i]).sum::<f64>() / draws as f64)
        .collect();
    let dense = dist.dense_covariance();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            let emp = ys
                .iter()
                .map(|y| (y[i] - mean[i]) * (y[j] - mean[j]))
                .sum::<f64>()
                / (draws as f64 - 1.0);
            let se =
                ((dense[(i, i)] * dense[(j, j)] + dense[(i, j)].powi(2)) / draws as f64).sqrt();
            worst = worst.max((emp - dense[(i, j)]).abs() / se);
        }
    }
    worst
}

pub fn run(draws: usize) -> Result<(f64, f64)> {
    let design = Matrix::from_rows(&[vec![1.0, -0.8], vec![1.0, 0.1], vec![1.0, 1.3]])?;
    let model = LinearModel::new(design, 1.0)?;
    let prior = GaussianDist::standard(2);
    let part = Partition::new(2, vec![1])?;
    let under_h = predictive_under_h(&model, &prior, &part)?;
    let under_a = predictive_under_a(&model, &prior)?;
    Ok((
        worst_covariance_z(&under_h, draws, 1),
        worst_covariance_z(&under_a, draws, 2),
    ))
}

fn main() -> Result<()> {
    let draws = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200_000);
    let (h, a) = run(draws)?;
    println!("worst covariance deviation over {draws} draws: under H {h:.2} se, under A {a:.2} se");
    Ok(())
}
