//! Evidence for a handful of observed data sets.
//!
//! `cargo run --example evidence_basics`

use fbst_cutoff::evidence::{evidence, EvidenceValue};
use fbst_cutoff::model::{GaussianDist, LinearModel, Partition};
use fbst_cutoff::numerics::Matrix;
use fbst_cutoff::Result;

pub fn run() -> Result<Vec<(&'static str, EvidenceValue)>> {
    let y = [0.42, -0.13, 0.91, 0.27, 0.05, 0.66, -0.38, 0.74];
    let n = y.len();
    let mut out = Vec::new();

    // y = θ₁ + ε, H: θ₁ = 0
    let intercept = LinearModel::new(Matrix::new(n, 1, vec![1.0; n])?, 1.0)?;
    let h_all = Partition::new(1, vec![0])?;
    out.push((
        "intercept, H: theta1 = 0",
        evidence(&intercept, &GaussianDist::standard(1), &h_all, &y)?,
    ));
    let shifted: Vec<f64> = y.iter().map(|v| v + 1.5).collect();
    out.push((
        "intercept, shifted data",
        evidence(&intercept, &GaussianDist::standard(1), &h_all, &shifted)?,
    ));

    // y = θ₁ + θ₂ x + ε, H: θ₂ = 0
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| vec![1.0, i as f64 / (n - 1) as f64])
        .collect();
    let slope = LinearModel::new(Matrix::from_rows(&rows)?, 1.0)?;
    let h_slope = Partition::new(2, vec![1])?;
    out.push((
        "intercept + slope, H: theta2 = 0",
        evidence(&slope, &GaussianDist::standard(2), &h_slope, &y)?,
    ));
    let trending: Vec<f64> = y
        .iter()
        .enumerate()
        .map(|(i, v)| v + 3.0 * rows[i][1])
        .collect();
    out.push((
        "intercept + slope, trending data",
        evidence(&slope, &GaussianDist::standard(2), &h_slope, &trending)?,
    ));
    Ok(out)
}

fn main() -> Result<()> {
    for (label, ev) in run()? {
        println!(
            "{label:34} ev = {:.6}  q = {:.6}  log sup_H f = {:.6}",
            ev.ev, ev.mahalanobis, ev.sup_h_logdensity
        );
    }
    Ok(())
}
