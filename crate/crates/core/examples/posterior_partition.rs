//! Conjugate posterior update and the (θ₁, θ₂) partition machinery.
//!
//! `cargo run --example posterior_partition`

use fbst_cutoff::evidence::sup_h_point;
use fbst_cutoff::model::{
    conditional_moments, posterior, reorder_for_partition, GaussianDist, LinearModel, Partition,
};
use fbst_cutoff::numerics::{Matrix, Vector};
use fbst_cutoff::Result;

pub struct Summary {
    pub posterior: GaussianDist,
    pub cond_mean: Vector,
    pub cond_cov: Matrix,
    pub sup_point: Vector,
    pub canonical: Partition,
}

pub fn run() -> Result<Summary> {
    let design = Matrix::from_rows(&[
        vec![1.0, -1.0, 0.3],
        vec![1.0, -0.5, 1.2],
        vec![1.0, 0.0, -0.7],
        vec![1.0, 0.5, 0.1],
        vec![1.0, 1.0, 0.9],
    ])?;
    let model = LinearModel::new(design, 0.5)?;
    let prior = GaussianDist::new(
        Vector::from(vec![0.0, 0.0, 0.0]),
        Matrix::from_rows(&[
            vec![1.0, 0.3, 0.0],
            vec![0.3, 1.0, 0.2],
            vec![0.0, 0.2, 1.0],
        ])?,
    )?;
    let y = [0.1, 0.9, 0.4, 1.6, 2.2];

    // test the slope (index 1); move it to the trailing block first
    let part = Partition::new(3, vec![1])?;
    let (model_c, prior_c, canonical) = reorder_for_partition(&model, &prior, &part)?;
    let post = posterior(&model_c, &prior_c, &y)?;
    let prior_cm = conditional_moments(&prior_c, &canonical)?;
    let sup_point = sup_h_point(&post, &canonical)?;
    Ok(Summary {
        posterior: post,
        cond_mean: prior_cm.mean_slope_base,
        cond_cov: prior_cm.cond_cov,
        sup_point,
        canonical,
    })
}

fn main() -> Result<()> {
    let s = run()?;
    println!(
        "canonical order: theta1 = {:?}, theta2 = {:?}",
        s.canonical.theta1_indices(),
        s.canonical.theta2_indices()
    );
    println!("posterior mean      {:?}", s.posterior.mean().as_slice());
    println!("posterior cov       {:?}", s.posterior.cov().as_slice());
    println!("prior theta1|theta2=0 mean {:?}", s.cond_mean.as_slice());
    println!("prior theta1|theta2=0 cov  {:?}", s.cond_cov.as_slice());
    println!("constrained maximizer      {:?}", s.sup_point.as_slice());
    Ok(())
}
