#![allow(clippy::needless_range_loop)]

mod common;

use common::{gauss_jordan_inverse, random_spd, Lcg};
use fbst_cutoff::model::{
    conditional_moments, invert_permutation, permute, posterior, reorder_for_partition,
    GaussianDist, LinearModel, Partition,
};
use fbst_cutoff::numerics::{Matrix, Vector};
use proptest::prelude::*;

fn random_problem(rng: &mut Lcg, n: usize, p: usize) -> (LinearModel, GaussianDist, Vec<f64>) {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..p).map(|_| rng.normal()).collect())
        .collect();
    let model = LinearModel::new(Matrix::from_rows(&rows).unwrap(), 0.2 + rng.uniform()).unwrap();
    let mean: Vec<f64> = (0..p).map(|_| rng.signed()).collect();
    let prior = GaussianDist::new(
        Vector::from(mean),
        Matrix::from_rows(&random_spd(rng, p)).unwrap(),
    )
    .unwrap();
    let y = (0..n).map(|_| 2.0 * rng.normal()).collect();
    (model, prior, y)
}

fn as_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

#[test]
fn posterior_matches_explicit_inverse_formula() {
    let mut rng = Lcg::new(11);
    for _ in 0..50 {
        let p = 1 + rng.below(5);
        let n = p + rng.below(10);
        let (model, prior, y) = random_problem(&mut rng, n, p);
        let post = posterior(&model, &prior, &y).unwrap();
        let s2 = model.noise_variance();
        let w0_inv = gauss_jordan_inverse(&as_rows(prior.cov()));
        let xtx = as_rows(&model.design().gram());
        let prec: Vec<Vec<f64>> = (0..p)
            .map(|i| (0..p).map(|j| w0_inv[i][j] + xtx[i][j] / s2).collect())
            .collect();
        let w_star = gauss_jordan_inverse(&prec);
        let xty = model.design().t_mul_vec(&y).unwrap();
        let rhs: Vec<f64> = (0..p)
            .map(|i| (0..p).map(|j| w0_inv[i][j] * prior.mean()[j]).sum::<f64>() + xty[i] / s2)
            .collect();
        for i in 0..p {
            let m_i: f64 = (0..p).map(|j| w_star[i][j] * rhs[j]).sum();
            assert!((post.mean()[i] - m_i).abs() < 1e-9 * m_i.abs().max(1.0));
            for j in 0..p {
                assert!((post.cov()[(i, j)] - w_star[i][j]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn conditional_moments_match_explicit_schur() {
    let mut rng = Lcg::new(5);
    for _ in 0..50 {
        let p = 2 + rng.below(5);
        let r = 1 + rng.below(p - 1);
        let cov = random_spd(&mut rng, p);
        let mean: Vec<f64> = (0..p).map(|_| rng.signed()).collect();
        let dist = GaussianDist::new(Vector::from(mean.clone()), Matrix::from_rows(&cov).unwrap())
            .unwrap();
        let part = Partition::trailing(p, r).unwrap();
        let cm = conditional_moments(&dist, &part).unwrap();
        let s = p - r;
        let w22: Vec<Vec<f64>> = (s..p).map(|i| cov[i][s..].to_vec()).collect();
        let w22_inv = gauss_jordan_inverse(&w22);
        for i in 0..s {
            // m₁ + W₁₂ W₂₂⁻¹ (0 - m₂)
            let mut mi = mean[i];
            for a in 0..r {
                for b in 0..r {
                    mi -= cov[i][s + a] * w22_inv[a][b] * mean[s + b];
                }
            }
            assert!((cm.mean_slope_base[i] - mi).abs() < 1e-10);
            for j in 0..s {
                let mut cij = cov[i][j];
                for a in 0..r {
                    for b in 0..r {
                        cij -= cov[i][s + a] * w22_inv[a][b] * cov[s + b][j];
                    }
                }
                assert!((cm.cond_cov[(i, j)] - cij).abs() < 1e-10);
            }
        }
    }
}

proptest! {
    #[test]
    fn posterior_precision_dominates_prior(seed in any::<u64>()) {
        let mut rng = Lcg::new(seed);
        let p = 1 + rng.below(5);
        let n = 1 + rng.below(12);
        let (model, prior, y) = random_problem(&mut rng, n, p);
        let post = posterior(&model, &prior, &y).unwrap();
        for _ in 0..10 {
            let mut v: Vec<f64> = (0..p).map(|_| rng.normal()).collect();
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
            let post_q = post.cov_factor().mahalanobis(&v).unwrap();
            let prior_q = prior.cov_factor().mahalanobis(&v).unwrap();
            prop_assert!(post_q >= prior_q - 1e-10 * prior_q.max(1.0), "{} < {}", post_q, prior_q);
        }
    }

    #[test]
    fn posterior_ignores_joint_row_order(seed in any::<u64>()) {
        let mut rng = Lcg::new(seed);
        let p = 1 + rng.below(4);
        let n = p + rng.below(10);
        let (model, prior, y) = random_problem(&mut rng, n, p);
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.below(i + 1));
        }
        let all_cols: Vec<usize> = (0..p).collect();
        let shuffled = LinearModel::new(model.design().select(&order, &all_cols), model.noise_variance()).unwrap();
        let y2: Vec<f64> = order.iter().map(|&i| y[i]).collect();
        let a = posterior(&model, &prior, &y).unwrap();
        let b = posterior(&shuffled, &prior, &y2).unwrap();
        for i in 0..p {
            prop_assert!((a.mean()[i] - b.mean()[i]).abs() <= 1e-12 * a.mean()[i].abs().max(1.0));
            for j in 0..p {
                prop_assert!((a.cov()[(i, j)] - b.cov()[(i, j)]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn block_diagonal_conditional_is_exact(seed in any::<u64>()) {
        let mut rng = Lcg::new(seed);
        let s = 1 + rng.below(3);
        let r = 1 + rng.below(3);
        let p = s + r;
        let top = random_spd(&mut rng, s);
        let bottom = random_spd(&mut rng, r);
        let mut cov = Matrix::zeros(p, p);
        for i in 0..s { for j in 0..s { cov[(i, j)] = top[i][j]; } }
        for i in 0..r { for j in 0..r { cov[(s + i, s + j)] = bottom[i][j]; } }
        let mean: Vec<f64> = (0..p).map(|_| rng.signed()).collect();
        let dist = GaussianDist::new(Vector::from(mean.clone()), cov.clone()).unwrap();
        let cm = conditional_moments(&dist, &Partition::trailing(p, r).unwrap()).unwrap();
        prop_assert_eq!(cm.mean_slope_base.as_slice(), &mean[..s]);
        let idx: Vec<usize> = (0..s).collect();
        prop_assert_eq!(cm.cond_cov, cov.select(&idx, &idx));
    }

    #[test]
    fn reorder_round_trips_bit_for_bit(seed in any::<u64>()) {
        let mut rng = Lcg::new(seed);
        let p = 1 + rng.below(6);
        let (model, prior, _) = random_problem(&mut rng, p + 3, p);
        let mut tested: Vec<usize> = (0..p).filter(|_| rng.uniform() < 0.5).collect();
        if tested.is_empty() { tested.push(rng.below(p)); }
        let part = Partition::new(p, tested).unwrap();
        let (m2, g2, canonical) = reorder_for_partition(&model, &prior, &part).unwrap();
        prop_assert!(canonical.is_canonical());
        let inv = invert_permutation(&part.canonical_permutation());
        let (m3, g3) = permute(&m2, &g2, &inv).unwrap();
        prop_assert_eq!(m3, model);
        prop_assert_eq!(g3, prior);
    }
}
