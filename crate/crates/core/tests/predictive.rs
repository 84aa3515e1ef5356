mod common;

use common::{gauss_jordan_inverse, matmul, random_spd, transpose, Lcg};
use fbst_cutoff::model::{GaussianDist, LinearModel, Partition};
use fbst_cutoff::numerics::{Matrix, RandomSource, Vector};
use fbst_cutoff::predictive::{predictive_under_a, predictive_under_h, LowRankGaussian};

fn rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Dense `(mean, cov)` of y = Xθ + e with θ from the prior conditioned on θ₂ = 0.
fn dense_h(
    model: &LinearModel,
    prior: &GaussianDist,
    part: &Partition,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = model.n();
    let (t1, t2) = (part.theta1_indices(), part.theta2_indices());
    let w = rows(prior.cov());
    let m = prior.mean();
    let w22: Vec<Vec<f64>> = t2
        .iter()
        .map(|&i| t2.iter().map(|&j| w[i][j]).collect())
        .collect();
    let w22_inv = gauss_jordan_inverse(&w22);
    let reg: Vec<Vec<f64>> = t1
        .iter()
        .map(|&i| {
            (0..t2.len())
                .map(|b| (0..t2.len()).map(|a| w[i][t2[a]] * w22_inv[a][b]).sum())
                .collect()
        })
        .collect();
    let cm: Vec<f64> = (0..t1.len())
        .map(|a| m[t1[a]] - (0..t2.len()).map(|b| reg[a][b] * m[t2[b]]).sum::<f64>())
        .collect();
    let cc: Vec<Vec<f64>> = (0..t1.len())
        .map(|a| {
            (0..t1.len())
                .map(|c| {
                    w[t1[a]][t1[c]]
                        - (0..t2.len())
                            .map(|b| reg[a][b] * w[t2[b]][t1[c]])
                            .sum::<f64>()
                })
                .collect()
        })
        .collect();
    let x1: Vec<Vec<f64>> = (0..n)
        .map(|i| t1.iter().map(|&j| model.design()[(i, j)]).collect())
        .collect();
    let mean = (0..n)
        .map(|i| (0..t1.len()).map(|a| x1[i][a] * cm[a]).sum())
        .collect();
    let mut cov = if t1.is_empty() {
        vec![vec![0.0; n]; n]
    } else {
        matmul(&matmul(&x1, &cc), &transpose(&x1))
    };
    for (i, r) in cov.iter_mut().enumerate() {
        r[i] += model.noise_variance();
    }
    (mean, cov)
}

fn dense_a(model: &LinearModel, prior: &GaussianDist) -> (Vec<f64>, Vec<Vec<f64>>) {
    let x = rows(model.design());
    let mean = (0..model.n())
        .map(|i| (0..model.p()).map(|j| x[i][j] * prior.mean()[j]).sum())
        .collect();
    let mut cov = matmul(&matmul(&x, &rows(prior.cov())), &transpose(&x));
    for (i, r) in cov.iter_mut().enumerate() {
        r[i] += model.noise_variance();
    }
    (mean, cov)
}

fn random_setup(rng: &mut Lcg, n: usize, p: usize) -> (LinearModel, GaussianDist, Partition) {
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..p).map(|_| rng.normal()).collect())
        .collect();
    let model = LinearModel::new(Matrix::from_rows(&x).unwrap(), 0.3 + rng.uniform()).unwrap();
    let mean: Vec<f64> = (0..p).map(|_| rng.signed()).collect();
    let prior = GaussianDist::new(
        Vector::from(mean),
        Matrix::from_rows(&random_spd(rng, p)).unwrap(),
    )
    .unwrap();
    let mut tested: Vec<usize> = (0..p).filter(|_| rng.uniform() < 0.5).collect();
    if tested.is_empty() {
        tested.push(rng.below(p));
    }
    (model, prior, Partition::new(p, tested).unwrap())
}

fn max_abs_diff(a: &Matrix, b: &[Vec<f64>]) -> f64 {
    let mut m: f64 = 0.0;
    for (i, row) in b.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m = m.max((a[(i, j)] - v).abs());
        }
    }
    m
}

#[test]
fn dense_covariance_matches_direct_construction() {
    let mut rng = Lcg::new(77);
    for _ in 0..200 {
        let n = 1 + rng.below(20);
        let p = 1 + rng.below(4);
        let (model, prior, part) = random_setup(&mut rng, n, p);
        let h = predictive_under_h(&model, &prior, &part).unwrap();
        let (mh, ch) = dense_h(&model, &prior, &part);
        assert!(max_abs_diff(&h.dense_covariance(), &ch) <= 1e-12);
        for (a, b) in h.mean().iter().zip(&mh) {
            assert!((a - b).abs() <= 1e-12);
        }
        let a = predictive_under_a(&model, &prior).unwrap();
        let (ma, ca) = dense_a(&model, &prior);
        assert!(max_abs_diff(&a.dense_covariance(), &ca) <= 1e-12);
        for (x, y) in a.mean().iter().zip(&ma) {
            assert!((x - y).abs() <= 1e-12);
        }
    }
}

struct Moments {
    mean: Vec<f64>,
    cov: Vec<Vec<f64>>,
}

fn moments(d: &LowRankGaussian, draws: usize, seed: u64) -> Moments {
    let n = d.n();
    let mut sum = vec![0.0; n];
    let mut cross = vec![vec![0.0; n]; n];
    let mut src = RandomSource::new(seed, 0);
    let mut y = vec![0.0; n];
    let mut scratch = d.scratch();
    for _ in 0..draws {
        d.draw_into(&mut src, &mut y, &mut scratch);
        for i in 0..n {
            let di = y[i] - d.mean()[i];
            sum[i] += di;
            for j in 0..n {
                cross[i][j] += di * (y[j] - d.mean()[j]);
            }
        }
    }
    let nd = draws as f64;
    Moments {
        mean: sum
            .iter()
            .zip(d.mean().iter())
            .map(|(s, m)| m + s / nd)
            .collect(),
        cov: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| cross[i][j] / nd - sum[i] * sum[j] / (nd * nd))
                    .collect()
            })
            .collect(),
    }
}

#[test]
fn small_case_sample_covariance_within_three_standard_errors() {
    let x = Matrix::from_rows(&[vec![1.0, -0.5], vec![1.0, 0.2], vec![1.0, 1.3]]).unwrap();
    let model = LinearModel::new(x, 0.7).unwrap();
    let prior = GaussianDist::new(
        Vector::from(vec![0.4, -0.3]),
        Matrix::from_rows(&[vec![1.2, 0.3], vec![0.3, 0.8]]).unwrap(),
    )
    .unwrap();
    let draws = 1_000_000;
    let d = predictive_under_a(&model, &prior).unwrap();
    let sigma = d.dense_covariance();
    let got = moments(&d, draws, 3);
    for i in 0..3 {
        let se = (sigma[(i, i)] / draws as f64).sqrt();
        assert!((got.mean[i] - d.mean()[i]).abs() <= 4.0 * se, "mean {i}");
        for j in 0..3 {
            let se =
                ((sigma[(i, i)] * sigma[(j, j)] + sigma[(i, j)].powi(2)) / draws as f64).sqrt();
            assert!(
                (got.cov[i][j] - sigma[(i, j)]).abs() <= 3.0 * se,
                "cov {i},{j}: {} vs {}",
                got.cov[i][j],
                sigma[(i, j)]
            );
        }
    }
}

#[test]
fn linear_functionals_have_the_right_variance() {
    let mut rng = Lcg::new(9);
    let (model, prior, part) = random_setup(&mut rng, 6, 2);
    let draws = 1_000_000;
    for d in [
        predictive_under_h(&model, &prior, &part).unwrap(),
        predictive_under_a(&model, &prior).unwrap(),
    ] {
        let sigma = d.dense_covariance();
        let samples = d.sample_chunked(41, 0, draws);
        for _ in 0..5 {
            let c: Vec<f64> = (0..6).map(|_| rng.normal()).collect();
            let expected: f64 = (0..6)
                .map(|i| (0..6).map(|j| c[i] * sigma[(i, j)] * c[j]).sum::<f64>())
                .sum();
            let vals: Vec<f64> = samples.iter().map(|y| y.dot(&c)).collect();
            let mean = vals.iter().sum::<f64>() / draws as f64;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
            assert!((var / expected - 1.0).abs() < 0.01, "{var} vs {expected}");
        }
    }
}

#[test]
fn null_fixing_everything_is_white_noise() {
    let model = LinearModel::new(Matrix::new(4, 1, vec![1.0; 4]).unwrap(), 1.0).unwrap();
    let d = predictive_under_h(
        &model,
        &GaussianDist::standard(1),
        &Partition::new(1, vec![0]).unwrap(),
    )
    .unwrap();
    let got = moments(&d, 200_000, 8);
    let se = (1.0f64 / 200_000.0).sqrt();
    for i in 0..4 {
        assert!(got.mean[i].abs() <= 4.0 * se);
        for j in 0..4 {
            let expected = if i == j { 1.0 } else { 0.0 };
            let se = if i == j {
                (2.0f64 / 200_000.0).sqrt()
            } else {
                se
            };
            assert!((got.cov[i][j] - expected).abs() <= 4.0 * se);
        }
    }
}
