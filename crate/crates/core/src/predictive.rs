//! Prior-predictive distributions of `y` under the null and the alternative.
//!
//! Both have covariance `σ² I_n + B Σ_f Bᵀ` with a thin loading `B` (n × m,
//! m ≤ p), so draws cost O(n·m) and no n × n matrix is ever factored.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{conditional_moments, GaussianDist, LinearModel, Partition};
use crate::numerics::{cholesky, CholeskyFactor, Matrix, RandomSource, Vector};

/// Draws per deterministic RNG chunk. Chunk `j` always uses stream `offset + j`.
pub const CHUNK_SIZE: usize = 4096;

/// `N(mean, σ² I_n + B Σ_f Bᵀ)`
#[derive(Debug, Clone)]
pub struct LowRankGaussian {
    mean: Vector,
    noise_sd: f64,
    loading: Matrix,
    factor_cov: Matrix,
    factor_cov_chol: Option<CholeskyFactor>,
}

impl LowRankGaussian {
    pub fn new(mean: Vector, noise_sd: f64, loading: Matrix, factor_cov: Matrix) -> Result<Self> {
        if !(noise_sd > 0.0 && noise_sd.is_finite()) {
            return Err(Error::Validation(format!(
                "noise standard deviation must be positive, got {noise_sd}"
            )));
        }
        if loading.rows() != mean.len() {
            return Err(Error::dims("loading rows", mean.len(), loading.rows()));
        }
        if factor_cov.rows() != loading.cols() || factor_cov.cols() != loading.cols() {
            return Err(Error::dims(
                "factor covariance",
                loading.cols(),
                factor_cov.rows(),
            ));
        }
        let factor_cov_chol = if loading.cols() == 0 {
            None
        } else {
            Some(cholesky(&factor_cov)?)
        };
        Ok(LowRankGaussian {
            mean,
            noise_sd,
            loading,
            factor_cov,
            factor_cov_chol,
        })
    }

    pub fn n(&self) -> usize {
        self.mean.len()
    }

    /// Number of latent factors `m`.
    pub fn rank(&self) -> usize {
        self.loading.cols()
    }

    pub fn mean(&self) -> &Vector {
        &self.mean
    }

    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }

    pub fn loading(&self) -> &Matrix {
        &self.loading
    }

    pub fn factor_cov(&self) -> &Matrix {
        &self.factor_cov
    }

    /// The implied n × n covariance. For tests and small `n` only.
    pub fn dense_covariance(&self) -> Matrix {
        let n = self.n();
        let mut cov = if self.rank() == 0 {
            Matrix::zeros(n, n)
        } else {
            self.loading
                .matmul(&self.factor_cov)
                .and_then(|bs| bs.matmul(&self.loading.transpose()))
                .expect("shapes checked at construction")
        };
        for i in 0..n {
            cov[(i, i)] += self.noise_sd * self.noise_sd;
        }
        cov
    }

    pub fn scratch(&self) -> Vec<f64> {
        vec![0.0; 2 * self.rank()]
    }

    /// One draw `mean + σ z + B L_f w` written into `out`.
    pub fn draw_into(&self, src: &mut RandomSource, out: &mut [f64], scratch: &mut [f64]) {
        let m = self.rank();
        let (w, u) = scratch.split_at_mut(m);
        if let Some(chol) = &self.factor_cov_chol {
            src.fill_normal(w);
            chol.lower_mul(w, u);
        }
        for (i, o) in out.iter_mut().enumerate() {
            let mut v = self.mean[i] + self.noise_sd * src.normal();
            for (b, uk) in self.loading.row(i).iter().zip(u.iter()) {
                v += b * uk;
            }
            *o = v;
        }
    }

    /// `count` sequential draws from a single source.
    pub fn sample(&self, src: &mut RandomSource, count: usize) -> Vec<Vector> {
        let mut scratch = self.scratch();
        (0..count)
            .map(|_| {
                let mut y = vec![0.0; self.n()];
                self.draw_into(src, &mut y, &mut scratch);
                Vector::from(y)
            })
            .collect()
    }

    /// `count` draws generated chunk-parallel; the output does not depend on
    /// the number of worker threads.
    pub fn sample_chunked(&self, seed: u64, stream_offset: u64, count: usize) -> Vec<Vector> {
        chunk_ranges(count)
            .into_par_iter()
            .flat_map_iter(|(chunk, len)| {
                let mut src = RandomSource::new(seed, stream_offset + chunk as u64);
                self.sample(&mut src, len)
            })
            .collect()
    }
}

/// `(chunk index, chunk length)` pairs covering `count` draws.
pub fn chunk_ranges(count: usize) -> Vec<(usize, usize)> {
    (0..count.div_ceil(CHUNK_SIZE))
        .map(|c| (c, CHUNK_SIZE.min(count - c * CHUNK_SIZE)))
        .collect()
}

/// Prior predictive under `H: θ₂ = 0`: `N(X C m0₁.₂(0), σ² I + (XC) W0₁₁.₂ (XC)ᵀ)`.
/// When the null fixes all of θ this is `N(0, σ² I)`.
pub fn predictive_under_h(
    model: &LinearModel,
    prior: &GaussianDist,
    part: &Partition,
) -> Result<LowRankGaussian> {
    if part.p() != model.p() || prior.dim() != model.p() {
        return Err(Error::dims("predictive under H", model.p(), part.p()));
    }
    let cm = conditional_moments(prior, part)?;
    let loading = model.design().select_columns(part.theta1_indices());
    let mean = if part.s() == 0 {
        Vector::zeros(model.n())
    } else {
        loading.mul_vec(&cm.mean_slope_base)?
    };
    LowRankGaussian::new(mean, model.noise_variance().sqrt(), loading, cm.cond_cov)
}

/// Prior predictive under the alternative: `N(X m0, σ² I + X W0 Xᵀ)`.
pub fn predictive_under_a(model: &LinearModel, prior: &GaussianDist) -> Result<LowRankGaussian> {
    if prior.dim() != model.p() {
        return Err(Error::dims("predictive under A", model.p(), prior.dim()));
    }
    let mean = model.design().mul_vec(prior.mean())?;
    LowRankGaussian::new(
        mean,
        model.noise_variance().sqrt(),
        model.design().clone(),
        prior.cov().clone(),
    )
}
