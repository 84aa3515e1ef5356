//! Gaussian linear regression with known noise variance, its conjugate
//! normal prior, the posterior update, and the `(θ₁, θ₂)` partition.

use log::warn;

use crate::error::{Error, Result};
use crate::numerics::{cholesky, CholeskyFactor, Matrix, Vector};

/// `y = Xθ + ε`, `ε ~ N(0, σ² I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    design: Matrix,
    noise_variance: f64,
}

impl LinearModel {
    pub fn new(design: Matrix, noise_variance: f64) -> Result<Self> {
        if design.rows() == 0 || design.cols() == 0 {
            return Err(Error::Validation(format!(
                "design matrix must be non-empty, got {}x{}",
                design.rows(),
                design.cols()
            )));
        }
        if !(noise_variance > 0.0 && noise_variance.is_finite()) {
            return Err(Error::Validation(format!(
                "noise variance must be positive and finite, got {noise_variance}"
            )));
        }
        if design.rows() < design.cols() {
            warn!(
                "design has fewer observations ({}) than parameters ({})",
                design.rows(),
                design.cols()
            );
        }
        Ok(LinearModel {
            design,
            noise_variance,
        })
    }

    pub fn design(&self) -> &Matrix {
        &self.design
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.design.rows()
    }

    /// Number of regression coefficients.
    pub fn p(&self) -> usize {
        self.design.cols()
    }
}

/// Multivariate normal with its covariance factor cached.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianDist {
    mean: Vector,
    cov: Matrix,
    cov_factor: CholeskyFactor,
}

impl GaussianDist {
    pub fn new(mean: Vector, cov: Matrix) -> Result<Self> {
        if cov.rows() != mean.len() {
            return Err(Error::dims("gaussian covariance", mean.len(), cov.rows()));
        }
        let cov_factor = cholesky(&cov)?;
        Ok(GaussianDist {
            mean,
            cov,
            cov_factor,
        })
    }

    /// `N(0, I_dim)`
    pub fn standard(dim: usize) -> Self {
        GaussianDist::new(Vector::zeros(dim), Matrix::identity(dim)).expect("identity is SPD")
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &Vector {
        &self.mean
    }

    pub fn cov(&self) -> &Matrix {
        &self.cov
    }

    pub fn cov_factor(&self) -> &CholeskyFactor {
        &self.cov_factor
    }
}

/// Split of θ into free coordinates `θ₁` (size `s`) and tested coordinates
/// `θ₂` (size `r`) under the sharp null `θ₂ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    p: usize,
    theta1_indices: Vec<usize>,
    theta2_indices: Vec<usize>,
}

impl Partition {
    pub fn new(p: usize, theta2_indices: Vec<usize>) -> Result<Self> {
        if theta2_indices.is_empty() {
            return Err(Error::Validation(
                "hypothesis must constrain at least one coordinate".into(),
            ));
        }
        let mut seen = vec![false; p];
        for &i in &theta2_indices {
            if i >= p {
                return Err(Error::Validation(format!(
                    "tested index {i} out of range for {p} parameters"
                )));
            }
            if seen[i] {
                return Err(Error::Validation(format!("tested index {i} repeated")));
            }
            seen[i] = true;
        }
        let theta1_indices = (0..p).filter(|&i| !seen[i]).collect();
        Ok(Partition {
            p,
            theta1_indices,
            theta2_indices,
        })
    }

    /// Like [`Partition::new`], for a null of the form `θ₂ = c`. Only `c = 0`
    /// is supported.
    pub fn with_null_value(
        p: usize,
        theta2_indices: Vec<usize>,
        null_value: &[f64],
    ) -> Result<Self> {
        if null_value.len() != theta2_indices.len() {
            return Err(Error::dims(
                "null value",
                theta2_indices.len(),
                null_value.len(),
            ));
        }
        if null_value.iter().any(|&c| c != 0.0) {
            return Err(Error::Validation(
                "only the null value theta2 = 0 is supported".into(),
            ));
        }
        Partition::new(p, theta2_indices)
    }

    /// Tests the trailing `r` coordinates of a `p`-vector.
    pub fn trailing(p: usize, r: usize) -> Result<Self> {
        if r > p {
            return Err(Error::Validation(format!(
                "cannot test {r} of {p} parameters"
            )));
        }
        Partition::new(p, (p - r..p).collect())
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn s(&self) -> usize {
        self.theta1_indices.len()
    }

    pub fn r(&self) -> usize {
        self.theta2_indices.len()
    }

    pub fn theta1_indices(&self) -> &[usize] {
        &self.theta1_indices
    }

    pub fn theta2_indices(&self) -> &[usize] {
        &self.theta2_indices
    }

    /// True when `θ₂` is already the trailing block `{s, …, p-1}`.
    pub fn is_canonical(&self) -> bool {
        self.theta1_indices.iter().copied().eq(0..self.s())
            && self.theta2_indices.iter().copied().eq(self.s()..self.p)
    }

    /// Permutation placing `θ₁` first and `θ₂` last: new position `i` holds
    /// old coordinate `perm[i]`.
    pub fn canonical_permutation(&self) -> Vec<usize> {
        self.theta1_indices
            .iter()
            .chain(&self.theta2_indices)
            .copied()
            .collect()
    }
}

/// Moments of `θ₁ | θ₂ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalMoments {
    /// `m₁ - W₁₂ W₂₂⁻¹ m₂`
    pub mean_slope_base: Vector,
    /// `W₁₁ - W₁₂ W₂₂⁻¹ W₂₁`
    pub cond_cov: Matrix,
    /// `W₁₂ W₂₂⁻¹` (s × r)
    pub regression: Matrix,
}

/// Conditional moments of the `θ₁` block given `θ₂ = 0`. With `s = 0` the
/// result is empty.
pub fn conditional_moments(dist: &GaussianDist, part: &Partition) -> Result<ConditionalMoments> {
    if dist.dim() != part.p() {
        return Err(Error::dims("conditional moments", part.p(), dist.dim()));
    }
    let (i1, i2) = (part.theta1_indices(), part.theta2_indices());
    let (s, r) = (part.s(), part.r());
    if s == 0 {
        return Ok(ConditionalMoments {
            mean_slope_base: Vector::zeros(0),
            cond_cov: Matrix::zeros(0, 0),
            regression: Matrix::zeros(0, r),
        });
    }
    let cov = dist.cov();
    let w11 = cov.select(i1, i1);
    let w12 = cov.select(i1, i2);
    let w22 = cov.select(i2, i2);
    let f22 = cholesky(&w22)?;

    // regression = W₁₂ W₂₂⁻¹, row by row: W₂₂ gᵢ = (W₁₂ row i)ᵀ
    let mut regression = Matrix::zeros(s, r);
    for i in 0..s {
        let g = f22.solve(w12.row(i))?;
        for j in 0..r {
            regression[(i, j)] = g[j];
        }
    }
    let m1 = dist.mean().select(i1);
    let m2 = dist.mean().select(i2);
    let shift = regression.mul_vec(&m2)?;
    let mean_slope_base = m1.sub(&shift);

    let correction = regression.matmul(&w12.transpose())?;
    let mut cond_cov = w11.sub(&correction)?;
    for a in 0..s {
        for b in 0..a {
            let avg = 0.5 * (cond_cov[(a, b)] + cond_cov[(b, a)]);
            cond_cov[(a, b)] = avg;
            cond_cov[(b, a)] = avg;
        }
    }
    Ok(ConditionalMoments {
        mean_slope_base,
        cond_cov,
        regression,
    })
}

/// Everything about the posterior that does not depend on `y`.
///
/// The precision `W0⁻¹ + σ⁻² XᵀX` is factored once; each posterior mean is
/// one factor-solve.
#[derive(Debug, Clone)]
pub struct PosteriorUpdate {
    precision: Matrix,
    precision_factor: CholeskyFactor,
    prior_term: Vector,
    inv_noise_variance: f64,
    design: Matrix,
}

impl PosteriorUpdate {
    pub fn new(model: &LinearModel, prior: &GaussianDist) -> Result<Self> {
        if prior.dim() != model.p() {
            return Err(Error::dims("prior dimension", model.p(), prior.dim()));
        }
        let inv_noise_variance = 1.0 / model.noise_variance();
        let prior_precision = prior.cov_factor().inverse();
        let precision = prior_precision.add(&model.design().gram().scale(inv_noise_variance))?;
        let precision_factor = cholesky(&precision)?;
        let prior_term = prior.cov_factor().solve(prior.mean())?;
        Ok(PosteriorUpdate {
            precision,
            precision_factor,
            prior_term,
            inv_noise_variance,
            design: model.design().clone(),
        })
    }

    /// `W*⁻¹`
    pub fn precision(&self) -> &Matrix {
        &self.precision
    }

    pub fn precision_factor(&self) -> &CholeskyFactor {
        &self.precision_factor
    }

    /// `W*`
    pub fn covariance(&self) -> Matrix {
        self.precision_factor.inverse()
    }

    /// `m*` from the sufficient statistic `Xᵀy`.
    pub fn mean_from_xty(&self, xty: &[f64], out: &mut [f64]) -> Result<()> {
        if xty.len() != self.prior_term.len() {
            return Err(Error::dims("X^T y", self.prior_term.len(), xty.len()));
        }
        for ((o, &pt), &s) in out.iter_mut().zip(self.prior_term.iter()).zip(xty) {
            *o = pt + self.inv_noise_variance * s;
        }
        self.precision_factor.solve_in_place(out)
    }

    pub fn mean(&self, y: &[f64]) -> Result<Vector> {
        if y.len() != self.design.rows() {
            return Err(Error::dims(
                "observation vector",
                self.design.rows(),
                y.len(),
            ));
        }
        let xty = self.design.t_mul_vec(y)?;
        let mut out = vec![0.0; xty.len()];
        self.mean_from_xty(&xty, &mut out)?;
        Ok(Vector::from(out))
    }

    pub fn posterior(&self, y: &[f64]) -> Result<GaussianDist> {
        GaussianDist::new(self.mean(y)?, self.covariance())
    }
}

/// Conjugate update `θ | y ~ N(m*, W*)`.
pub fn posterior(model: &LinearModel, prior: &GaussianDist, y: &[f64]) -> Result<GaussianDist> {
    PosteriorUpdate::new(model, prior)?.posterior(y)
}

/// Applies a coordinate permutation to the design columns and the prior.
pub fn permute(
    model: &LinearModel,
    prior: &GaussianDist,
    perm: &[usize],
) -> Result<(LinearModel, GaussianDist)> {
    if perm.len() != model.p() || prior.dim() != model.p() {
        return Err(Error::dims("permutation length", model.p(), perm.len()));
    }
    let design = model.design().select_columns(perm);
    let mean = prior.mean().select(perm);
    let cov = prior.cov().select(perm, perm);
    Ok((
        LinearModel::new(design, model.noise_variance())?,
        GaussianDist::new(mean, cov)?,
    ))
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    inv
}

/// Moves the tested coordinates to the trailing block.
pub fn reorder_for_partition(
    model: &LinearModel,
    prior: &GaussianDist,
    part: &Partition,
) -> Result<(LinearModel, GaussianDist, Partition)> {
    if part.p() != model.p() {
        return Err(Error::dims("partition size", model.p(), part.p()));
    }
    let perm = part.canonical_permutation();
    let (m, g) = permute(model, prior, &perm)?;
    Ok((m, g, Partition::trailing(part.p(), part.r())?))
}
