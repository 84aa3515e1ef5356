use std::f64::consts::PI;

use super::matrix::{Matrix, Vector};
use crate::error::{Error, Result};

const MIN_PIVOT: f64 = 1e-300;
const SYMMETRY_TOL: f64 = 1e-12;

/// Lower-triangular Cholesky factor `L` with `L·Lᵀ = A`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    lower: Matrix,
}

/// Factors a symmetric positive definite matrix. No pivoting, no jitter.
pub fn cholesky(a: &Matrix) -> Result<CholeskyFactor> {
    if !a.is_square() {
        return Err(Error::dims("cholesky (square input)", a.rows(), a.cols()));
    }
    let asym = a.relative_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::Validation(format!(
            "matrix is not symmetric (relative asymmetry {asym:e})"
        )));
    }
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        // also rejects NaN
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(d > MIN_PIVOT) {
            return Err(Error::NotPositiveDefinite { pivot: j, value: d });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(CholeskyFactor { lower: l })
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    pub fn lower(&self) -> &Matrix {
        &self.lower
    }

    /// `log |A| = 2 Σ log L_ii`
    pub fn log_det(&self) -> f64 {
        2.0 * (0..self.dim())
            .map(|i| self.lower[(i, i)].ln())
            .sum::<f64>()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vector> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(Vector::from(x))
    }

    pub(crate) fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        self.forward_in_place(x)?;
        let n = self.dim();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.lower[(k, i)] * x[k];
            }
            x[i] = s / self.lower[(i, i)];
        }
        Ok(())
    }

    /// Solves `L z = b` in place.
    pub(crate) fn forward_in_place(&self, x: &mut [f64]) -> Result<()> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::dims("cholesky solve", n, x.len()));
        }
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.lower[(i, k)] * x[k];
            }
            x[i] = s / self.lower[(i, i)];
        }
        Ok(())
    }

    /// `vᵀ A⁻¹ v`, via one forward substitution.
    pub fn mahalanobis(&self, v: &[f64]) -> Result<f64> {
        let mut z = v.to_vec();
        self.forward_in_place(&mut z)?;
        Ok(z.iter().map(|a| a * a).sum())
    }

    /// `L · w`
    pub fn lower_mul(&self, w: &[f64], out: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            out[i] = (0..=i).map(|k| self.lower[(i, k)] * w[k]).sum();
        }
    }

    /// `A⁻¹`, built column by column from solves against the identity.
    pub fn inverse(&self) -> Matrix {
        let n = self.dim();
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            self.solve_in_place(&mut e)
                .expect("dimension fixed by construction");
            for i in 0..n {
                inv[(i, j)] = e[i];
            }
        }
        // exact symmetry keeps downstream factorizations happy
        for i in 0..n {
            for j in 0..i {
                let avg = 0.5 * (inv[(i, j)] + inv[(j, i)]);
                inv[(i, j)] = avg;
                inv[(j, i)] = avg;
            }
        }
        inv
    }

    /// `L · Lᵀ`
    pub fn reconstruct(&self) -> Matrix {
        self.lower
            .matmul(&self.lower.transpose())
            .expect("square factor")
    }
}

pub fn log_det_from_factor(f: &CholeskyFactor) -> f64 {
    f.log_det()
}

pub fn solve_with_factor(f: &CholeskyFactor, b: &[f64]) -> Result<Vector> {
    f.solve(b)
}

/// Multivariate normal log-density with full normalizing constant.
pub fn mvn_logpdf(x: &[f64], mean: &[f64], cov_factor: &CholeskyFactor) -> Result<f64> {
    let p = cov_factor.dim();
    if x.len() != p {
        return Err(Error::dims("mvn_logpdf point", p, x.len()));
    }
    if mean.len() != p {
        return Err(Error::dims("mvn_logpdf mean", p, mean.len()));
    }
    let diff: Vec<f64> = x.iter().zip(mean).map(|(a, b)| a - b).collect();
    let maha = cov_factor.mahalanobis(&diff)?;
    Ok(-0.5 * p as f64 * (2.0 * PI).ln() - 0.5 * cov_factor.log_det() - 0.5 * maha)
}
