//! Dense linear algebra, Gaussian log-densities, the chi-square CDF and the
//! seeded random-source contract shared by the rest of the crate.

mod chi2;
mod cholesky;
mod matrix;
mod rng;

pub use chi2::{chi2_cdf, chi2_sf, ln_gamma, regularized_gamma_p, regularized_gamma_q};
pub use cholesky::{cholesky, log_det_from_factor, mvn_logpdf, solve_with_factor, CholeskyFactor};
pub(crate) use matrix::{dot, t_mul_vec_into};
pub use matrix::{Matrix, Vector};
pub use rng::{standard_normal_draws, RandomSource};
