//! Full Bayesian Significance Test (FBST) evidence for sharp hypotheses in
//! Gaussian linear regression with known variance, and Monte Carlo
//! calibration of a sample-size dependent evidence cut-off `k*(n, d)`.
//!
//! The pipeline, bottom up:
//!
//! - [`numerics`]: Cholesky, Gaussian log-densities, chi-square CDF, seeded
//!   counter-based random streams.
//! - [`model`]: regression model, conjugate prior, posterior update, the
//!   `(θ₁, θ₂)` partition and its conditional moments.
//! - [`evidence`]: `ev(H; y)` for `H: θ₂ = 0`.
//! - [`predictive`]: prior predictives of `y` under `H` and under the
//!   alternative, sampled in low-rank form.
//! - [`cutoff`]: Monte Carlo `α(k)`, `β(k)` and the exact minimizer of
//!   `a·α + b·β`.
//! - [`cli`]: config files, designs, CSV output.
//!
//! ```
//! use fbst_cutoff::model::{GaussianDist, LinearModel, Partition};
//! use fbst_cutoff::numerics::Matrix;
//! use fbst_cutoff::evidence::evidence;
//!
//! let n = 4;
//! let model = LinearModel::new(Matrix::new(n, 1, vec![1.0; n]).unwrap(), 1.0).unwrap();
//! let prior = GaussianDist::standard(1);
//! let part = Partition::new(1, vec![0]).unwrap();
//! let ev = evidence(&model, &prior, &part, &[0.3, -0.1, 0.8, 0.5]).unwrap();
//! assert!(ev.ev > 0.0 && ev.ev <= 1.0);
//! ```

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod cutoff;
pub mod error;
pub mod evidence;
pub mod model;
pub mod numerics;
pub mod predictive;

pub use error::{Error, Result};
