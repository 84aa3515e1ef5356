//! FBST evidence for the sharp hypothesis `θ₂ = 0`.
//!
//! The posterior is `N(m*, W*)`, so the tangential set is an ellipsoid and its
//! posterior mass is a chi-square probability with `p` degrees of freedom.
//! The threshold is
//!
//! ```text
//! q = -2 log{ sup_H f(θ | y) · |W*|^{1/2} · (2π)^{p/2} }
//! ```
//!
//! and `ev = 1 - P(χ²_p < q)`. Analytically `q` is also the `W*`-Mahalanobis
//! distance between the constrained maximizer and `m*`; both routes are
//! exposed so they can be checked against each other.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{conditional_moments, GaussianDist, LinearModel, Partition, PosteriorUpdate};
use crate::numerics::{chi2_sf, dot, mvn_logpdf, t_mul_vec_into, CholeskyFactor, Matrix, Vector};

/// Relative agreement required between the two routes in debug builds.
const DUAL_ROUTE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvidenceValue {
    /// `ev(H; y)` in `[0, 1]`.
    pub ev: f64,
    /// The chi-square argument `q` (clamped at zero).
    pub mahalanobis: f64,
    /// `log sup_{θ₂=0} f(θ | y)`
    pub sup_h_logdensity: f64,
}

/// Maximizer of the posterior density on `θ₂ = 0`: `(m*₁.₂(0), 0)`.
pub fn sup_h_point(post: &GaussianDist, part: &Partition) -> Result<Vector> {
    let cm = conditional_moments(post, part)?;
    let mut point = Vector::zeros(part.p());
    for (&i, &v) in part.theta1_indices().iter().zip(cm.mean_slope_base.iter()) {
        point[i] = v;
    }
    Ok(point)
}

/// `q` from the log-density at the constrained maximizer.
pub fn q_density_route(post: &GaussianDist, theta_h: &[f64]) -> Result<f64> {
    let p = post.dim() as f64;
    let log_sup = mvn_logpdf(theta_h, post.mean(), post.cov_factor())?;
    Ok(-2.0 * (log_sup + 0.5 * post.cov_factor().log_det() + 0.5 * p * (2.0 * PI).ln()))
}

/// `q = (θ_H - m*)ᵀ W*⁻¹ (θ_H - m*)`, using the posterior precision directly.
pub fn q_mahalanobis_route(precision: &Matrix, mean: &[f64], theta_h: &[f64]) -> Result<f64> {
    if mean.len() != precision.rows() || theta_h.len() != precision.rows() {
        return Err(Error::dims(
            "mahalanobis route",
            precision.rows(),
            theta_h.len(),
        ));
    }
    let diff: Vec<f64> = theta_h.iter().zip(mean).map(|(a, b)| a - b).collect();
    Ok(quadratic_form(precision, &diff))
}

fn quadratic_form(a: &Matrix, v: &[f64]) -> f64 {
    (0..a.rows()).map(|i| v[i] * dot(a.row(i), v)).sum()
}

fn ev_from_q(q: f64, p: usize) -> Result<f64> {
    chi2_sf(q, p)
}

/// One-shot evidence for a single observation vector.
pub fn evidence(
    model: &LinearModel,
    prior: &GaussianDist,
    part: &Partition,
    y: &[f64],
) -> Result<EvidenceValue> {
    if part.p() != model.p() {
        return Err(Error::dims("partition size", model.p(), part.p()));
    }
    let update = PosteriorUpdate::new(model, prior)?;
    let post = update.posterior(y)?;
    let theta_h = sup_h_point(&post, part)?;
    let q_maha = q_mahalanobis_route(update.precision(), post.mean(), &theta_h)?;
    if cfg!(debug_assertions) {
        let q_dens = q_density_route(&post, &theta_h)?;
        debug_assert!(
            routes_agree(q_dens, q_maha),
            "evidence routes disagree: density {q_dens}, mahalanobis {q_maha}"
        );
    }
    let q = q_maha.max(0.0);
    Ok(EvidenceValue {
        ev: ev_from_q(q, model.p())?,
        mahalanobis: q,
        sup_h_logdensity: log_sup_from_q(q, post.cov_factor()),
    })
}

fn log_sup_from_q(q: f64, cov_factor: &CholeskyFactor) -> f64 {
    let p = cov_factor.dim() as f64;
    -0.5 * q - 0.5 * cov_factor.log_det() - 0.5 * p * (2.0 * PI).ln()
}

pub(crate) fn routes_agree(a: f64, b: f64) -> bool {
    (a - b).abs() <= DUAL_ROUTE_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Reusable working buffers for [`EvidenceEvaluator`].
#[derive(Debug, Clone)]
pub struct EvidenceScratch {
    xty: Vec<f64>,
    mean: Vec<f64>,
    diff: Vec<f64>,
}

/// Evidence for many observation vectors under a fixed model, prior and
/// partition. Only `Xᵀy` changes between calls.
#[derive(Debug, Clone)]
pub struct EvidenceEvaluator {
    update: PosteriorUpdate,
    design: Matrix,
    post_cov_factor: CholeskyFactor,
    theta1: Vec<usize>,
    theta2: Vec<usize>,
    /// `W*₁₂ W*₂₂⁻¹`
    regression: Matrix,
}

impl EvidenceEvaluator {
    pub fn new(model: &LinearModel, prior: &GaussianDist, part: &Partition) -> Result<Self> {
        if part.p() != model.p() {
            return Err(Error::dims("partition size", model.p(), part.p()));
        }
        let update = PosteriorUpdate::new(model, prior)?;
        let post_shape = GaussianDist::new(Vector::zeros(model.p()), update.covariance())?;
        let cm = conditional_moments(&post_shape, part)?;
        Ok(EvidenceEvaluator {
            post_cov_factor: post_shape.cov_factor().clone(),
            update,
            design: model.design().clone(),
            theta1: part.theta1_indices().to_vec(),
            theta2: part.theta2_indices().to_vec(),
            regression: cm.regression,
        })
    }

    pub fn n(&self) -> usize {
        self.design.rows()
    }

    pub fn p(&self) -> usize {
        self.design.cols()
    }

    pub fn scratch(&self) -> EvidenceScratch {
        let p = self.p();
        EvidenceScratch {
            xty: vec![0.0; p],
            mean: vec![0.0; p],
            diff: vec![0.0; p],
        }
    }

    pub fn evaluate(&self, y: &[f64], scratch: &mut EvidenceScratch) -> Result<EvidenceValue> {
        if y.len() != self.n() {
            return Err(Error::dims("observation vector", self.n(), y.len()));
        }
        t_mul_vec_into(&self.design, y, &mut scratch.xty);
        self.evaluate_sufficient(scratch)
    }

    fn evaluate_sufficient(&self, scratch: &mut EvidenceScratch) -> Result<EvidenceValue> {
        let EvidenceScratch { xty, mean, diff } = scratch;
        self.update.mean_from_xty(xty, mean)?;
        // θ_H - m*: θ₂ block is -m*₂, θ₁ block is -W*₁₂W*₂₂⁻¹ m*₂
        for &j in &self.theta2 {
            diff[j] = -mean[j];
        }
        for (a, &i) in self.theta1.iter().enumerate() {
            let row = self.regression.row(a);
            diff[i] = -self
                .theta2
                .iter()
                .zip(row)
                .map(|(&j, &g)| g * mean[j])
                .sum::<f64>();
        }
        let q_maha = quadratic_form(self.update.precision(), diff);
        if cfg!(debug_assertions) {
            let theta_h: Vec<f64> = diff.iter().zip(mean.iter()).map(|(d, m)| d + m).collect();
            let p = self.p() as f64;
            let log_sup = mvn_logpdf(&theta_h, mean, &self.post_cov_factor)?;
            let q_dens =
                -2.0 * (log_sup + 0.5 * self.post_cov_factor.log_det() + 0.5 * p * (2.0 * PI).ln());
            debug_assert!(
                routes_agree(q_dens, q_maha),
                "evidence routes disagree: density {q_dens}, mahalanobis {q_maha}"
            );
        }
        let q = q_maha.max(0.0);
        Ok(EvidenceValue {
            ev: ev_from_q(q, self.p())?,
            mahalanobis: q,
            sup_h_logdensity: log_sup_from_q(q, &self.post_cov_factor),
        })
    }
}
