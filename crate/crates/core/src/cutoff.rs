//! Monte Carlo estimation of the averaged error probabilities and the
//! adaptive cut-off `k*` minimizing `a·α(k) + b·β(k)`.
//!
//! The test rejects `H` when `ev(H; y) ≤ k`. `α(k)` is the fraction of
//! evidence values drawn under the null predictive that are `≤ k`, `β(k)` the
//! fraction drawn under the alternative predictive that are `> k`. Both are
//! step functions of `k` that only jump at sampled evidence values, so the
//! minimum over `[0, 1]` is attained at one of those values (or at 0, 1).

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evidence::EvidenceEvaluator;
use crate::model::{GaussianDist, LinearModel, Partition};
use crate::numerics::RandomSource;
use crate::predictive::{chunk_ranges, predictive_under_a, predictive_under_h, LowRankGaussian};

/// Stream-id offset for draws from the null predictive.
pub const STREAM_UNDER_H: u64 = 1 << 32;
/// Stream-id offset for draws from the alternative predictive.
pub const STREAM_UNDER_A: u64 = 2 << 32;

const MIN_RECOMMENDED_SAMPLES: usize = 1000;

/// Sorted evidence values for both arms of the simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceSamples {
    pub under_h: Vec<f64>,
    pub under_a: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
    /// Sample size of the simulated data sets (0 if unknown).
    pub n: usize,
    /// Parameter dimension (0 if unknown).
    pub d: usize,
}

impl EvidenceSamples {
    /// Sorts and validates raw evidence values. Both arms must have the same
    /// length and every value must lie in `[0, 1]`.
    pub fn from_values(mut under_h: Vec<f64>, mut under_a: Vec<f64>, seed: u64) -> Result<Self> {
        if under_h.len() != under_a.len() {
            return Err(Error::dims("evidence arms", under_h.len(), under_a.len()));
        }
        if under_h.is_empty() {
            return Err(Error::Validation("no evidence samples".into()));
        }
        if let Some(bad) = under_h
            .iter()
            .chain(&under_a)
            .find(|v| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::Validation(format!(
                "evidence value {bad} outside [0, 1]"
            )));
        }
        under_h.sort_by(f64::total_cmp);
        under_a.sort_by(f64::total_cmp);
        Ok(EvidenceSamples {
            n_samples: under_h.len(),
            under_h,
            under_a,
            seed,
            n: 0,
            d: 0,
        })
    }

    fn with_shape(mut self, n: usize, d: usize) -> Self {
        self.n = n;
        self.d = d;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    pub k_grid: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub objective: Vec<f64>,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffResult {
    pub k_star: f64,
    pub alpha_star: f64,
    pub beta_star: f64,
    pub objective_star: f64,
    pub n: usize,
    pub d: usize,
    pub a: f64,
    pub b: f64,
    pub n_samples: usize,
    pub seed: u64,
}

fn evidences_for(
    evaluator: &EvidenceEvaluator,
    predictive: &LowRankGaussian,
    n_samples: usize,
    seed: u64,
    stream_offset: u64,
) -> Result<Vec<f64>> {
    let chunks: Vec<Vec<f64>> = chunk_ranges(n_samples)
        .into_par_iter()
        .map(|(chunk, len)| {
            let mut src = RandomSource::new(seed, stream_offset + chunk as u64);
            let mut y = vec![0.0; predictive.n()];
            let mut draw_scratch = predictive.scratch();
            let mut ev_scratch = evaluator.scratch();
            (0..len)
                .map(|_| {
                    predictive.draw_into(&mut src, &mut y, &mut draw_scratch);
                    evaluator.evaluate(&y, &mut ev_scratch).map(|e| e.ev)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(chunks.concat())
}

/// Simulates `n_samples` data sets from each prior predictive and returns
/// the sorted evidence values of both arms.
pub fn simulate_evidences(
    model: &LinearModel,
    prior: &GaussianDist,
    part: &Partition,
    n_samples: usize,
    seed: u64,
) -> Result<EvidenceSamples> {
    if n_samples == 0 {
        return Err(Error::Validation("n_samples must be positive".into()));
    }
    if n_samples < MIN_RECOMMENDED_SAMPLES {
        warn!("only {n_samples} Monte Carlo samples per arm; error estimates will be coarse");
    }
    let evaluator = EvidenceEvaluator::new(model, prior, part)?;
    let under_h = evidences_for(
        &evaluator,
        &predictive_under_h(model, prior, part)?,
        n_samples,
        seed,
        STREAM_UNDER_H,
    )?;
    let under_a = evidences_for(
        &evaluator,
        &predictive_under_a(model, prior)?,
        n_samples,
        seed,
        STREAM_UNDER_A,
    )?;
    Ok(EvidenceSamples::from_values(under_h, under_a, seed)?.with_shape(model.n(), model.p()))
}

fn count_at_most(sorted: &[f64], k: f64) -> usize {
    sorted.partition_point(|&v| v <= k)
}

/// `(α(k), β(k))` with rejection on `ev ≤ k`.
pub fn error_probabilities(samples: &EvidenceSamples, k: f64) -> (f64, f64) {
    let n = samples.n_samples as f64;
    let rejected_h = count_at_most(&samples.under_h, k);
    let accepted_a = samples.under_a.len() - count_at_most(&samples.under_a, k);
    (rejected_h as f64 / n, accepted_a as f64 / n)
}

fn check_weights(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(Error::Validation(format!(
            "error weights must be positive, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// Exact minimizer of the Monte Carlo objective over all candidate
/// thresholds; the smallest minimizing `k` wins ties.
pub fn find_cutoff(samples: &EvidenceSamples, a: f64, b: f64) -> Result<CutoffResult> {
    check_weights(a, b)?;
    let (h, alt) = (&samples.under_h, &samples.under_a);
    let total = samples.n_samples;

    // objectives compared as a·#rejected_h + b·#accepted_a to keep ties exact
    let score = |ih: usize, ia: usize| a * ih as f64 + b * (total - ia) as f64;

    let (mut ih, mut ia) = (0usize, 0usize);
    let advance = |k: f64, ih: &mut usize, ia: &mut usize| {
        while *ih < h.len() && h[*ih] <= k {
            *ih += 1;
        }
        while *ia < alt.len() && alt[*ia] <= k {
            *ia += 1;
        }
    };

    advance(0.0, &mut ih, &mut ia);
    let mut best_k = 0.0;
    let mut best = score(ih, ia);
    loop {
        let next = match (h.get(ih), alt.get(ia)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        advance(next, &mut ih, &mut ia);
        let s = score(ih, ia);
        if s < best {
            best = s;
            best_k = next;
        }
    }
    // k = 1 rejects everything; with values in [0, 1] the loop already
    // reached that state, so it never strictly improves on the last candidate

    let (alpha_star, beta_star) = error_probabilities(samples, best_k);
    Ok(CutoffResult {
        k_star: best_k,
        alpha_star,
        beta_star,
        objective_star: a * alpha_star + b * beta_star,
        n: samples.n,
        d: samples.d,
        a,
        b,
        n_samples: samples.n_samples,
        seed: samples.seed,
    })
}

/// `α`, `β` and `a·α + b·β` on a uniform grid of `grid_size` points over `[0, 1]`.
pub fn error_curve(
    samples: &EvidenceSamples,
    a: f64,
    b: f64,
    grid_size: usize,
) -> Result<ErrorCurve> {
    check_weights(a, b)?;
    if grid_size < 2 {
        return Err(Error::Validation(format!(
            "grid needs at least 2 points, got {grid_size}"
        )));
    }
    let step = 1.0 / (grid_size - 1) as f64;
    let k_grid: Vec<f64> = (0..grid_size)
        .map(|i| {
            if i + 1 == grid_size {
                1.0
            } else {
                i as f64 * step
            }
        })
        .collect();
    let (alpha, beta): (Vec<f64>, Vec<f64>) = k_grid
        .iter()
        .map(|&k| error_probabilities(samples, k))
        .unzip();
    let objective = alpha
        .iter()
        .zip(&beta)
        .map(|(al, be)| a * al + b * be)
        .collect();
    Ok(ErrorCurve {
        k_grid,
        alpha,
        beta,
        objective,
        a,
        b,
    })
}

/// Runs the whole pipeline for each sample size in `n_list`. `model_family`
/// builds the regression model for a given `n`.
#[allow(clippy::too_many_arguments)]
pub fn optimal_errors_vs_n<F>(
    model_family: F,
    prior: &GaussianDist,
    part: &Partition,
    n_list: &[usize],
    a: f64,
    b: f64,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<CutoffResult>>
where
    F: Fn(usize) -> Result<LinearModel>,
{
    check_weights(a, b)?;
    if n_list.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Validation("n_list must be ascending".into()));
    }
    n_list
        .iter()
        .map(|&n| {
            let model = model_family(n)?;
            let samples = simulate_evidences(&model, prior, part, n_samples, seed)?;
            find_cutoff(&samples, a, b)
        })
        .collect()
}
