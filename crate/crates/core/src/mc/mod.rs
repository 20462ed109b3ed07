//! Monte Carlo estimators of the semigroup and resolvent, and the tests used
//! to compare them with analytic values.
//!
//! Path `i` always draws from stream `i` of the run seed, and per-path values
//! are reduced in index order, so results are bit-identical for any number of
//! worker threads.

mod observables;
mod stats;

use rayon::prelude::*;
use serde::Serialize;

pub use observables::{dictionary, Constant, ExpDecay, FnObservable, Observable, OneSidedBump, SideIndicator};
pub use stats::{
    binomial_test, chi_square_test, kolmogorov_sf, ks_test, ks_two_sample, mean_and_stderr, z_compare,
    z_compare_pair, z_from_parts, TestVerdict, P_THRESHOLD, Z_THRESHOLD,
};

use crate::error::{invalid, require_positive, Result, SnobError};
use crate::random::{RandomStream, StreamFactory};
use crate::sim::{advance, reflected_with_local_time, snob_step, StepConfig};
use crate::space::{GPoint, SnobParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateResult {
    pub mean: f64,
    pub stderr: f64,
    pub n_paths: u64,
    pub seed: u64,
    /// Deterministic bound on the systematic error (cut-off neglect).
    pub bias_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scheme {
    /// Iterate the exact one-step sampler over the time grid.
    PathStepper,
    /// One exact draw of `(|B_t|, L_t)` weighted by the two side probabilities.
    WeightedOneShot,
}

/// Evaluates `path(stream_i)` for `i in 0..n_paths` in parallel and returns
/// the values in index order.
pub fn run_paths<F>(n_paths: u64, seed: u64, path: F) -> Vec<f64>
where
    F: Fn(&mut RandomStream) -> f64 + Sync,
{
    let factory = StreamFactory::new(seed);
    (0..n_paths)
        .into_par_iter()
        .map(|i| path(&mut factory.stream(i)))
        .collect()
}

/// Mean and standard error of per-path values.
pub fn summarize(values: &[f64], seed: u64, bias_bound: f64) -> Result<EstimateResult> {
    let (mean, stderr) = mean_and_stderr(values)?;
    Ok(EstimateResult {
        mean,
        stderr,
        n_paths: values.len() as u64,
        seed,
        bias_bound,
    })
}

fn steps_in(t: f64, dt: f64) -> Result<usize> {
    let ratio = t / dt;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-9 * n {
        return Err(SnobError::SchemeMismatch { t, dt });
    }
    Ok(n as usize)
}

/// Estimates `P_t f(x0) = E_{x0}[f(X_t)]`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_semigroup<O: Observable + ?Sized>(
    f: &O,
    x0: GPoint,
    t: f64,
    params: &SnobParams,
    cfg: &StepConfig,
    n_paths: u64,
    seed: u64,
    scheme: Scheme,
) -> Result<EstimateResult> {
    require_positive("t", t)?;
    if n_paths == 0 {
        return Err(invalid("n_paths", 0.0, "must be >= 1"));
    }
    let cfg = StepConfig::with_cutoff(cfg.dt(), cfg.cutoff(), *params)?;
    match scheme {
        Scheme::PathStepper => {
            let n = steps_in(t, cfg.dt())?;
            let values = run_paths(n_paths, seed, |s| {
                let mut p = x0;
                for _ in 0..n {
                    p = snob_step(s, p, &cfg).endpoint;
                }
                f.eval(p)
            });
            let bias = n as f64 * cfg.neglected_flip_bound() * f.oscillation();
            summarize(&values, seed, bias)
        }
        Scheme::WeightedOneShot => {
            let kappa = params.kappa();
            let side = x0.side();
            let values = run_paths(n_paths, seed, |s| {
                let (m, l) = reflected_with_local_time(s, x0.magnitude(), t).expect("validated inputs");
                let keep = 0.5 * (1.0 + (-kappa * l).exp());
                let here = f.eval(GPoint::from_parts_unchecked(side, m));
                let there = f.eval(GPoint::from_parts_unchecked(side.flip(), m));
                keep * here + (1.0 - keep) * there
            });
            summarize(&values, seed, 0.0)
        }
    }
}

/// Estimates `G_alpha f(x0)` as `E[f(X_T)] / alpha` with `T ~ Exp(alpha)`
/// drawn per path; the last step is shortened to land on `T`.
pub fn estimate_resolvent<O: Observable + ?Sized>(
    f: &O,
    x0: GPoint,
    alpha: f64,
    params: &SnobParams,
    cfg: &StepConfig,
    n_paths: u64,
    seed: u64,
) -> Result<EstimateResult> {
    require_positive("alpha", alpha)?;
    if n_paths == 0 {
        return Err(invalid("n_paths", 0.0, "must be >= 1"));
    }
    let cfg = StepConfig::with_cutoff(cfg.dt(), cfg.cutoff(), *params)?;
    let values = run_paths(n_paths, seed, |s| {
        let horizon = s.standard_exp() / alpha;
        let (p, _) = advance(s, x0, horizon, &cfg);
        f.eval(p) / alpha
    });
    let expected_steps = 1.0 / (alpha * cfg.dt()) + 1.0;
    let bias = expected_steps * cfg.neglected_flip_bound() * f.oscillation() / alpha;
    summarize(&values, seed, bias)
}
