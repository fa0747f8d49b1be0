//! Hölder-function approximation runs with an independent Monte Carlo check.

use rand::Rng as _;
use serde::Serialize;

use crate::builders::budget::{holder_budget, holder_calibrated_bounds};
use crate::builders::{build_holder_approx, ApproxBudget, HolderFunction};
use crate::error::Result;
use crate::relu_net::{NetworkMetrics, ReluNetwork, Scratch};
use crate::rng::rng_from_seed;
use crate::stats::{Estimate, Z99};

use super::func::FuncSpec;

/// Monte Carlo points for the L¹ check.
pub const L1_CHECK_SAMPLES: usize = 100_000;

/// `‖f − Φ‖_{L¹([0,1]^d)}` from `n` points with a 99% half-width. In one
/// dimension the points are stratified (one per cell of width `1/n`); the
/// reported half-width is the plain-sampling one and so conservative.
pub fn mc_l1_error(f: &dyn Fn(&[f64]) -> f64, net: &ReluNetwork, n: usize, seed: u64) -> Estimate {
    let d = net.input_dim();
    let mut rng = rng_from_seed(seed);
    let mut scratch = Scratch::default();
    let mut x = vec![0.0; d];
    let errs: Vec<f64> = (0..n)
        .map(|i| {
            if d == 1 {
                x[0] = (i as f64 + rng.random::<f64>()) / n as f64;
            } else {
                x.iter_mut().for_each(|v| *v = rng.random());
            }
            (f(&x) - net.evaluate_with(&x, &mut scratch)[0]).abs()
        })
        .collect();
    Estimate::from_samples(&errs, Z99)
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxReport {
    pub func: String,
    pub dim: usize,
    pub alpha: f64,
    pub holder_norm: f64,
    pub eps: f64,
    pub metrics: NetworkMetrics,
    pub budget: ApproxBudget,
    pub budget_violations: Vec<String>,
    /// `c₁ log₂(1/eps)` and `c₂ eps^{−d/α}` with the calibrated constants.
    pub calibrated_depth_bound: f64,
    pub calibrated_width_bound: f64,
    pub calibrated_bounds_hold: bool,
    pub l1_error: Estimate,
    pub l1_samples: usize,
    pub seed: u64,
    /// The 99% upper confidence limit is strictly below `eps`.
    pub l1_below_eps: bool,
}

pub fn build_approx(
    func: &FuncSpec,
    alpha: f64,
    eps: f64,
    seed: u64,
) -> Result<(ReluNetwork, ApproxReport)> {
    let f: HolderFunction = func.holder(alpha)?;
    let net = build_holder_approx(&f, eps)?;
    let metrics = net.metrics();
    let budget = holder_budget(&f, eps);
    let (cd, cw) = holder_calibrated_bounds(eps, f.dim, alpha);
    let l1_error = mc_l1_error(&|x| f.eval(x), &net, L1_CHECK_SAMPLES, seed);
    let report = ApproxReport {
        func: func.label(),
        dim: f.dim,
        alpha,
        holder_norm: f.holder_norm,
        eps,
        metrics,
        budget_violations: budget
            .violations(&metrics)
            .into_iter()
            .map(String::from)
            .collect(),
        budget,
        calibrated_depth_bound: cd,
        calibrated_width_bound: cw,
        calibrated_bounds_hold: metrics.depth as f64 <= cd && metrics.width as f64 <= cw,
        l1_below_eps: l1_error.upper() < eps,
        l1_error,
        l1_samples: L1_CHECK_SAMPLES,
        seed,
    };
    Ok((net, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_approximation_is_verified() {
        let (_, rep) = build_approx(&FuncSpec::Identity, 1.0, 0.25, 1).unwrap();
        assert!(rep.l1_below_eps, "{rep:?}");
        assert!(rep.budget_violations.is_empty());
    }
}
