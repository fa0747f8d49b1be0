//! Pushforward report for the oracle transport of a manifold density.

use serde::Serialize;

use crate::error::Result;
use crate::manifold::{ChartedManifold, DensitySpec, ManifoldDensity, ON_MANIFOLD_TOLERANCE};
use crate::rng::{derive_seed, stream};
use crate::stats::Estimate;
use crate::transport::{build_global_transport, monte_carlo_chart_integrals};
use crate::wasserstein::w1_exact;

/// Monte Carlo points behind the chart-share cross-check.
pub const SHARE_CHECK_SAMPLES: usize = 1_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct ChartShare {
    pub chart: usize,
    pub chart_mass: f64,
    pub eta: f64,
    pub raw_eta: f64,
    pub monte_carlo_mass: Estimate,
    pub monte_carlo_eta: Estimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransportReport {
    pub manifold: String,
    pub density: String,
    pub transport: &'static str,
    pub n: usize,
    pub seed: u64,
    pub thresholds: Vec<f64>,
    pub raw_eta_sum: f64,
    pub charts: Vec<ChartShare>,
    pub occupancy: Vec<usize>,
    pub max_off_manifold: f64,
    pub all_on_manifold: bool,
    /// `W₁(g*♯ρ, Q)` with `n` points each.
    pub w1: f64,
    /// `W₁(Q_n, Q'_n)` at the same size.
    pub statistical_floor: f64,
}

pub fn transport_check(
    manifold: &str,
    density: &str,
    n: usize,
    seed: u64,
    share_samples: usize,
) -> Result<TransportReport> {
    let q = ManifoldDensity::new(
        ChartedManifold::from_spec(manifold)?,
        DensitySpec::parse(density)?,
    );
    let (g, locals) = build_global_transport(&q)?;
    let mc =
        monte_carlo_chart_integrals(&q, derive_seed(seed, stream::NORMALIZER, 0), share_samples);
    let charts = locals
        .iter()
        .zip(mc)
        .map(|(l, (mass, eta))| ChartShare {
            chart: l.chart(),
            chart_mass: l.chart_mass,
            eta: l.eta,
            raw_eta: l.raw_eta,
            monte_carlo_mass: mass,
            monte_carlo_eta: eta,
        })
        .collect();
    let pushed = g.pushforward_sample(derive_seed(seed, stream::PUSHFORWARD, 0), n);
    let max_off_manifold = pushed
        .points()
        .map(|p| g.manifold().distance_to_manifold(p))
        .fold(0.0, f64::max);
    let direct = q.sample(derive_seed(seed, stream::SAMPLE, 0), n);
    let other = q.sample(derive_seed(seed, stream::REFERENCE, 0), n);
    Ok(TransportReport {
        manifold: g.manifold().spec(),
        density: q.spec().label(),
        transport: g.locals()[0].method(),
        n,
        seed,
        thresholds: g.thresholds().to_vec(),
        raw_eta_sum: locals.iter().map(|l| l.raw_eta).sum(),
        charts,
        occupancy: g.chart_occupancy(derive_seed(seed, stream::VERIFY, 0), n),
        all_on_manifold: max_off_manifold <= ON_MANIFOLD_TOLERANCE,
        max_off_manifold,
        w1: w1_exact(&pushed, &direct)?,
        statistical_floor: w1_exact(&direct, &other)?,
    })
}
