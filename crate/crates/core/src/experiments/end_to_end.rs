//! Full generator runs: oracle transport, chart networks, glued network, W₁.

use std::sync::Arc;

use rand::Rng as _;
use serde::Serialize;

use crate::builders::budget::HOLDER_SQRT_DEPTH_C1;
use crate::builders::{
    assemble_generator, build_holder_approx, GeneratorTolerances, HolderFunction,
};
use crate::error::{Error, Result};
use crate::manifold::{ChartedManifold, DensitySpec, ManifoldDensity};
use crate::relu_net::{NetworkMetrics, ReluNetwork, Scratch};
use crate::rng::{derive_seed, rng_from_seed, stream};
use crate::stats::{Estimate, Z99};
use crate::transport::{build_global_transport, GlobalTransport};
use crate::wasserstein::{euclidean, w1_exact, EmpiricalMeasure};

/// Grid points per axis when tabulating chart maps for their Lipschitz constants.
pub const TABULATION_POINTS_1D: usize = 4097;
pub const TABULATION_POINTS_2D: usize = 257;
/// Safety factor on tabulated Lipschitz constants.
pub const LIPSCHITZ_SAFETY: f64 = 1.05;
/// Independent draws behind the statistical floor and the control run.
pub const FLOOR_REPLICATES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndToEndConfig {
    pub manifold: String,
    pub density: String,
    pub eps: f64,
    pub seed: u64,
    pub n_eval: usize,
    pub check_halving: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChartFit {
    pub chart: usize,
    pub coordinate: usize,
    pub lipschitz_estimate: f64,
    pub depth: usize,
    pub width: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct HalvingCheck {
    pub depth_at_half_eps: usize,
    pub depth_increase: i64,
    /// `c₁ · log₂ 2` with the calibrated depth constant.
    pub allowed_increase: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndToEndReport {
    pub config: EndToEndConfig,
    pub transport: &'static str,
    pub intrinsic_dim: usize,
    pub ambient_dim: usize,
    pub charts: usize,
    pub range_bound: f64,
    pub thresholds: Vec<f64>,
    pub tolerances: GeneratorTolerances,
    /// `DJ(Mδ₁ + δ₂ + δ₃)`.
    pub l1_budget: f64,
    pub chart_fits: Vec<ChartFit>,
    pub metrics: NetworkMetrics,
    /// `depth / log₂(1/eps)`.
    pub depth_per_log_inv_eps: f64,
    /// `width / (D · eps^{−d})` (chart maps are treated as Lipschitz, `α = 1`).
    pub width_per_d_eps_power: f64,
    /// Mean `‖g_θ(z) − g*(z)‖` over the evaluation points, 99% half-width.
    pub l1_to_oracle: Estimate,
    /// `W₁(g_θ♯ρ, Q)` at `n_eval` points each.
    pub w1: f64,
    /// `W₁(Q_n, Q'_n)` over independent pairs.
    pub statistical_floor: Estimate,
    /// `W₁(g*♯ρ, Q)` over the same pairs.
    pub control_w1: Estimate,
    pub w1_limit: f64,
    pub w1_within_limit: bool,
    /// The control and floor means agree within three combined standard errors.
    pub control_matches_floor: bool,
    pub halving: Option<HalvingCheck>,
}

/// Lipschitz estimate of `f` on `[0, 1]^d` from adjacent grid differences.
fn tabulated_lipschitz(f: &dyn Fn(&[f64]) -> f64, d: usize) -> f64 {
    let mut best = 0.0f64;
    match d {
        1 => {
            let n = TABULATION_POINTS_1D;
            let h = 1.0 / (n - 1) as f64;
            let vals: Vec<f64> = (0..n).map(|i| f(&[i as f64 * h])).collect();
            for w in vals.windows(2) {
                best = best.max((w[1] - w[0]).abs() / h);
            }
        }
        _ => {
            let n = TABULATION_POINTS_2D;
            let h = 1.0 / (n - 1) as f64;
            let vals: Vec<f64> = (0..n * n)
                .map(|k| f(&[(k / n) as f64 * h, (k % n) as f64 * h]))
                .collect();
            for a in 0..n {
                for b in 0..n {
                    let v = vals[a * n + b];
                    if a + 1 < n {
                        best = best.max((vals[(a + 1) * n + b] - v).abs() / h);
                    }
                    if b + 1 < n {
                        best = best.max((vals[a * n + b + 1] - v).abs() / h);
                    }
                }
            }
        }
    }
    best
}

fn chart_networks(
    g: &Arc<GlobalTransport>,
    eps3: f64,
    fits: &mut Vec<ChartFit>,
) -> Result<Vec<Vec<ReluNetwork>>> {
    let m = g.manifold();
    let (d, dd, bound) = (m.intrinsic_dim(), m.ambient_dim(), m.bound());
    let mut nets = Vec::with_capacity(g.locals().len());
    for j in 0..g.locals().len() {
        let mut row = Vec::with_capacity(dd);
        for k in 0..dd {
            let gg = Arc::clone(g);
            let coord = move |u: &[f64]| -> f64 {
                gg.chart_map(j, u)
                    .expect("tangent point inside the chart ball")[k]
            };
            let lip = tabulated_lipschitz(&coord, d);
            let f = HolderFunction::new(d, 1.0, (LIPSCHITZ_SAFETY * lip).max(1e-9), bound, coord)?;
            let net = build_holder_approx(&f, eps3)?;
            let mm = net.metrics();
            log::info!(
                "chart {j} coordinate {k}: lipschitz {lip:.4}, depth {}, width {}",
                mm.depth,
                mm.width
            );
            fits.push(ChartFit {
                chart: j,
                coordinate: k,
                lipschitz_estimate: lip,
                depth: mm.depth,
                width: mm.width,
            });
            row.push(net);
        }
        nets.push(row);
    }
    Ok(nets)
}

/// Builds the glued generator for target accuracy `eps`.
pub fn build_generator(
    g: &Arc<GlobalTransport>,
    eps: f64,
) -> Result<(ReluNetwork, GeneratorTolerances, Vec<ChartFit>)> {
    let m = g.manifold();
    let tol = GeneratorTolerances::for_target(eps, m.ambient_dim(), g.locals().len(), m.bound());
    let mut fits = Vec::new();
    let nets = chart_networks(g, tol.delta3, &mut fits)?;
    let net = assemble_generator(&nets, g.thresholds(), tol, m.ambient_dim(), m.bound())?;
    Ok((net, tol, fits))
}

fn estimate_pairs(values: &[f64]) -> Estimate {
    Estimate::from_samples(values, Z99)
}

pub fn end_to_end(cfg: &EndToEndConfig) -> Result<EndToEndReport> {
    if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
        return Err(Error::Parameter(format!(
            "need 0 < eps < 1, got {}",
            cfg.eps
        )));
    }
    if cfg.n_eval == 0 || cfg.n_eval > crate::wasserstein::EXACT_SIZE_CAP {
        return Err(Error::Config(format!(
            "n_eval must lie in 1..={}",
            crate::wasserstein::EXACT_SIZE_CAP
        )));
    }
    let manifold = ChartedManifold::from_spec(&cfg.manifold)?;
    let density = ManifoldDensity::new(manifold, DensitySpec::parse(&cfg.density)?);
    if density.manifold().intrinsic_dim() > 2 {
        return Err(Error::Scope(
            "end-to-end runs need an oracle transport, available for d <= 2".into(),
        ));
    }
    let (g, _) = build_global_transport(&density)?;
    let g = Arc::new(g);
    let m = g.manifold().clone();
    let (d, dd, charts) = (m.intrinsic_dim(), m.ambient_dim(), g.locals().len());
    let (net, tol, chart_fits) = build_generator(&g, cfg.eps)?;
    let metrics = net.metrics();

    let n = cfg.n_eval;
    let mut rng = rng_from_seed(derive_seed(cfg.seed, stream::PUSHFORWARD, 0));
    let mut scratch = Scratch::default();
    let mut coords = Vec::with_capacity(n * dd);
    let mut gaps = Vec::with_capacity(n);
    let mut z = vec![0.0; d + 1];
    for _ in 0..n {
        z.iter_mut().for_each(|v| *v = rng.random());
        let y = net.evaluate_with(&z, &mut scratch).to_vec();
        gaps.push(euclidean(&y, &g.eval(&z)?));
        coords.extend(y);
    }
    let pushed = EmpiricalMeasure::new(dd, coords)?;
    let direct = density.sample(derive_seed(cfg.seed, stream::SAMPLE, 0), n);
    let w1 = w1_exact(&pushed, &direct)?;

    let mut floor = Vec::with_capacity(FLOOR_REPLICATES);
    let mut control = Vec::with_capacity(FLOOR_REPLICATES);
    for r in 0..FLOOR_REPLICATES as u64 {
        let a = density.sample(derive_seed(cfg.seed, stream::REFERENCE, 2 * r), n);
        let b = density.sample(derive_seed(cfg.seed, stream::REFERENCE, 2 * r + 1), n);
        floor.push(w1_exact(&a, &b)?);
        let exact = g.pushforward_sample(derive_seed(cfg.seed, stream::VERIFY, r), n);
        control.push(w1_exact(&exact, &a)?);
    }
    let statistical_floor = estimate_pairs(&floor);
    let control_w1 = estimate_pairs(&control);
    let se = ((statistical_floor.half_width / Z99).powi(2) + (control_w1.half_width / Z99).powi(2))
        .sqrt();
    let w1_limit = cfg.eps + statistical_floor.value;

    let halving = if cfg.check_halving {
        let (half, _, _) = build_generator(&g, cfg.eps / 2.0)?;
        let inc = half.depth() as i64 - metrics.depth as i64;
        let allowed = HOLDER_SQRT_DEPTH_C1;
        Some(HalvingCheck {
            depth_at_half_eps: half.depth(),
            depth_increase: inc,
            allowed_increase: allowed,
            holds: inc as f64 <= allowed,
        })
    } else {
        None
    };

    Ok(EndToEndReport {
        config: cfg.clone(),
        transport: g.locals()[0].method(),
        intrinsic_dim: d,
        ambient_dim: dd,
        charts,
        range_bound: m.bound(),
        thresholds: g.thresholds().to_vec(),
        l1_budget: tol.l1_budget(dd, charts, m.bound()),
        tolerances: tol,
        chart_fits,
        depth_per_log_inv_eps: metrics.depth as f64 / (1.0 / cfg.eps).log2(),
        width_per_d_eps_power: metrics.width as f64 / (dd as f64 * cfg.eps.powi(-(d as i32))),
        metrics,
        l1_to_oracle: Estimate::from_samples(&gaps, Z99),
        w1,
        w1_within_limit: w1 <= w1_limit,
        w1_limit,
        control_matches_floor: (control_w1.value - statistical_floor.value).abs()
            <= 3.0 * se.max(1e-12),
        statistical_floor,
        control_w1,
        halving,
    })
}
