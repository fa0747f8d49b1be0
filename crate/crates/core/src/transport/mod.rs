//! The oracle transport: uniform on `(0,1)^{d+1}` pushed onto a manifold density.
//!
//! Chart `j` receives the share `η_j = ∫_{U_j} q/K dμ` of the mass, where `K(x)`
//! counts the charts containing `x`. The first source coordinate picks the
//! chart through the thresholds `π_j = η_1 + … + η_j`; the remaining
//! coordinates are mapped onto the chart's tangent density
//! `q̃_j(v) = q(exp v) · J(v) / (K(exp v) η_j)` and pushed to the manifold by
//! the exponential map. For `d = 1` the local map is the monotone quantile
//! map; for `d = 2` it is a triangular (non-optimal) map.

mod bound;
mod quantile;
mod triangular;

pub use bound::{l1_transport_bound_check, BoundCheck};
pub use quantile::{QuantileMap, QUANTILE_KNOTS};
pub use triangular::{TriangularMap, TRIANGULAR_GRID};

use std::f64::consts::PI;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::manifold::{ChartedManifold, ManifoldDensity};
use crate::quad::adaptive_simpson;
use crate::rng::{derive_seed, rng_from_seed, stream};
use crate::stats::{Estimate, Z99};
use crate::wasserstein::{w1_exact, EmpiricalMeasure};

/// Tolerance on `Σ η_j = 1` accepted by [`assemble_global_transport`].
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Angular nodes of the planar chart quadrature.
const POLAR_DIRECTIONS: usize = 1024;

/// Pushforward checks pass when W₁ is below this fraction of the support half-width.
pub const PUSHFORWARD_THRESHOLD_FRACTION: f64 = 0.05;

/// Chart-restricted, multiplicity-weighted density pulled back to the tangent ball.
#[derive(Debug, Clone)]
pub struct LocalTangentDensity {
    density: ManifoldDensity,
    chart: usize,
    /// `Q(U_j)`.
    pub chart_mass: f64,
    /// `η_j = K_j · Q(U_j)` after renormalization across charts.
    pub eta: f64,
    /// `η_j` before renormalization.
    pub raw_eta: f64,
}

impl LocalTangentDensity {
    pub fn chart(&self) -> usize {
        self.chart
    }

    /// `K_j = ∫ q_j / K dμ`.
    pub fn normalizer(&self) -> f64 {
        self.eta / self.chart_mass
    }

    /// `q̃_j(v)`; zero outside the chart ball.
    pub fn value(&self, v: &[f64]) -> f64 {
        let m = self.density.manifold();
        if !(crate::manifold_norm(v) < m.chart_radius()) {
            return 0.0;
        }
        let x = m
            .exp_map(self.chart, v)
            .expect("chart ball lies inside the injectivity radius");
        self.density.density(&x) * m.volume_jacobian(self.chart, v)
            / (m.multiplicity(&x).max(1) as f64 * self.eta)
    }

    /// Direct samples of `q̃_j`: density samples thinned by `𝟙_{U_j}/K` and
    /// mapped to tangent coordinates.
    pub fn sample(&self, seed: u64, n: usize) -> EmpiricalMeasure {
        let m = self.density.manifold();
        let d = m.intrinsic_dim();
        let mut rng = rng_from_seed(derive_seed(seed, stream::VERIFY, 0));
        let mut coords = Vec::with_capacity(n * d);
        let mut batch = 0u64;
        while coords.len() < n * d {
            let pts = self
                .density
                .sample(derive_seed(seed, stream::SAMPLE, batch), 4 * n);
            batch += 1;
            for x in pts.points() {
                let charts = m.charts_containing(x);
                if charts.contains(&self.chart) && (rng.random::<f64>() * charts.len() as f64) < 1.0
                {
                    coords.extend(m.chart_coords(self.chart, x));
                    if coords.len() == n * d {
                        break;
                    }
                }
            }
        }
        EmpiricalMeasure::new(d, coords).expect("tangent samples are finite")
    }
}

/// `(Q(U_j), ∫_{U_j} q/K dμ)` by deterministic quadrature over the tangent ball.
pub fn chart_integrals(density: &ManifoldDensity, j: usize) -> Result<(f64, f64)> {
    let m = density.manifold();
    let r = m.chart_radius();
    let eval = |v: &[f64]| -> (f64, f64) {
        let x = m
            .exp_map(j, v)
            .expect("chart ball lies inside the injectivity radius");
        let q = density.density(&x) * m.volume_jacobian(j, v);
        (q, q / m.multiplicity(&x).max(1) as f64)
    };
    match m.intrinsic_dim() {
        1 => {
            let mass = adaptive_simpson(&mut |t| eval(&[t]).0, -r, r, 1e-13, 40);
            let eta = adaptive_simpson(&mut |t| eval(&[t]).1, -r, r, 1e-13, 40);
            Ok((mass, eta))
        }
        2 => {
            // polar coordinates: the integrand jumps across overlap boundaries,
            // which the adaptive radial pass resolves per direction; the angular
            // pass is a periodic midpoint rule
            let mut mass = 0.0;
            let mut eta = 0.0;
            let dphi = 2.0 * PI / POLAR_DIRECTIONS as f64;
            for k in 0..POLAR_DIRECTIONS {
                let phi = (k as f64 + 0.5) * dphi;
                let (c, s) = (phi.cos(), phi.sin());
                mass += adaptive_simpson(
                    &mut |rho| eval(&[rho * c, rho * s]).0 * rho,
                    0.0,
                    r,
                    1e-10,
                    30,
                );
                eta += adaptive_simpson(
                    &mut |rho| eval(&[rho * c, rho * s]).1 * rho,
                    0.0,
                    r,
                    1e-10,
                    30,
                );
            }
            Ok((mass * dphi, eta * dphi))
        }
        d => Err(Error::Scope(format!(
            "oracle transports are available for d <= 2, not d = {d}"
        ))),
    }
}

/// Monte Carlo cross-check of `(Q(U_j), η_j)` from `n` uniform samples, 99% half-widths.
pub fn monte_carlo_chart_integrals(
    density: &ManifoldDensity,
    seed: u64,
    n: usize,
) -> Vec<(Estimate, Estimate)> {
    let m = density.manifold();
    let charts = m.chart_count();
    let vol = m.volume();
    let mut rng = rng_from_seed(seed);
    let mut mass = vec![Vec::with_capacity(n); charts];
    let mut share = vec![Vec::with_capacity(n); charts];
    let mut x = Vec::new();
    for _ in 0..n {
        m.sample_uniform_point(&mut rng, &mut x);
        let q = vol * density.density(&x);
        let inside = m.charts_containing(&x);
        for j in 0..charts {
            let hit = inside.contains(&j);
            mass[j].push(if hit { q } else { 0.0 });
            share[j].push(if hit { q / inside.len() as f64 } else { 0.0 });
        }
    }
    (0..charts)
        .map(|j| {
            (
                Estimate::from_samples(&mass[j], Z99),
                Estimate::from_samples(&share[j], Z99),
            )
        })
        .collect()
}

/// Tangent densities of every chart of the canonical cover, with `η` renormalized to sum to 1.
pub fn local_tangent_densities(density: &ManifoldDensity) -> Result<Vec<LocalTangentDensity>> {
    let m = density.manifold();
    if m.intrinsic_dim() > 2 {
        return Err(Error::Scope(format!(
            "oracle transports are available for d <= 2, not d = {}",
            m.intrinsic_dim()
        )));
    }
    let cover = m.geodesic_ball_cover()?;
    let mut raw = Vec::with_capacity(cover.len());
    for &j in &cover {
        let (mass, eta) = chart_integrals(density, j)?;
        if !(mass > 0.0 && eta > 0.0) {
            return Err(Error::DegenerateChart {
                chart: j,
                reason: format!("chart mass {mass}, share {eta}"),
            });
        }
        raw.push((mass, eta));
    }
    let total: f64 = raw.iter().map(|r| r.1).sum();
    log::info!("chart shares sum to {total} before renormalization");
    Ok(cover
        .iter()
        .zip(raw)
        .map(|(&j, (mass, eta))| LocalTangentDensity {
            density: density.clone(),
            chart: j,
            chart_mass: mass,
            eta: eta / total,
            raw_eta: eta,
        })
        .collect())
}

/// Chart-wise map `T_j : (0,1)^d → Ũ_j`.
#[derive(Debug, Clone)]
pub enum LocalTransport {
    Quantile(QuantileMap),
    Triangular(TriangularMap),
}

impl LocalTransport {
    pub fn method(&self) -> &'static str {
        match self {
            LocalTransport::Quantile(_) => "quantile (monotone, optimal in 1-D)",
            LocalTransport::Triangular(_) => "triangular (non-optimal)",
        }
    }

    /// Tangent vector `T_j(u)`.
    pub fn map(&self, u: &[f64]) -> Vec<f64> {
        match self {
            LocalTransport::Quantile(q) => vec![q.eval(u[0])],
            LocalTransport::Triangular(t) => t.eval(u).to_vec(),
        }
    }
}

/// Monotone quantile map of a 1-D tangent density on `(−r, r)`.
pub fn quantile_transport_1d(local: &LocalTangentDensity) -> Result<LocalTransport> {
    let r = local.density.manifold().chart_radius();
    Ok(LocalTransport::Quantile(QuantileMap::new(
        |t| local.value(&[t]),
        -r,
        r,
        QUANTILE_KNOTS,
    )?))
}

/// Triangular map onto a 2-D tangent density; `check` runs the pushforward
/// test with `(n, seed)` and fails with a resolution error above
/// [`PUSHFORWARD_THRESHOLD_FRACTION`] of the half-width.
pub fn triangular_transport(
    local: &LocalTangentDensity,
    grid: usize,
    check: Option<(usize, u64)>,
) -> Result<LocalTransport> {
    let r = local.density.manifold().chart_radius();
    let map = TriangularMap::new(|v| local.value(v), r, grid)?;
    let transport = LocalTransport::Triangular(map);
    if let Some((n, seed)) = check {
        let w1 = local_pushforward_w1(local, &transport, n, seed)?;
        let limit = PUSHFORWARD_THRESHOLD_FRACTION * r;
        if w1 > limit {
            return Err(Error::Resolution(format!(
                "triangular map on a {grid}^2 grid has pushforward W1 {w1:.4} above {limit:.4}; refine the grid"
            )));
        }
    }
    Ok(transport)
}

/// W₁ between `T_#uniform` and direct samples of the tangent density.
pub fn local_pushforward_w1(
    local: &LocalTangentDensity,
    t: &LocalTransport,
    n: usize,
    seed: u64,
) -> Result<f64> {
    let d = local.density.manifold().intrinsic_dim();
    let r = local.density.manifold().chart_radius();
    let mut rng = rng_from_seed(derive_seed(seed, stream::PUSHFORWARD, 0));
    let mut coords = Vec::with_capacity(n * d);
    for _ in 0..n {
        let u: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
        coords.extend(clamp_to_ball(t.map(&u), r));
    }
    let pushed = EmpiricalMeasure::new(d, coords)?;
    w1_exact(&pushed, &local.sample(seed, n))
}

/// Keeps tangent images strictly inside the open chart ball. Only histogram
/// cells straddling the boundary can map outside it, by at most one cell diagonal.
fn clamp_to_ball(mut v: Vec<f64>, r: f64) -> Vec<f64> {
    let n = crate::manifold_norm(&v);
    let cap = r * (1.0 - 1e-9);
    if n > cap {
        v.iter_mut().for_each(|x| *x *= cap / n);
    }
    v
}

/// The glued map `g*(x) = exp_{c_j}(T_j(x_{2:}))` for `x₁ ∈ (π_{j−1}, π_j]`.
#[derive(Debug, Clone)]
pub struct GlobalTransport {
    manifold: ChartedManifold,
    thresholds: Vec<f64>,
    weights: Vec<f64>,
    locals: Vec<LocalTransport>,
}

/// Glues local transports with weights `η_j` into `g*`.
pub fn assemble_global_transport(
    manifold: &ChartedManifold,
    locals: Vec<LocalTransport>,
    weights: &[f64],
) -> Result<GlobalTransport> {
    if locals.len() != weights.len() || locals.len() != manifold.chart_count() {
        return Err(Error::Parameter(format!(
            "{} charts need as many local maps and weights, got {} and {}",
            manifold.chart_count(),
            locals.len(),
            weights.len()
        )));
    }
    let sum: f64 = weights.iter().sum();
    if !((sum - 1.0).abs() <= WEIGHT_SUM_TOLERANCE) || weights.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::Parameter(format!(
            "chart weights must be positive and sum to 1, got sum {sum}"
        )));
    }
    let mut thresholds = Vec::with_capacity(weights.len() + 1);
    thresholds.push(0.0);
    for w in weights {
        thresholds.push(thresholds.last().unwrap() + w);
    }
    *thresholds.last_mut().unwrap() = 1.0;
    Ok(GlobalTransport {
        manifold: manifold.clone(),
        thresholds,
        weights: weights.to_vec(),
        locals,
    })
}

/// Builds `g*` for a density on a manifold with `d <= 2`.
pub fn build_global_transport(
    density: &ManifoldDensity,
) -> Result<(GlobalTransport, Vec<LocalTangentDensity>)> {
    let locals = local_tangent_densities(density)?;
    let maps = locals
        .iter()
        .map(|l| match density.manifold().intrinsic_dim() {
            1 => quantile_transport_1d(l),
            _ => triangular_transport(l, TRIANGULAR_GRID, None),
        })
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<f64> = locals.iter().map(|l| l.eta).collect();
    Ok((
        assemble_global_transport(density.manifold(), maps, &weights)?,
        locals,
    ))
}

impl GlobalTransport {
    pub fn manifold(&self) -> &ChartedManifold {
        &self.manifold
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn locals(&self) -> &[LocalTransport] {
        &self.locals
    }

    pub fn source_dim(&self) -> usize {
        self.manifold.intrinsic_dim() + 1
    }

    /// Chart chosen for first source coordinate `x1`; ties go to the left interval.
    pub fn select_chart(&self, x1: f64) -> usize {
        let j = self.thresholds[1..].partition_point(|&p| p < x1);
        j.min(self.locals.len() - 1)
    }

    /// Tangent coordinates `T_j(x_{2:})` of the selected chart.
    pub fn local_coords(&self, x: &[f64]) -> (usize, Vec<f64>) {
        let j = self.select_chart(x[0]);
        (
            j,
            clamp_to_ball(self.locals[j].map(&x[1..]), self.manifold.chart_radius()),
        )
    }

    /// `g*_j(u) = exp_{c_j}(T_j(u))` for a fixed chart.
    pub fn chart_map(&self, j: usize, u: &[f64]) -> Result<Vec<f64>> {
        let v = clamp_to_ball(self.locals[j].map(u), self.manifold.chart_radius());
        self.manifold.exp_map(j, &v)
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.source_dim() {
            return Err(Error::InputShape {
                expected: self.source_dim(),
                got: x.len(),
            });
        }
        let (j, v) = self.local_coords(x);
        self.manifold.exp_map(j, &v)
    }

    /// `n` draws of `g*(z)` for `z` uniform on `(0,1)^{d+1}`.
    pub fn pushforward_sample(&self, seed: u64, n: usize) -> EmpiricalMeasure {
        let mut rng = rng_from_seed(seed);
        let dim = self.source_dim();
        let mut coords = Vec::with_capacity(n * self.manifold.ambient_dim());
        let mut z = vec![0.0; dim];
        for _ in 0..n {
            z.iter_mut().for_each(|v| *v = rng.random::<f64>());
            coords.extend(self.eval(&z).expect("source points are valid"));
        }
        EmpiricalMeasure::new(self.manifold.ambient_dim(), coords)
            .expect("pushforward samples are finite")
    }

    /// Chart selection counts over the first coordinates of `n` uniform draws.
    pub fn chart_occupancy(&self, seed: u64, n: usize) -> Vec<usize> {
        let mut rng = rng_from_seed(seed);
        let mut counts = vec![0; self.locals.len()];
        for _ in 0..n {
            counts[self.select_chart(rng.random::<f64>())] += 1;
        }
        counts
    }
}

/// W₁ between `n` pushforward draws and `n` direct density draws, both derived from `seed`.
pub fn pushforward_w1(
    g: &GlobalTransport,
    density: &ManifoldDensity,
    n: usize,
    seed: u64,
) -> Result<f64> {
    let pushed = g.pushforward_sample(derive_seed(seed, stream::PUSHFORWARD, n as u64), n);
    let direct = density.sample(derive_seed(seed, stream::SAMPLE, n as u64), n);
    w1_exact(&pushed, &direct)
}
