//! Densities on a manifold with respect to its volume measure.

use rand::Rng as _;

use super::ChartedManifold;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::stats::Estimate;
use crate::wasserstein::EmpiricalMeasure;

/// `uniform`, or `cosine:base:amp` meaning `q ∝ base + amp·x₁/R` with `x₁` the
/// first base coordinate (`q ∝ 2 + cos θ` on the circle is `cosine:2:1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensitySpec {
    Uniform,
    Cosine { base: f64, amp: f64 },
}

impl DensitySpec {
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{s}' in density spec '{text}'")))
        };
        let spec = match parts.as_slice() {
            ["uniform"] => DensitySpec::Uniform,
            ["cosine", b, a] => DensitySpec::Cosine {
                base: num(b)?,
                amp: num(a)?,
            },
            _ => {
                return Err(Error::Parse(format!(
                    "unknown density spec '{text}' (expected uniform or cosine:base:amp)"
                )))
            }
        };
        if let DensitySpec::Cosine { base, amp } = spec {
            if !(base.is_finite() && amp.is_finite() && base > amp.abs()) {
                return Err(Error::Parse(format!(
                    "cosine density needs base > |amp|, got {base}, {amp}"
                )));
            }
        }
        Ok(spec)
    }

    pub fn label(&self) -> String {
        match self {
            DensitySpec::Uniform => "uniform".into(),
            DensitySpec::Cosine { base, amp } => format!("cosine:{base}:{amp}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ManifoldDensity {
    manifold: ChartedManifold,
    spec: DensitySpec,
}

impl ManifoldDensity {
    pub fn new(manifold: ChartedManifold, spec: DensitySpec) -> Self {
        ManifoldDensity { manifold, spec }
    }

    pub fn uniform(manifold: ChartedManifold) -> Self {
        Self::new(manifold, DensitySpec::Uniform)
    }

    pub fn manifold(&self) -> &ChartedManifold {
        &self.manifold
    }

    pub fn spec(&self) -> DensitySpec {
        self.spec
    }

    /// Unnormalized shape `base + amp·x₁/R`; integrates to `base · volume`.
    fn shape(&self, x: &[f64]) -> f64 {
        match self.spec {
            DensitySpec::Uniform => 1.0,
            DensitySpec::Cosine { base, amp } => {
                let x1 = self.manifold.base_coords(x)[0];
                base + amp * x1 / self.manifold.radius()
            }
        }
    }

    fn shape_mass(&self) -> f64 {
        let b = match self.spec {
            DensitySpec::Uniform => 1.0,
            DensitySpec::Cosine { base, .. } => base,
        };
        b * self.manifold.volume()
    }

    fn shape_range(&self) -> (f64, f64) {
        match self.spec {
            DensitySpec::Uniform => (1.0, 1.0),
            DensitySpec::Cosine { base, amp } => (base - amp.abs(), base + amp.abs()),
        }
    }

    /// Density value `q(x)`.
    pub fn density(&self, x: &[f64]) -> f64 {
        self.shape(x) / self.shape_mass()
    }

    /// Certified lower bound `c`.
    pub fn lower_bound(&self) -> f64 {
        self.shape_range().0 / self.shape_mass()
    }

    /// Certified upper bound `C`.
    pub fn upper_bound(&self) -> f64 {
        self.shape_range().1 / self.shape_mass()
    }

    /// Monte Carlo estimate of `∫ q dμ` from uniform samples, 99% half-width.
    pub fn normalization_check(&self, seed: u64, n: usize) -> Estimate {
        let vol = self.manifold.volume();
        let mut rng = rng_from_seed(seed);
        let mut x = Vec::new();
        let vals: Vec<f64> = (0..n)
            .map(|_| {
                self.manifold.sample_uniform_point(&mut rng, &mut x);
                vol * self.density(&x)
            })
            .collect();
        Estimate::from_samples(&vals, crate::stats::Z99)
    }

    /// Rejection sampling against the uniform measure with acceptance `q/C`.
    pub fn sample(&self, seed: u64, n: usize) -> EmpiricalMeasure {
        let mut rng = rng_from_seed(seed);
        let dim = self.manifold.ambient_dim();
        let cap = self.shape_range().1;
        let mut coords = Vec::with_capacity(n * dim);
        let mut x = Vec::new();
        let mut accepted = 0;
        while accepted < n {
            self.manifold.sample_uniform_point(&mut rng, &mut x);
            if rng.random::<f64>() * cap < self.shape(&x) {
                coords.extend_from_slice(&x);
                accepted += 1;
            }
        }
        EmpiricalMeasure::new(dim, coords).expect("samples are finite")
    }
}
