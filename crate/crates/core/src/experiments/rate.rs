//! Empirical-measure convergence sweeps and the noisy-sample bound.
//!
//! Seeds: the reference cloud uses `derive_seed(master, REFERENCE, 0)`; the
//! sample for size `n` and replicate `r` uses `derive_seed(master, SAMPLE, i)`
//! with `i = (n << 20) | r`, its reference subsample `SUBSAMPLE` and its
//! noise `NOISE` at the same index.

use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::manifold::{ChartedManifold, DensitySpec, ManifoldDensity};
use crate::rng::{derive_seed, rng_from_seed, stream};
use crate::stats::{mean, ols};
use crate::wasserstein::{w1_exact, EmpiricalMeasure, EXACT_SIZE_CAP};

use super::csv::fmt_sig;

/// Reference size multiplier used when none is given.
pub const DEFAULT_REF_MULT: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateSweepConfig {
    pub manifold: String,
    pub density: String,
    pub ns: Vec<usize>,
    pub replicates: usize,
    pub ref_mult: usize,
    pub seed: u64,
    pub noise_sigma: Option<f64>,
}

impl RateSweepConfig {
    pub fn new(manifold: &str, ns: Vec<usize>, replicates: usize, seed: u64) -> Self {
        RateSweepConfig {
            manifold: manifold.into(),
            density: "uniform".into(),
            ns,
            replicates,
            ref_mult: DEFAULT_REF_MULT,
            seed,
            noise_sigma: None,
        }
    }

    pub fn validate(&self) -> Result<ManifoldDensity> {
        if self.ns.is_empty() || self.ns.windows(2).any(|w| w[0] >= w[1]) || self.ns[0] == 0 {
            return Err(Error::Config(
                "sample sizes must be positive and strictly increasing".into(),
            ));
        }
        if self.replicates < 3 {
            return Err(Error::Config(format!(
                "need at least 3 replicates, got {}",
                self.replicates
            )));
        }
        let max_n = *self.ns.last().unwrap();
        if max_n > EXACT_SIZE_CAP {
            return Err(Error::Config(format!(
                "sample size {max_n} exceeds the exact-W1 cap {EXACT_SIZE_CAP}"
            )));
        }
        if self.ref_mult == 0 || self.ref_mult > 1024 {
            return Err(Error::Config(format!(
                "reference multiplier must lie in 1..=1024, got {}",
                self.ref_mult
            )));
        }
        if self.replicates >= 1 << 20 {
            return Err(Error::Config("too many replicates".into()));
        }
        if let Some(s) = self.noise_sigma {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::Config(format!(
                    "noise sigma must be finite and nonnegative, got {s}"
                )));
            }
        }
        let m = ChartedManifold::from_spec(&self.manifold)?;
        Ok(ManifoldDensity::new(m, DensitySpec::parse(&self.density)?))
    }

    fn index(n: usize, r: usize) -> u64 {
        ((n as u64) << 20) | r as u64
    }

    fn reference(&self, q: &ManifoldDensity) -> EmpiricalMeasure {
        q.sample(
            derive_seed(self.seed, stream::REFERENCE, 0),
            self.ref_mult * self.ns.last().unwrap(),
        )
    }

    fn draw(&self, q: &ManifoldDensity, n: usize, r: usize) -> (u64, EmpiricalMeasure) {
        let seed = derive_seed(self.seed, stream::SAMPLE, Self::index(n, r));
        (seed, q.sample(seed, n))
    }

    /// Every size uses the same estimator: the reference is subsampled to
    /// `n` without replacement before the exact matching, even when
    /// replication to the common multiple would fit under the cap.
    fn w1_to_reference(
        &self,
        x: &EmpiricalMeasure,
        reference: &EmpiricalMeasure,
        n: usize,
        r: usize,
    ) -> Result<f64> {
        if reference.len() == n {
            return w1_exact(x, reference);
        }
        let mut rng = rng_from_seed(derive_seed(self.seed, stream::SUBSAMPLE, Self::index(n, r)));
        let mut idx = rand::seq::index::sample(&mut rng, reference.len(), n).into_vec();
        idx.sort_unstable();
        w1_exact(x, &reference.select(&idx))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub n: usize,
    pub replicate: usize,
    pub w1: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateTable {
    pub config: RateSweepConfig,
    pub rows: Vec<RateRow>,
    /// `(n, W₁ between two disjoint size-n subsamples of the reference)`:
    /// the two-sample level the proxy itself sits at.
    pub reference_floor: Vec<(usize, f64)>,
    /// Absent when the sweep has fewer than 3 distinct sizes.
    pub fit: Option<SlopeFit>,
}

/// Draws `Q_n` for every size and replicate and measures it against one
/// reference draw of size `ref_mult · max n`, subsampled to `n`, so each
/// value is a two-sample proxy for `W₁(Q_n, Q)`; the slope, not the level,
/// carries the claim.
pub fn rate_sweep(cfg: &RateSweepConfig) -> Result<RateTable> {
    let q = cfg.validate()?;
    let reference = cfg.reference(&q);
    let mut rows = Vec::with_capacity(cfg.ns.len() * cfg.replicates);
    for &n in &cfg.ns {
        for r in 0..cfg.replicates {
            let (seed, x) = cfg.draw(&q, n, r);
            let w1 = cfg.w1_to_reference(&x, &reference, n, r)?;
            log::debug!("n {n} replicate {r}: w1 {w1}");
            rows.push(RateRow {
                n,
                replicate: r,
                w1,
                seed,
            });
        }
    }
    let reference_floor = cfg
        .ns
        .iter()
        .filter(|&&n| 2 * n <= reference.len())
        .map(|&n| {
            let mut rng = rng_from_seed(derive_seed(
                cfg.seed,
                stream::SUBSAMPLE,
                RateSweepConfig::index(n, (1 << 20) - 1),
            ));
            let idx = rand::seq::index::sample(&mut rng, reference.len(), 2 * n).into_vec();
            let (a, b) = idx.split_at(n);
            Ok((n, w1_exact(&reference.select(a), &reference.select(b))?))
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = if cfg.ns.len() >= 3 {
        Some(fit_slope(&rows)?)
    } else {
        None
    };
    Ok(RateTable {
        config: cfg.clone(),
        rows,
        reference_floor,
        fit,
    })
}

/// Least squares of `ln(mean W₁)` on `ln n` over the distinct sizes.
pub fn fit_slope(rows: &[RateRow]) -> Result<SlopeFit> {
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        return Err(Error::Fit(format!(
            "slope fit needs at least 3 distinct sample sizes, got {}",
            ns.len()
        )));
    }
    let mut xs = Vec::with_capacity(ns.len());
    let mut ys = Vec::with_capacity(ns.len());
    for n in ns {
        let m = mean(
            &rows
                .iter()
                .filter(|r| r.n == n)
                .map(|r| r.w1)
                .collect::<Vec<_>>(),
        );
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Fit(format!(
                "mean W1 at n = {n} is {m}; a log-log fit needs positive values"
            )));
        }
        xs.push((n as f64).ln());
        ys.push(m.ln());
    }
    let (slope, intercept, stderr) = ols(&xs, &ys);
    Ok(SlopeFit {
        slope,
        intercept,
        stderr,
    })
}

impl RateTable {
    /// Header `n,replicate,w1,seed`, 12 significant digits, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,replicate,w1,seed\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.n,
                r.replicate,
                fmt_sig(r.w1, 12),
                r.seed
            ));
        }
        out
    }

    /// Sidecar table `n,reference_floor`.
    pub fn floor_csv(&self) -> String {
        let mut out = String::from("n,reference_floor\n");
        for (n, w) in &self.reference_floor {
            out.push_str(&format!("{n},{}\n", fmt_sig(*w, 12)));
        }
        out
    }

    /// `(n, mean W₁)` in size order.
    pub fn means(&self) -> Vec<(usize, f64)> {
        self.config
            .ns
            .iter()
            .map(|&n| {
                (
                    n,
                    mean(
                        &self
                            .rows
                            .iter()
                            .filter(|r| r.n == n)
                            .map(|r| r.w1)
                            .collect::<Vec<_>>(),
                    ),
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoisyRow {
    pub n: usize,
    pub replicate: usize,
    pub seed: u64,
    /// `W₁(Q_n, Q̂_n)` on the paired clouds.
    pub w1_clean_noisy: f64,
    pub w1_clean_ref: f64,
    pub w1_noisy_ref: f64,
    /// `w1_noisy_ref ≤ w1_clean_ref + 2√V`.
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoisyReport {
    pub config: RateSweepConfig,
    pub ambient_dim: usize,
    pub sigma: f64,
    /// `√V` with `V = D σ²`.
    pub sqrt_variance: f64,
    pub rows: Vec<NoisyRow>,
    /// `(n, mean W₁(Q_n, Q̂_n))`.
    pub mean_clean_noisy: Vec<(usize, f64)>,
    /// Every mean is at most `√V`.
    pub mean_within_sqrt_variance: bool,
    /// Every replicate satisfies the reference bound.
    pub all_within_bound: bool,
}

/// Pairs each clean draw with `X̂_i = X_i + ξ_i`, `ξ ~ N(0, σ² I_D)`.
pub fn noisy_sweep(cfg: &RateSweepConfig) -> Result<NoisyReport> {
    let q = cfg.validate()?;
    let sigma = cfg
        .noise_sigma
        .ok_or_else(|| Error::Config("noisy sweep needs a noise sigma".into()))?;
    let dim = q.manifold().ambient_dim();
    let sqrt_variance = (dim as f64 * sigma * sigma).sqrt();
    let reference = cfg.reference(&q);
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::Config(e.to_string()))?;
    let mut rows = Vec::new();
    for &n in &cfg.ns {
        for r in 0..cfg.replicates {
            let (seed, x) = cfg.draw(&q, n, r);
            let mut rng = rng_from_seed(derive_seed(
                cfg.seed,
                stream::NOISE,
                RateSweepConfig::index(n, r),
            ));
            let noisy: Vec<f64> = x
                .coords()
                .iter()
                .map(|v| v + noise.sample(&mut rng))
                .collect();
            let noisy = EmpiricalMeasure::new(dim, noisy)?;
            let w1_clean_noisy = w1_exact(&x, &noisy)?;
            let w1_clean_ref = cfg.w1_to_reference(&x, &reference, n, r)?;
            let w1_noisy_ref = cfg.w1_to_reference(&noisy, &reference, n, r)?;
            let within_bound = w1_noisy_ref <= w1_clean_ref + 2.0 * sqrt_variance;
            rows.push(NoisyRow {
                n,
                replicate: r,
                seed,
                w1_clean_noisy,
                w1_clean_ref,
                w1_noisy_ref,
                within_bound,
            });
        }
    }
    let mean_clean_noisy: Vec<(usize, f64)> = cfg
        .ns
        .iter()
        .map(|&n| {
            (
                n,
                mean(
                    &rows
                        .iter()
                        .filter(|r| r.n == n)
                        .map(|r| r.w1_clean_noisy)
                        .collect::<Vec<_>>(),
                ),
            )
        })
        .collect();
    Ok(NoisyReport {
        config: cfg.clone(),
        ambient_dim: dim,
        sigma,
        sqrt_variance,
        mean_within_sqrt_variance: mean_clean_noisy.iter().all(|(_, m)| *m <= sqrt_variance),
        all_within_bound: rows.iter().all(|r| r.within_bound),
        rows,
        mean_clean_noisy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows_from(f: impl Fn(usize, usize) -> f64) -> Vec<RateRow> {
        let mut rows = Vec::new();
        for n in [128, 256, 512, 1024, 2048] {
            for r in 0..5 {
                rows.push(RateRow {
                    n,
                    replicate: r,
                    w1: f(n, r),
                    seed: 0,
                });
            }
        }
        rows
    }

    #[test]
    fn exact_power_laws() {
        let fit = fit_slope(&rows_from(|n, _| (n as f64).powf(-0.5))).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12 && fit.stderr < 1e-12);
        let fit = fit_slope(&rows_from(|n, _| 3.0 * (n as f64).powf(-1.0 / 3.0))).unwrap();
        assert!((fit.slope + 1.0 / 3.0).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn noisy_power_law() {
        use rand::Rng as _;
        let mut rng = rng_from_seed(5);
        let noise: Vec<f64> = (0..25)
            .map(|_| 1.0 + 0.05 * (2.0 * rng.random::<f64>() - 1.0))
            .collect();
        let fit = fit_slope(&rows_from(|n, r| {
            noise[(n.trailing_zeros() as usize - 7) * 5 + r] * (n as f64).powf(-0.4)
        }))
        .unwrap();
        assert!((fit.slope + 0.4).abs() < 0.02, "{fit:?}");
    }

    #[test]
    fn single_size_is_a_fit_error() {
        let rows = vec![
            RateRow {
                n: 64,
                replicate: 0,
                w1: 0.1,
                seed: 0
            };
            3
        ];
        assert!(matches!(fit_slope(&rows), Err(Error::Fit(_))));
    }

    #[test]
    fn config_validation() {
        let ok = RateSweepConfig::new("circle:1", vec![16, 32, 64], 3, 1);
        assert!(ok.validate().is_ok());
        for bad in [
            RateSweepConfig {
                ns: vec![32, 16, 64],
                ..ok.clone()
            },
            RateSweepConfig {
                replicates: 2,
                ..ok.clone()
            },
            RateSweepConfig {
                ns: vec![16, 32, 8192],
                ..ok.clone()
            },
        ] {
            assert!(matches!(bad.validate(), Err(Error::Config(_))));
        }
    }

    #[test]
    fn small_sweep_is_deterministic_and_decreasing() {
        let cfg = RateSweepConfig::new("circle:1", vec![32, 128, 512], 3, 7);
        let a = rate_sweep(&cfg).unwrap();
        assert_eq!(a.to_csv(), rate_sweep(&cfg).unwrap().to_csv());
        assert!(a.fit.as_ref().unwrap().slope < -0.2, "{:?}", a.fit);
        assert!(a.to_csv().starts_with("n,replicate,w1,seed\n32,0,"));
        assert_eq!(a.reference_floor.len(), 3);
    }

    #[test]
    fn zero_noise_is_exact() {
        let mut cfg = RateSweepConfig::new("sphere:1", vec![16, 32, 64], 3, 2);
        cfg.noise_sigma = Some(0.0);
        let rep = noisy_sweep(&cfg).unwrap();
        assert!(rep
            .rows
            .iter()
            .all(|r| r.w1_clean_noisy == 0.0 && r.w1_noisy_ref == r.w1_clean_ref));
    }
}
