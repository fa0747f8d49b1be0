//! Wasserstein-1 distances between empirical measures.
//!
//! [`w1_exact`] solves the min-cost assignment with Euclidean ground cost and
//! returns the mean matched distance together with its reduced-cost
//! certificate. [`w1_1d`] is the sorted-matching formula on the line and
//! [`sliced_w1`] averages it over random projections as a fast diagnostic.

pub mod lap;
mod measure;

pub use measure::EmpiricalMeasure;

use rand::seq::index::sample;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Largest cloud the exact solver accepts.
pub const EXACT_SIZE_CAP: usize = 4096;

/// Reduced costs below this value fail certification.
pub const CERTIFICATE_TOLERANCE: f64 = -1e-9;

/// How unequal cloud sizes were reconciled before matching.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub enum Resampling {
    /// Both clouds were replicated up to the least common multiple.
    Replicated { lcm: usize },
    /// The larger cloud was subsampled without replacement to the smaller size.
    Subsampled { from: usize, to: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct W1Report {
    pub value: f64,
    /// Smallest reduced cost `c_ij - u_i - v_j` at the optimum.
    pub min_reduced_cost: f64,
    pub resampling: Option<Resampling>,
}

/// Exact W1 with default resampling seed 0.
pub fn w1_exact(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> Result<f64> {
    w1_exact_report(mu, nu, 0).map(|r| r.value)
}

/// Exact W1 with full report. `subsample_seed` only matters when the sizes
/// differ and their lcm exceeds the cap.
pub fn w1_exact_report(
    mu: &EmpiricalMeasure,
    nu: &EmpiricalMeasure,
    subsample_seed: u64,
) -> Result<W1Report> {
    if mu.dim() != nu.dim() {
        return Err(Error::InputShape {
            expected: mu.dim(),
            got: nu.dim(),
        });
    }
    let (n, m) = (mu.len(), nu.len());
    if n == m {
        return solve_equal(mu, nu, None);
    }
    let l = lcm(n, m);
    if l <= EXACT_SIZE_CAP {
        log::warn!("unequal cloud sizes {n} and {m}: replicating both to {l}");
        return solve_equal(
            &mu.replicate(l / n),
            &nu.replicate(l / m),
            Some(Resampling::Replicated { lcm: l }),
        );
    }
    let (small, large, swapped) = if n < m {
        (mu, nu, false)
    } else {
        (nu, mu, true)
    };
    if small.len() > EXACT_SIZE_CAP {
        return Err(Error::SizeCap {
            n: small.len(),
            cap: EXACT_SIZE_CAP,
        });
    }
    log::warn!(
        "unequal cloud sizes {n} and {m}: subsampling the larger cloud to {}",
        small.len()
    );
    let mut rng = rng_from_seed(subsample_seed);
    let mut idx = sample(&mut rng, large.len(), small.len()).into_vec();
    idx.sort_unstable();
    let sub = large.select(&idx);
    let tag = Some(Resampling::Subsampled {
        from: large.len(),
        to: small.len(),
        seed: subsample_seed,
    });
    if swapped {
        solve_equal(&sub, small, tag)
    } else {
        solve_equal(small, &sub, tag)
    }
}

/// Exact W1 of equal-size clouds under a caller-chosen size cap. The dense
/// cost matrix takes `8n²` bytes, so caps above [`EXACT_SIZE_CAP`] are for
/// one-off checks only.
pub fn w1_exact_with_cap(
    mu: &EmpiricalMeasure,
    nu: &EmpiricalMeasure,
    cap: usize,
) -> Result<W1Report> {
    if mu.dim() != nu.dim() {
        return Err(Error::InputShape {
            expected: mu.dim(),
            got: nu.dim(),
        });
    }
    if mu.len() != nu.len() {
        return Err(Error::InputShape {
            expected: mu.len(),
            got: nu.len(),
        });
    }
    if mu.len() > cap {
        return Err(Error::SizeCap { n: mu.len(), cap });
    }
    solve_unchecked(mu, nu, None)
}

fn solve_equal(
    mu: &EmpiricalMeasure,
    nu: &EmpiricalMeasure,
    resampling: Option<Resampling>,
) -> Result<W1Report> {
    let n = mu.len();
    if n > EXACT_SIZE_CAP {
        return Err(Error::SizeCap {
            n,
            cap: EXACT_SIZE_CAP,
        });
    }
    solve_unchecked(mu, nu, resampling)
}

fn solve_unchecked(
    mu: &EmpiricalMeasure,
    nu: &EmpiricalMeasure,
    resampling: Option<Resampling>,
) -> Result<W1Report> {
    let n = mu.len();
    let costs = cost_matrix(mu, nu);
    let assignment = lap::solve(&costs, n);
    let min_reduced_cost = assignment.min_reduced_cost(&costs, n);
    if min_reduced_cost < CERTIFICATE_TOLERANCE {
        return Err(Error::Domain(format!(
            "assignment failed its optimality certificate (min reduced cost {min_reduced_cost:e})"
        )));
    }
    let value = assignment.cost(&costs, n) / n as f64;
    Ok(W1Report {
        value,
        min_reduced_cost,
        resampling,
    })
}

/// Row-major Euclidean distance matrix.
pub fn cost_matrix(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> Vec<f64> {
    let mut costs = Vec::with_capacity(mu.len() * nu.len());
    for p in mu.points() {
        for q in nu.points() {
            costs.push(euclidean(p, q));
        }
    }
    costs
}

pub fn euclidean(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// W1 between two samples on the real line.
///
/// Equal sizes use the sorted matching `mean |x_(i) - y_(i)|`; unequal sizes
/// integrate `|F - G|` between the two empirical CDFs.
pub fn w1_1d(xs: &[f64], ys: &[f64]) -> f64 {
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    if a.len() == b.len() {
        return a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut total = 0.0;
    let mut prev = a[0].min(b[0]);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        total += (i as f64 / na - j as f64 / nb).abs() * (next - prev);
        prev = next;
        while i < a.len() && a[i] <= next {
            i += 1;
        }
        while j < b.len() && b[j] <= next {
            j += 1;
        }
    }
    total
}

/// Mean over `n_projections` seeded random unit directions of the 1-D W1 of
/// the projected clouds.
pub fn sliced_w1(
    mu: &EmpiricalMeasure,
    nu: &EmpiricalMeasure,
    n_projections: usize,
    seed: u64,
) -> Result<f64> {
    if mu.dim() != nu.dim() {
        return Err(Error::InputShape {
            expected: mu.dim(),
            got: nu.dim(),
        });
    }
    if n_projections == 0 {
        return Err(Error::Parameter(
            "sliced W1 needs at least one projection".into(),
        ));
    }
    let dim = mu.dim();
    let mut rng = rng_from_seed(seed);
    let mut total = 0.0;
    for _ in 0..n_projections {
        let dir = random_unit(dim, &mut rng);
        let project = |m: &EmpiricalMeasure| -> Vec<f64> {
            m.points()
                .map(|p| p.iter().zip(&dir).map(|(a, b)| a * b).sum())
                .collect()
        };
        total += w1_1d(&project(mu), &project(nu));
    }
    Ok(total / n_projections as f64)
}

pub(crate) fn random_unit<R: rand::Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return g.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(points: &[&[f64]]) -> EmpiricalMeasure {
        EmpiricalMeasure::from_points(points).unwrap()
    }

    #[test]
    fn singleton_distance() {
        let a = cloud(&[&[0.0, 0.0]]);
        let b = cloud(&[&[3.0, 4.0]]);
        assert!((w1_exact(&a, &b).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn two_point_instance_prefers_parallel_matching() {
        let a = cloud(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let b = cloud(&[&[0.0, 1.0], &[1.0, 1.0]]);
        assert!((w1_exact(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_clouds_are_at_distance_zero() {
        let a = cloud(&[&[0.3, 1.0], &[2.0, -1.0], &[0.0, 0.5]]);
        assert_eq!(w1_exact(&a, &a).unwrap(), 0.0);
        assert_eq!(sliced_w1(&a, &a, 16, 3).unwrap(), 0.0);
    }

    #[test]
    fn one_dimensional_sorted_matching() {
        assert!((w1_1d(&[0.0, 1.0], &[0.5, 1.5]) - 0.5).abs() < 1e-15);
        assert_eq!(w1_1d(&[0.2, 0.9, 0.4], &[0.9, 0.4, 0.2]), 0.0);
    }

    #[test]
    fn unequal_sizes_in_one_dimension() {
        // {0} vs {0, 1}: half the mass moves distance 1
        assert!((w1_1d(&[0.0], &[0.0, 1.0]) - 0.5).abs() < 1e-15);
        let a = EmpiricalMeasure::from_scalars(&[0.0]).unwrap();
        let b = EmpiricalMeasure::from_scalars(&[0.0, 1.0]).unwrap();
        let r = w1_exact_report(&a, &b, 0).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
        assert_eq!(r.resampling, Some(Resampling::Replicated { lcm: 2 }));
    }

    #[test]
    fn size_cap_is_enforced() {
        let big = EmpiricalMeasure::new(1, vec![0.0; EXACT_SIZE_CAP + 1]).unwrap();
        assert!(matches!(w1_exact(&big, &big), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn subsampling_when_lcm_exceeds_cap() {
        let a = EmpiricalMeasure::new(1, (0..3000).map(|i| i as f64).collect()).unwrap();
        let b = EmpiricalMeasure::new(1, (0..4001).map(|i| i as f64).collect()).unwrap();
        let r = w1_exact_report(&a, &b, 9).unwrap();
        assert!(matches!(
            r.resampling,
            Some(Resampling::Subsampled {
                from: 4001,
                to: 3000,
                seed: 9
            })
        ));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = cloud(&[&[0.0]]);
        let b = cloud(&[&[0.0, 1.0]]);
        assert!(w1_exact(&a, &b).is_err());
    }
}
