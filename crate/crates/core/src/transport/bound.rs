//! Empirical check of `W₁(f_♯μ, g_♯μ) ≤ ‖f − g‖_{L¹(μ)}` for the Euclidean norm.

use serde::Serialize;

use crate::error::Result;
use crate::rng::{rng_from_seed, Rng};
use crate::stats::{Estimate, Z99};
use crate::wasserstein::{euclidean, w1_1d, w1_exact, EmpiricalMeasure};

#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub w1: f64,
    pub l1: Estimate,
    pub holds: bool,
}

/// Pushes the same `n` source draws through `f` and `g`. `W₁` is computed by
/// exact matching (sorted matching when the outputs are scalar); the L¹ side
/// is the sample mean of `‖f(z) − g(z)‖` with a 99% half-width.
pub fn l1_transport_bound_check(
    f: impl Fn(&[f64]) -> Vec<f64>,
    g: impl Fn(&[f64]) -> Vec<f64>,
    mut source: impl FnMut(&mut Rng) -> Vec<f64>,
    n: usize,
    seed: u64,
) -> Result<BoundCheck> {
    let mut rng = rng_from_seed(seed);
    let mut fs = Vec::with_capacity(n);
    let mut gs = Vec::with_capacity(n);
    let mut gaps = Vec::with_capacity(n);
    for _ in 0..n {
        let z = source(&mut rng);
        let (a, b) = (f(&z), g(&z));
        gaps.push(euclidean(&a, &b));
        fs.push(a);
        gs.push(b);
    }
    let l1 = Estimate::from_samples(&gaps, Z99);
    let fm = EmpiricalMeasure::from_points(&fs)?;
    let gm = EmpiricalMeasure::from_points(&gs)?;
    let w1 = if fm.dim() == 1 {
        w1_1d(fm.coords(), gm.coords())
    } else {
        w1_exact(&fm, &gm)?
    };
    // the identity coupling makes w1 <= mean gap exactly; the half-width absorbs rounding
    let holds = w1 <= l1.value + l1.half_width + 1e-12;
    Ok(BoundCheck { w1, l1, holds })
}
