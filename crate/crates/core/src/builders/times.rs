//! Multiplication gadgets.
//!
//! `build_times` approximates `xy` on `[-A, A]^2` by polarization,
//! `xy = 2Â²(s₁² − (s₂² + s₃²)/4)` with `s₁ = |x+y|/(2Â)`, `s₂ = |x|/Â`,
//! `s₃ = |y|/Â` and `Â = max(A, 1)`, and three parallel sawtooth squaring
//! pipelines on `[0, 1]`. The teeth are kept pre-scaled by `4^{-s}` so every
//! hidden weight stays in `[-1, 1]`:
//!
//! ```text
//! G₀ = t,   G_{s+1} = σ(G_s)/2 − σ(G_s − 4^{-s}/2),   t² ≈ t − Σ_{s=1..m} G_s
//! ```
//!
//! The three pipelines share one accumulator neuron carrying `1 + Ĉ` (always
//! positive), so the hidden width is 7.

use crate::error::{Error, Result};
use crate::relu_net::{Layer, ReluNetwork};

/// Number of squaring stages used for tolerance `eps` on `[-A, A]^2`.
pub fn times_stages(a: f64, eps: f64) -> usize {
    let a = a.max(1.0);
    ((a * a / eps).log2().ceil() as usize).max(1)
}

/// Guaranteed sup error of the gadget with `m` stages: `Â² 2^{-2m-1}`.
pub fn times_error_bound(a: f64, m: usize) -> f64 {
    let a = a.max(1.0);
    a * a * 0.5f64.powi(2 * m as i32 + 1)
}

/// ReLU network `(x, y) ↦ ×̃(x, y)` with `|×̃(x,y) − xy| ≤ eps` on `[-A, A]^2`.
pub fn build_times(a: f64, eps: f64) -> Result<ReluNetwork> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Parameter(format!(
            "multiplication range A must be positive, got {a}"
        )));
    }
    if !(eps > 0.0 && eps < a * a) {
        return Err(Error::Parameter(format!(
            "need 0 < eps < A^2 = {}, got eps = {eps}",
            a * a
        )));
    }
    times_with_stages(a, times_stages(a, eps))
}

/// The gadget with an explicit stage count `m >= 1`.
pub fn times_with_stages(a: f64, m: usize) -> Result<ReluNetwork> {
    if m == 0 {
        return Err(Error::Parameter(
            "the squaring chain needs at least one stage".into(),
        ));
    }
    let ah = a.max(1.0);
    let inv = 1.0 / ah;
    // signed pipeline weights in Ĉ = f(s₁) − f(s₂)/4 − f(s₃)/4
    const W: [f64; 3] = [1.0, -0.25, -0.25];
    let mut layers = Vec::new();

    // |x+y|, |x|, |y| as ReLU pairs
    let abs_layer = vec![
        (0, 0, 1.0),
        (0, 1, 1.0),
        (1, 0, -1.0),
        (1, 1, -1.0),
        (2, 0, 1.0),
        (3, 0, -1.0),
        (4, 1, 1.0),
        (5, 1, -1.0),
    ];
    layers.push(Layer::from_entries(6, 2, abs_layer, vec![0.0; 6])?);

    // t_i as combinations of the abs neurons
    let t_of: [[(usize, f64); 2]; 3] = [
        [(0, 0.5 * inv), (1, 0.5 * inv)],
        [(2, inv), (3, inv)],
        [(4, inv), (5, inv)],
    ];
    // neurons 2i, 2i+1: a, b of pipeline i; neuron 6: accumulator
    let mut entries = Vec::new();
    let mut bias = vec![0.0; 7];
    for (i, terms) in t_of.iter().enumerate() {
        for &(c, w) in terms {
            entries.push((2 * i, c, w));
            entries.push((2 * i + 1, c, w));
            entries.push((6, c, W[i] * w));
        }
        bias[2 * i + 1] = -0.5;
    }
    bias[6] = 1.0;
    layers.push(Layer::from_entries(7, 6, entries, bias)?);

    // G_s = a/2 − b from the previous layer, for s = 1..m-1
    let g_terms = |i: usize| [(2 * i, 0.5), (2 * i + 1, -1.0)];
    for s in 1..m {
        let mut entries = Vec::new();
        let mut bias = vec![0.0; 7];
        entries.push((6, 6, 1.0));
        for i in 0..3 {
            for (c, w) in g_terms(i) {
                entries.push((2 * i, c, w));
                entries.push((2 * i + 1, c, w));
                entries.push((6, c, -W[i] * w));
            }
            bias[2 * i + 1] = -0.5 * 0.25f64.powi(s as i32);
        }
        layers.push(Layer::from_entries(7, 7, entries, bias)?);
    }

    // Ĉ = P − 1 − Σ W_i G_m, split as [σ(Ĉ), σ(Ĉ), σ(−Ĉ), σ(−Ĉ)]
    let mut entries = Vec::new();
    for (row, sign) in [(0, 1.0), (1, 1.0), (2, -1.0), (3, -1.0)] {
        entries.push((row, 6, sign));
        for i in 0..3 {
            for (c, w) in g_terms(i) {
                entries.push((row, c, -sign * W[i] * w));
            }
        }
    }
    layers.push(Layer::from_entries(
        4,
        7,
        entries,
        vec![-1.0, -1.0, 1.0, 1.0],
    )?);

    // output 2Â²Ĉ using factors of Â
    if ah > 1.0 {
        let scale = (0..4).map(|i| (i, i, ah)).collect();
        layers.push(Layer::from_entries(4, 4, scale, vec![0.0; 4])?);
    }
    let out = vec![(0, 0, ah), (0, 1, ah), (0, 2, -ah), (0, 3, -ah)];
    layers.push(Layer::from_entries(1, 4, out, vec![0.0])?);
    ReluNetwork::new(layers)
}

/// Approximates `Π x_i` on `[-M, M]^d` within `eps` (strictly).
///
/// Inputs are divided by `M̂ = max(M, 1)`, multiplied pairwise in a binary
/// tree of unit-range gadgets, and the result is scaled back by `M̂^d` through
/// a signed chain whose factors are at most `2M̂`. Slots beyond `d` in the tree
/// hold the constant 1: a pair `(x, 1)` is an exact identity pass-through and
/// `(1, 1)` needs no neurons at all.
pub fn build_times_d(d: usize, m: f64, eps: f64) -> Result<ReluNetwork> {
    if d < 2 {
        return Err(Error::Parameter(format!(
            "product tree needs d >= 2, got {d}"
        )));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Parameter(format!(
            "range M must be positive, got {m}"
        )));
    }
    if !(eps > 0.0 && eps < m * m) {
        return Err(Error::Parameter(format!(
            "need 0 < eps < M^2 = {}, got eps = {eps}",
            m * m
        )));
    }
    let plan = TreePlan::new(d, m, eps);
    let gadget = times_with_stages(1.0, plan.stages)?;
    let gadget_depth = gadget.depth();

    let normalize: Vec<_> = (0..d).map(|i| (i, i, 1.0 / plan.m_hat)).collect();
    let mut net = ReluNetwork::new(vec![Layer::from_entries(d, d, normalize, vec![0.0; d])?])?;
    // None marks the constant 1
    let mut slots: Vec<Option<usize>> = (0..plan.width).map(|i| (i < d).then_some(i)).collect();
    while slots.len() > 1 {
        let inputs = slots.iter().filter(|s| s.is_some()).count();
        let mut parts = Vec::new();
        let mut next = Vec::new();
        let mut produced = 0;
        for pair in slots.chunks(2) {
            match (pair[0], pair[1]) {
                (Some(p), Some(q)) => {
                    parts.push(gadget.with_input_map(inputs, &[p, q])?);
                    next.push(Some(produced));
                    produced += 1;
                }
                (Some(p), None) | (None, Some(p)) => {
                    parts.push(
                        ReluNetwork::identity_gadget(1, gadget_depth)?
                            .with_input_map(inputs, &[p])?,
                    );
                    next.push(Some(produced));
                    produced += 1;
                }
                (None, None) => next.push(None),
            }
        }
        let level = ReluNetwork::parallel(&parts, true)?;
        net = ReluNetwork::compose(&net, &level)?;
        slots = next;
    }
    if plan.chain_len > 0 {
        net = ReluNetwork::compose(
            &net,
            &signed_scale_chain(plan.chain_factor, plan.chain_len)?,
        )?;
    }
    Ok(net)
}

/// Parameters of the product tree, shared with the budget ledger.
#[derive(Debug, Clone, Copy)]
pub struct TreePlan {
    pub m_hat: f64,
    /// Number of tree levels `⌈log₂ d⌉`.
    pub levels: usize,
    /// Leaf count `2^levels`.
    pub width: usize,
    pub stages: usize,
    pub chain_len: usize,
    pub chain_factor: f64,
}

impl TreePlan {
    pub fn new(d: usize, m: f64, eps: f64) -> Self {
        let m_hat = m.max(1.0);
        let levels = (usize::BITS - (d - 1).leading_zeros()) as usize;
        let scale = m_hat.powi(d as i32);
        // level errors obey E_{l+1} ≤ δ + 2E_l, so E_levels < 2^levels δ
        let delta = eps / scale / (1u64 << levels) as f64;
        let stages = ((1.0 / delta).log2().ceil() as usize).max(1);
        let (chain_len, chain_factor) = if m_hat > 1.0 {
            let len = (d as f64 * m_hat.ln() / (2.0 * m_hat).ln()).ceil() as usize;
            (len, scale.powf(1.0 / len as f64))
        } else {
            (0, 1.0)
        };
        TreePlan {
            m_hat,
            levels,
            width: 1 << levels,
            stages,
            chain_len,
            chain_factor,
        }
    }
}

/// `z ↦ factor^len · z` through `len` layers of `[σ(z), σ(−z)]` scaling.
pub(crate) fn signed_scale_chain(factor: f64, len: usize) -> Result<ReluNetwork> {
    let mut layers = vec![Layer::from_entries(
        2,
        1,
        vec![(0, 0, factor), (1, 0, -factor)],
        vec![0.0; 2],
    )?];
    for _ in 1..len {
        layers.push(Layer::from_entries(
            2,
            2,
            vec![(0, 0, factor), (1, 1, factor)],
            vec![0.0; 2],
        )?);
    }
    layers.push(Layer::from_entries(
        1,
        2,
        vec![(0, 0, 1.0), (0, 1, -1.0)],
        vec![0.0],
    )?);
    ReluNetwork::new(layers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_sup_error(net: &ReluNetwork, a: f64, points: usize) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..points {
            for j in 0..points {
                let x = -a + 2.0 * a * i as f64 / (points - 1) as f64;
                let y = -a + 2.0 * a * j as f64 / (points - 1) as f64;
                let v = net.evaluate(&[x, y]).unwrap()[0];
                worst = worst.max((v - x * y).abs());
            }
        }
        worst
    }

    #[test]
    fn unit_gadget_meets_tolerance_and_budgets() {
        let net = build_times(1.0, 0.25).unwrap();
        assert!(grid_sup_error(&net, 1.0, 201) <= 0.25);
        assert!(net.evaluate(&[0.0, 0.7]).unwrap()[0].abs() <= 0.25);
        for eps in [0.1, 0.01, 0.001] {
            let m = build_times(1.0, eps).unwrap().metrics();
            assert!(m.width <= 8);
            assert!(m.weight_bound <= 1.0);
        }
    }

    #[test]
    fn error_matches_the_stage_bound() {
        for m in 1..8 {
            let net = times_with_stages(1.0, m).unwrap();
            let err = grid_sup_error(&net, 1.0, 129);
            assert!(
                err <= times_error_bound(1.0, m) * (1.0 + 1e-9),
                "m={m}: {err}"
            );
        }
    }

    #[test]
    fn unit_gadget_output_stays_in_unit_interval() {
        for m in 1..10 {
            let net = times_with_stages(1.0, m).unwrap();
            for i in 0..=200 {
                for j in 0..=200 {
                    let x = -1.0 + i as f64 / 100.0;
                    let y = -1.0 + j as f64 / 100.0;
                    let v = net.evaluate(&[x, y]).unwrap()[0];
                    assert!(v.abs() <= 1.0 + 1e-12, "m={m} ({x},{y}) -> {v}");
                }
            }
        }
    }

    #[test]
    fn rejects_large_eps() {
        assert!(matches!(build_times(1.0, 1.0), Err(Error::Parameter(_))));
        assert!(matches!(
            build_times_d(3, 1.0, 1.5),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn tree_product_examples() {
        let net = build_times_d(3, 1.0, 0.05).unwrap();
        assert!((net.evaluate(&[0.5, 0.5, 0.5]).unwrap()[0] - 0.125).abs() < 0.05);
        let net = build_times_d(5, 1.0, 0.05).unwrap();
        assert!((net.evaluate(&[1.0; 5]).unwrap()[0] - 1.0).abs() < 0.05);
        for d in [2, 3, 5, 8] {
            assert!(build_times_d(d, 1.0, 0.01).unwrap().metrics().width <= 8 * d);
        }
    }

    #[test]
    fn tree_with_large_range_rescales() {
        let net = build_times_d(3, 3.0, 0.5).unwrap();
        let m = net.metrics();
        assert!(m.weight_bound <= 6.0 + 1e-12, "{m:?}");
        for x in [[3.0, -3.0, 2.5], [1.0, 2.0, -0.5], [-3.0, -3.0, -3.0]] {
            let v = net.evaluate(&x).unwrap()[0];
            assert!((v - x.iter().product::<f64>()).abs() < 0.5, "{x:?} -> {v}");
        }
    }
}
