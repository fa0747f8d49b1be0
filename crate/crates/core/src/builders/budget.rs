//! Claimed structural bounds for every builder.
//!
//! Each function returns the bounds the corresponding builder promises for
//! its inputs. The depth bounds are the closed forms `c·log₂(·) + c′` with the
//! constants listed in the returned ledger; they are upper bounds derived from
//! the layer counts of the constructions, not the exact counts.

use serde::Serialize;

use crate::relu_net::NetworkMetrics;

use super::holder::{
    holder_cells_per_axis, holder_range, piecewise_cell_tolerance, CubePartition, HolderFunction,
};
use super::indicator::{cube_indicator_tolerances, Cube};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxBudget {
    pub epsilon: f64,
    pub claimed_depth_bound: f64,
    pub claimed_width_bound: f64,
    pub claimed_weight_bound: f64,
    /// Named constants entering the claimed bounds.
    pub constants: Vec<(String, f64)>,
}

impl ApproxBudget {
    /// Whether `m` respects every claimed bound.
    pub fn admits(&self, m: &NetworkMetrics) -> bool {
        m.depth as f64 <= self.claimed_depth_bound
            && m.width as f64 <= self.claimed_width_bound
            && m.weight_bound <= self.claimed_weight_bound
    }

    /// Names of the violated bounds.
    pub fn violations(&self, m: &NetworkMetrics) -> Vec<&'static str> {
        let mut out = Vec::new();
        if m.depth as f64 > self.claimed_depth_bound {
            out.push("depth");
        }
        if m.width as f64 > self.claimed_width_bound {
            out.push("width");
        }
        if m.weight_bound > self.claimed_weight_bound {
            out.push("weight");
        }
        out
    }
}

fn named(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Multiplication gadget: depth ≤ log₂(Â²/eps) + 5, width ≤ 8, weights ≤ Â.
pub const TIMES_DEPTH_C: f64 = 1.0;
pub const TIMES_DEPTH_C0: f64 = 5.0;
pub const TIMES_WIDTH: f64 = 8.0;

pub fn times_budget(a: f64, eps: f64) -> ApproxBudget {
    let ah = a.max(1.0);
    ApproxBudget {
        epsilon: eps,
        claimed_depth_bound: TIMES_DEPTH_C * (ah * ah / eps).log2() + TIMES_DEPTH_C0,
        claimed_width_bound: TIMES_WIDTH,
        claimed_weight_bound: ah,
        constants: named(&[("c", TIMES_DEPTH_C), ("c0", TIMES_DEPTH_C0)]),
    }
}

/// Product tree: depth ≤ c₁·log₂(d³M̂^d/eps) + c₂ with `c₁ = ⌈log₂ d⌉` and
/// `c₂ = 3c₁ + 1 + d`; width ≤ 8d; weights ≤ max(2M, 1).
pub fn times_d_budget(d: usize, m: f64, eps: f64) -> ApproxBudget {
    let mh = m.max(1.0);
    let c1 = (d as f64).log2().ceil();
    let c2 = 3.0 * c1 + 1.0 + d as f64;
    let arg = (d as f64).powi(3) * mh.powi(d as i32) / eps;
    ApproxBudget {
        epsilon: eps,
        claimed_depth_bound: c1 * arg.log2() + c2,
        claimed_width_bound: 8.0 * d as f64,
        claimed_weight_bound: (2.0 * m).max(1.0),
        constants: named(&[("c1", c1), ("c2", c2)]),
    }
}

fn indicator_depth_bound(eps: f64, m: f64) -> f64 {
    ((1.0 / eps).ln() / m.ln()).max(0.0) + 2.0
}

/// Trapezoid: depth ≤ log_M(1/eps) + 2, width 4, weights ≤ max(M, |a−eps|, |b+eps|).
pub fn indicator_budget(a: f64, b: f64, eps: f64, m: f64) -> ApproxBudget {
    ApproxBudget {
        epsilon: eps,
        claimed_depth_bound: indicator_depth_bound(eps, m),
        claimed_width_bound: 4.0,
        claimed_weight_bound: m.max((a - eps).abs()).max((b + eps).abs()),
        constants: named(&[("c0", 2.0)]),
    }
}

/// Cube indicator: trapezoids at ramp `δ` followed by the unit-range product
/// tree at `η`; width ≤ 4d, weights ≤ max(M, 2) unless a face lies within `δ`
/// of `±M`.
pub fn cube_indicator_budget(cube: &Cube, eps: f64, m: f64) -> ApproxBudget {
    let d = cube.dim();
    let (delta, eta) = cube_indicator_tolerances(d, eps, m);
    let edge = cube
        .lower
        .iter()
        .map(|a| (a - delta).abs())
        .chain(cube.upper.iter().map(|b| (b + delta).abs()))
        .fold(0.0, f64::max);
    let ramp_depth = indicator_depth_bound(delta, m);
    let depth = if d == 1 {
        ramp_depth
    } else {
        ramp_depth + times_d_budget(d, 1.0, eta).claimed_depth_bound - 1.0
    };
    ApproxBudget {
        epsilon: eps,
        claimed_depth_bound: depth,
        claimed_width_bound: 4.0 * d as f64,
        claimed_weight_bound: m.max(2.0).max(edge),
        constants: named(&[("delta", delta), ("eta", eta)]),
    }
}

/// Piecewise network: one cube indicator per cell plus a clip layer; width ≤ 4d·n^d.
pub fn piecewise_budget(partition: &CubePartition, eps: f64, m: f64) -> ApproxBudget {
    let cell = partition.cell(0);
    let inner = cube_indicator_budget(&cell, piecewise_cell_tolerance(partition, eps, m), m);
    ApproxBudget {
        epsilon: eps,
        claimed_depth_bound: inner.claimed_depth_bound + 1.0,
        claimed_width_bound: 4.0 * partition.d as f64 * partition.len() as f64,
        claimed_weight_bound: m.max(2.0),
        constants: inner.constants,
    }
}

/// Calibrated constants for `depth ≤ c₁·log₂(1/eps)` and `width ≤ c₂·eps^{−d/α}`
/// of the Hölder builder, fitted on the `√x` family (`d = 1`, `α = 1/2`,
/// norm 2) over `eps ∈ {1/2, 1/4, 1/8, 1/16}`.
pub const HOLDER_SQRT_DEPTH_C1: f64 = 13.0;
pub const HOLDER_SQRT_WIDTH_C2: f64 = 64.0;

/// `(c₁·log₂(1/eps), c₂·eps^{−d/α})` with the calibrated constants.
pub fn holder_calibrated_bounds(eps: f64, d: usize, alpha: f64) -> (f64, f64) {
    (
        HOLDER_SQRT_DEPTH_C1 * (1.0 / eps).log2(),
        HOLDER_SQRT_WIDTH_C2 * eps.powf(-(d as f64) / alpha),
    )
}

/// Hölder approximator: the piecewise budget at `eps/2` on the grid chosen by
/// the builder, plus the calibrated constant forms.
pub fn holder_budget(f: &HolderFunction, eps: f64) -> ApproxBudget {
    let n = holder_cells_per_axis(f, eps);
    let partition = CubePartition { n, d: f.dim };
    let mut inner = piecewise_budget(&partition, eps / 2.0, holder_range(f));
    inner.epsilon = eps;
    inner.constants.push(("cells_per_axis".into(), n as f64));
    inner
        .constants
        .push(("c1_calibrated".into(), HOLDER_SQRT_DEPTH_C1));
    inner
        .constants
        .push(("c2_calibrated".into(), HOLDER_SQRT_WIDTH_C2));
    inner
}
