//! Gluing chart networks into one generator network.
//!
//! For each output coordinate `k` the generator computes
//! `Σ_j ×̃(𝟙̃_{(π_{j−1}, π_j)}(x₁), g_{jk}(x_{2:}))`: the first input picks a
//! chart through a trapezoid indicator, the remaining inputs feed the chart
//! networks, and a multiplication gadget gates each chart's value.

use crate::error::{Error, Result};
use crate::relu_net::{Layer, ReluNetwork};

use super::indicator::build_indicator;
use super::times::build_times;

/// Tolerances of the gluing step.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GeneratorTolerances {
    /// Ramp width of the chart-selecting indicators.
    pub delta1: f64,
    /// Multiplication gadget tolerance.
    pub delta2: f64,
    /// Accuracy the chart networks must reach.
    pub delta3: f64,
}

impl GeneratorTolerances {
    /// Picks `δ₁ < ε/(3DJM)`, `δ₂ < ε/(3DJ)`, `δ₃ < ε/(3DJ)` (each at 90% of its bound),
    /// so that `DJ(Mδ₁ + δ₂ + δ₃) < ε`.
    pub fn for_target(eps: f64, d_out: usize, charts: usize, m: f64) -> Self {
        let share = 0.9 * eps / (3.0 * d_out as f64 * charts as f64);
        GeneratorTolerances {
            delta1: share / m,
            delta2: share,
            delta3: share,
        }
    }

    /// `DJ(Mδ₁ + δ₂ + δ₃)`, the L¹ budget of the glued network.
    pub fn l1_budget(&self, d_out: usize, charts: usize, m: f64) -> f64 {
        (d_out * charts) as f64 * (m * self.delta1 + self.delta2 + self.delta3)
    }
}

/// Range used for the selector indicators.
fn selector_range(m: f64) -> f64 {
    m.max(2.0)
}

/// Builds the glued network `(0,1)^{d+1} → R^D`.
///
/// `chart_nets[j][k]` is chart `j`'s network for output coordinate `k`; all
/// share the same input dimension `d`. Thresholds must satisfy
/// `0 = π₀ < π₁ < … < π_J = 1`. Chart nets are assumed bounded by `M` in
/// absolute value, and `M >= 1`.
pub fn assemble_generator(
    chart_nets: &[Vec<ReluNetwork>],
    thresholds: &[f64],
    tol: GeneratorTolerances,
    d_out: usize,
    m: f64,
) -> Result<ReluNetwork> {
    let charts = chart_nets.len();
    if charts == 0 || thresholds.len() != charts + 1 {
        return Err(Error::Parameter(format!(
            "{charts} charts need {} thresholds, got {}",
            charts + 1,
            thresholds.len()
        )));
    }
    if thresholds[0] != 0.0
        || thresholds[charts] != 1.0
        || thresholds.windows(2).any(|w| !(w[0] < w[1]))
    {
        return Err(Error::Parameter(
            "thresholds must increase strictly from 0 to 1".into(),
        ));
    }
    if !(m >= 1.0 && m.is_finite()) {
        return Err(Error::Parameter(format!(
            "chart range M must be at least 1, got {m}"
        )));
    }
    if chart_nets.iter().any(|row| row.len() != d_out) {
        return Err(Error::Parameter(format!(
            "every chart needs {d_out} coordinate networks"
        )));
    }
    let d = chart_nets[0][0].input_dim();
    if chart_nets
        .iter()
        .flatten()
        .any(|n| n.input_dim() != d || n.output_dim() != 1)
    {
        return Err(Error::Parameter(
            "chart networks must all map R^d to R".into(),
        ));
    }
    let min_gap = thresholds
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if !(tol.delta1 < min_gap / 2.0) {
        return Err(Error::Parameter(format!(
            "selector ramp {} must be below half the narrowest chart interval {}",
            tol.delta1, min_gap
        )));
    }
    let inputs = d + 1;
    let rest: Vec<usize> = (1..inputs).collect();

    let mut parts = Vec::with_capacity(charts * (d_out + 1));
    for j in 0..charts {
        let sel = build_indicator(
            thresholds[j],
            thresholds[j + 1],
            tol.delta1,
            selector_range(m),
        )?;
        parts.push(sel.with_input_map(inputs, &[0])?);
    }
    for row in chart_nets {
        for net in row {
            parts.push(net.with_input_map(inputs, &rest)?);
        }
    }
    let depth = parts.iter().map(ReluNetwork::depth).max().unwrap().max(2);
    let parts = parts
        .iter()
        .map(|p| p.pad_to_depth(depth))
        .collect::<Result<Vec<_>>>()?;
    let routed = ReluNetwork::parallel(&parts, true)?;

    // routed outputs: selectors 0..J, then chart j coordinate k at J + j·D + k
    let gadget = build_times(m, tol.delta2)?;
    let width = charts * (d_out + 1);
    let mut gates = Vec::with_capacity(charts * d_out);
    for j in 0..charts {
        for k in 0..d_out {
            gates.push(gadget.with_input_map(width, &[j, charts + j * d_out + k])?);
        }
    }
    let gates = ReluNetwork::parallel(&gates, true)?;
    let sums = (0..charts)
        .flat_map(|j| (0..d_out).map(move |k| (k, j * d_out + k, 1.0)))
        .collect();
    let sum = ReluNetwork::new(vec![Layer::from_entries(
        d_out,
        charts * d_out,
        sums,
        vec![0.0; d_out],
    )?])?;
    ReluNetwork::compose(&ReluNetwork::compose(&routed, &gates)?, &sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(d: usize, c: f64) -> ReluNetwork {
        // depth-2 constant so chart nets look like ordinary networks
        let l1 = Layer::from_entries(1, d, vec![], vec![0.0]).unwrap();
        let l2 = Layer::from_entries(1, 1, vec![], vec![c]).unwrap();
        ReluNetwork::new(vec![l1, l2]).unwrap()
    }

    #[test]
    fn selects_chart_by_first_coordinate() {
        let nets = vec![
            vec![constant(1, 0.5)],
            vec![constant(1, -0.75)],
            vec![constant(1, 0.25)],
        ];
        let tol = GeneratorTolerances::for_target(0.1, 1, 3, 1.0);
        let g = assemble_generator(&nets, &[0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0], tol, 1, 1.0).unwrap();
        for (x1, want) in [(0.1, 0.5), (0.5, -0.75), (0.9, 0.25)] {
            let v = g.evaluate(&[x1, 0.3]).unwrap()[0];
            assert!((v - want).abs() <= tol.delta2, "{x1}: {v}");
        }
    }

    #[test]
    fn rejects_bad_thresholds() {
        let nets = vec![vec![constant(1, 0.5)], vec![constant(1, 0.5)]];
        let tol = GeneratorTolerances::for_target(0.1, 1, 2, 1.0);
        assert!(assemble_generator(&nets, &[0.0, 0.7, 0.6], tol, 1, 1.0).is_err());
        assert!(assemble_generator(&nets, &[0.1, 0.5, 1.0], tol, 1, 1.0).is_err());
    }
}
