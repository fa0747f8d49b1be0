//! Approximate indicators of intervals and axis-aligned cubes.

use crate::error::{Error, Result};
use crate::relu_net::{Layer, ReluNetwork};

use super::times::build_times_d;

/// Axis-aligned open cube `Π (lower_i, upper_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cube {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Cube {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::Parameter(
                "cube bounds must be nonempty and of equal length".into(),
            ));
        }
        if lower.iter().zip(&upper).any(|(a, b)| !(a < b)) {
            return Err(Error::Parameter(
                "cube needs lower < upper on every axis".into(),
            ));
        }
        Ok(Cube { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn min_side(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| b - a)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| b - a)
            .product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (a, b))| a < v && v < b)
    }
}

/// Number of `M`-bounded scalings realizing the `1/eps` prefactor.
pub fn indicator_chain_len(eps: f64, m: f64) -> usize {
    ((1.0 / eps).ln() / m.ln()).ceil().max(1.0) as usize
}

/// Trapezoid equal to 1 on `[a, b]`, ramping linearly to 0 on `(a−eps, a)` and
/// `(b, b+eps)`; its L¹ distance to `𝟙_{(a,b)}` is exactly `eps`.
///
/// Four first-layer ReLUs at the kinks, then `1/eps` applied as one factor
/// `R = 1/(eps M^{c−1}) ≤ M` followed by `c−1` factors of `M`.
pub fn build_indicator(a: f64, b: f64, eps: f64, m: f64) -> Result<ReluNetwork> {
    if !(m > 1.0 && m.is_finite()) {
        return Err(Error::Parameter(format!(
            "indicator range needs M > 1, got {m}"
        )));
    }
    if !(a < b) || a < -m || b > m {
        return Err(Error::Parameter(format!(
            "interval [{a}, {b}] must be nonempty and inside [-{m}, {m}]"
        )));
    }
    if !(eps > 0.0 && eps < (b - a) / 2.0) {
        return Err(Error::Parameter(format!(
            "need 0 < eps < (b-a)/2 = {}, got {eps}",
            (b - a) / 2.0
        )));
    }
    let c = indicator_chain_len(eps, m);
    let r = 1.0 / (eps * m.powi(c as i32 - 1));
    let kinks = vec![(0, 0, 1.0), (1, 0, 1.0), (2, 0, 1.0), (3, 0, 1.0)];
    let mut layers = vec![Layer::from_entries(
        4,
        1,
        kinks,
        vec![-(a - eps), -a, -b, -(b + eps)],
    )?];
    let ramp = vec![(0, 0, r), (0, 1, -r), (0, 2, -r), (0, 3, r)];
    layers.push(Layer::from_entries(1, 4, ramp, vec![0.0])?);
    for _ in 1..c {
        layers.push(Layer::from_entries(1, 1, vec![(0, 0, m)], vec![0.0])?);
    }
    ReluNetwork::new(layers)
}

/// Internal tolerances of the cube indicator: ramp width `δ` and product
/// tolerance `η`.
pub fn cube_indicator_tolerances(d: usize, eps: f64, m: f64) -> (f64, f64) {
    if d == 1 {
        return (eps / 4.0, 0.0);
    }
    let delta = eps / (4.0 * (3.0 * m).powi(d as i32 - 1));
    let eta = eps / (2f64.powi(d as i32 + 1) * m.powi(d as i32));
    (delta, eta)
}

/// Product of per-axis trapezoids, L¹-close to `𝟙_cube` on `[-M, M]^d`.
pub fn build_cube_indicator(cube: &Cube, eps: f64, m: f64) -> Result<ReluNetwork> {
    let d = cube.dim();
    if !(m > 1.0 && m.is_finite()) {
        return Err(Error::Parameter(format!(
            "cube indicator needs M > 1, got {m}"
        )));
    }
    // the ramps only need δ < side/2; eps may reach min(side/2, 1) itself
    let limit = (cube.min_side() / 2.0).min(1.0);
    if !(eps > 0.0 && eps <= limit * (1.0 + 1e-12)) {
        return Err(Error::Parameter(format!(
            "need 0 < eps <= min(side/2, 1) = {}, got {eps}",
            limit
        )));
    }
    let (delta, eta) = cube_indicator_tolerances(d, eps, m);
    let ramps = (0..d)
        .map(|i| build_indicator(cube.lower[i], cube.upper[i], delta, m)?.with_input_map(d, &[i]))
        .collect::<Result<Vec<_>>>()?;
    if d == 1 {
        return Ok(ramps.into_iter().next().unwrap());
    }
    let ramps = ReluNetwork::parallel(&ramps, true)?;
    ReluNetwork::compose(&ramps, &build_times_d(d, 1.0, eta)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_shape() {
        let net = build_indicator(0.25, 0.75, 0.1, 2.0).unwrap();
        let at = |x: f64| net.evaluate(&[x]).unwrap()[0];
        assert!((at(0.5) - 1.0).abs() < 1e-12);
        assert!(at(0.15).abs() < 1e-12);
        assert!(at(0.85).abs() < 1e-12);
        assert!((at(0.2) - 0.5).abs() < 1e-12);
        assert_eq!(net.metrics().width, 4);
        assert_eq!(net.depth(), 1 + indicator_chain_len(0.1, 2.0));
    }

    #[test]
    fn chain_keeps_weights_bounded() {
        let net = build_indicator(-0.5, 0.5, 1e-6, 2.0).unwrap();
        assert!(net.metrics().weight_bound <= 2.0);
        assert!((net.evaluate(&[0.0]).unwrap()[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn indicator_rejects_wide_ramp() {
        assert!(build_indicator(0.25, 0.75, 0.25, 2.0).is_err());
        assert!(build_indicator(0.25, 0.75, 0.1, 1.0).is_err());
    }

    #[test]
    fn cube_indicator_interior_and_exterior() {
        let cube = Cube::new(vec![0.2, 0.2], vec![0.6, 0.6]).unwrap();
        let net = build_cube_indicator(&cube, 0.2, 1.5).unwrap();
        let (_, eta) = cube_indicator_tolerances(2, 0.2, 1.5);
        assert!((net.evaluate(&[0.4, 0.4]).unwrap()[0] - 1.0).abs() <= eta);
        assert!(net.evaluate(&[-1.0, -1.0]).unwrap()[0].abs() <= eta);
        let m = net.metrics();
        assert!(m.width <= 8);
        assert!(m.weight_bound <= 2.0);
    }
}
