//! Monotone quantile maps on an interval.

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

/// Knots used by the quantile tables.
pub const QUANTILE_KNOTS: usize = 4096;

/// Allowed deviation of the tabulated total mass from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// `T = F⁻¹` for a density on `(lo, hi)`.
///
/// Cell masses come from adaptive quadrature. Inside a cell the density is
/// modeled as linear between its one-sided endpoint values, rescaled to the
/// exact cell mass, and the cell CDF (a quadratic) is inverted in closed form.
#[derive(Debug, Clone)]
pub struct QuantileMap {
    lo: f64,
    h: f64,
    cdf: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl QuantileMap {
    pub fn new(density: impl Fn(f64) -> f64, lo: f64, hi: f64, knots: usize) -> Result<Self> {
        if !(lo < hi) || knots < 2 {
            return Err(Error::Parameter(format!(
                "quantile map needs lo < hi and >= 2 knots, got ({lo}, {hi}), {knots}"
            )));
        }
        let cells = knots - 1;
        let h = (hi - lo) / cells as f64;
        let inset = 1e-9 * h;
        let mut cdf = Vec::with_capacity(knots);
        let mut left = Vec::with_capacity(cells);
        let mut right = Vec::with_capacity(cells);
        cdf.push(0.0);
        let mut f = |t: f64| density(t);
        for i in 0..cells {
            let a = lo + i as f64 * h;
            let b = if i + 1 == cells { hi } else { a + h };
            let mass = adaptive_simpson(&mut f, a, b, 1e-14, 30);
            if !(mass >= -1e-15) || !mass.is_finite() {
                return Err(Error::Parameter(format!(
                    "density is negative or not finite on ({a}, {b})"
                )));
            }
            cdf.push(cdf[i] + mass.max(0.0));
            left.push(f(a + inset).max(0.0));
            right.push(f(b - inset).max(0.0));
        }
        let total = cdf[cells];
        if !((total - 1.0).abs() <= NORMALIZATION_TOLERANCE) {
            return Err(Error::Parameter(format!(
                "density integrates to {total}, not 1"
            )));
        }
        for c in &mut cdf {
            *c /= total;
        }
        Ok(QuantileMap {
            lo,
            h,
            cdf,
            left,
            right,
        })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.lo + self.h * (self.cdf.len() - 1) as f64)
    }

    /// Tabulated CDF at the knots.
    pub fn knot_cdf(&self) -> &[f64] {
        &self.cdf
    }

    pub fn knot(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.h
    }

    /// `F⁻¹(u)` for `u ∈ [0, 1]`.
    pub fn eval(&self, u: f64) -> f64 {
        let (i, frac) = super::triangular::invert_piecewise_constant(&self.cdf, u);
        self.lo + self.h * (i as f64 + invert_linear_cell(self.left[i], self.right[i], frac))
    }
}

/// Solves `a s + (b − a) s²/2 = u (a + b)/2` for `s ∈ [0, 1]`, the fraction
/// of a cell whose linear density runs from `a` to `b`.
pub(crate) fn invert_linear_cell(a: f64, b: f64, u: f64) -> f64 {
    let total = 0.5 * (a + b);
    if !(total > 0.0) {
        return u;
    }
    let c = u * total;
    let disc = (a * a + 2.0 * (b - a) * c).max(0.0);
    let denom = a + disc.sqrt();
    if denom > 0.0 {
        (2.0 * c / denom).clamp(0.0, 1.0)
    } else {
        u
    }
}
