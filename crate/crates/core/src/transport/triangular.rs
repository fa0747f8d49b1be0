//! Knothe–Rosenblatt (triangular) maps from the unit square onto a tabulated
//! planar density.

use crate::error::{Error, Result};

/// Histogram cells per axis.
pub const TRIANGULAR_GRID: usize = 256;
/// Midpoint sub-samples per cell and axis when tabulating cell masses.
pub const TRIANGULAR_SUBSAMPLES: usize = 4;

/// `T(u₁, u₂) = (F₁⁻¹(u₁), F₂⁻¹(u₂ | v₁))` for the histogram of a density on
/// the square `[−half, half]²`. The histogram is piecewise constant, so the
/// marginal and conditional inverses are piecewise linear and `T` pushes the
/// uniform measure exactly onto the histogram density.
#[derive(Debug, Clone)]
pub struct TriangularMap {
    half: f64,
    n: usize,
    /// marginal CDF of the first coordinate over columns, length n+1
    col_cdf: Vec<f64>,
    /// per column, conditional CDF over rows, each length n+1
    row_cdf: Vec<Vec<f64>>,
}

impl TriangularMap {
    pub fn new(density: impl Fn(&[f64]) -> f64, half: f64, n: usize) -> Result<Self> {
        if !(half > 0.0) || n == 0 {
            return Err(Error::Parameter(
                "triangular map needs a positive half-width and grid".into(),
            ));
        }
        let h = 2.0 * half / n as f64;
        let s = TRIANGULAR_SUBSAMPLES;
        let mut masses = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = 0.0;
                for i in 0..s {
                    for j in 0..s {
                        let v = [
                            -half + h * (a as f64 + (i as f64 + 0.5) / s as f64),
                            -half + h * (b as f64 + (j as f64 + 0.5) / s as f64),
                        ];
                        let q = density(&v);
                        if !(q >= 0.0 && q.is_finite()) {
                            return Err(Error::Parameter(format!(
                                "density is negative or not finite at {v:?}"
                            )));
                        }
                        acc += q;
                    }
                }
                masses[a * n + b] = acc * h * h / (s * s) as f64;
            }
        }
        let total: f64 = masses.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Parameter("density has no mass on the grid".into()));
        }
        let mut col_cdf = vec![0.0; n + 1];
        let mut row_cdf = Vec::with_capacity(n);
        for a in 0..n {
            let col = &masses[a * n..(a + 1) * n];
            let col_mass: f64 = col.iter().sum();
            col_cdf[a + 1] = col_cdf[a] + col_mass / total;
            let mut cdf = vec![0.0; n + 1];
            for b in 0..n {
                cdf[b + 1] = cdf[b]
                    + if col_mass > 0.0 {
                        col[b] / col_mass
                    } else {
                        0.0
                    };
            }
            row_cdf.push(cdf);
        }
        col_cdf[n] = 1.0;
        Ok(TriangularMap {
            half,
            n,
            col_cdf,
            row_cdf,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half
    }

    /// Maps `(u₁, u₂) ∈ [0, 1]²` into the square; the first output depends on `u₁` only.
    pub fn eval(&self, u: &[f64]) -> [f64; 2] {
        let (a, s1) = invert_piecewise_constant(&self.col_cdf, u[0]);
        let (b, s2) = invert_piecewise_constant(&self.row_cdf[a], u[1]);
        let h = 2.0 * self.half / self.n as f64;
        [
            -self.half + h * (a as f64 + s1),
            -self.half + h * (b as f64 + s2),
        ]
    }

    /// First output coordinate alone.
    pub fn eval_first(&self, u1: f64) -> f64 {
        let (a, s1) = invert_piecewise_constant(&self.col_cdf, u1);
        -self.half + 2.0 * self.half / self.n as f64 * (a as f64 + s1)
    }
}

/// Cell index and in-cell fraction of `u` under a piecewise-uniform law with
/// cumulative table `cdf`; zero-mass cells are never returned.
pub(crate) fn invert_piecewise_constant(cdf: &[f64], u: f64) -> (usize, f64) {
    let cells = cdf.len() - 1;
    let u = u.clamp(0.0, 1.0);
    let mut i = cdf
        .partition_point(|&c| c < u)
        .saturating_sub(1)
        .min(cells - 1);
    while i + 1 < cells && cdf[i + 1] <= cdf[i] {
        i += 1;
    }
    while i > 0 && cdf[i + 1] <= cdf[i] {
        i -= 1;
    }
    let mass = cdf[i + 1] - cdf[i];
    let frac = if mass > 0.0 {
        ((u - cdf[i]) / mass).clamp(0.0, 1.0)
    } else {
        0.5
    };
    (i, frac)
}
