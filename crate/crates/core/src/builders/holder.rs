//! Piecewise-constant and Hölder-function approximation on `[0, 1]^d`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::relu_net::{Layer, ReluNetwork};

use super::indicator::{build_cube_indicator, Cube};

pub type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A function on `[0, 1]^d` with its Hölder data. `holder_norm` must dominate
/// the seminorm `sup |f(x) − f(y)| / ‖x − y‖^α`.
#[derive(Clone)]
pub struct HolderFunction {
    pub evaluator: Evaluator,
    pub dim: usize,
    pub alpha: f64,
    pub holder_norm: f64,
    pub sup_bound: f64,
}

impl fmt::Debug for HolderFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HolderFunction")
            .field("dim", &self.dim)
            .field("alpha", &self.alpha)
            .field("holder_norm", &self.holder_norm)
            .field("sup_bound", &self.sup_bound)
            .finish()
    }
}

impl HolderFunction {
    pub fn new(
        dim: usize,
        alpha: f64,
        holder_norm: f64,
        sup_bound: f64,
        evaluator: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("Hölder function needs dim >= 1".into()));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Parameter(format!(
                "Hölder exponent must lie in (0, 1], got {alpha}"
            )));
        }
        if !(holder_norm > 0.0 && sup_bound > 0.0) {
            return Err(Error::Parameter(
                "Hölder norm and sup bound must be positive".into(),
            ));
        }
        Ok(HolderFunction {
            evaluator: Arc::new(evaluator),
            dim,
            alpha,
            holder_norm,
            sup_bound,
        })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.evaluator)(x)
    }
}

/// The `n^d` open cubes `Π ((k_i − 1)/n, k_i/n)` of side `1/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubePartition {
    pub n: usize,
    pub d: usize,
}

impl CubePartition {
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Multi-index of cell `k`, first axis fastest.
    pub fn multi_index(&self, mut k: usize) -> Vec<usize> {
        (0..self.d)
            .map(|_| {
                let i = k % self.n;
                k /= self.n;
                i
            })
            .collect()
    }

    pub fn cell(&self, k: usize) -> Cube {
        let h = 1.0 / self.n as f64;
        let idx = self.multi_index(k);
        Cube {
            lower: idx.iter().map(|&i| i as f64 * h).collect(),
            upper: idx.iter().map(|&i| (i + 1) as f64 * h).collect(),
        }
    }

    /// Cell holding `x` under the half-open convention `[k/n, (k+1)/n)`,
    /// with the right edge of `[0, 1]` folded into the last cell.
    pub fn locate(&self, x: &[f64]) -> usize {
        let mut k = 0;
        for i in (0..self.d).rev() {
            let j = ((x[i] * self.n as f64).floor().max(0.0) as usize).min(self.n - 1);
            k = k * self.n + j;
        }
        k
    }
}

pub fn uniform_cube_partition(n: usize, d: usize) -> Result<CubePartition> {
    if n == 0 || d == 0 {
        return Err(Error::Parameter("partition needs n >= 1 and d >= 1".into()));
    }
    Ok(CubePartition { n, d })
}

/// `f^n = Σ β_k 𝟙_{Q_k}` with `β_k` the cell averages of `f`.
#[derive(Debug, Clone)]
pub struct PiecewiseConstant {
    pub partition: CubePartition,
    pub betas: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.betas[self.partition.locate(x)]
    }
}

/// Cell averages by tensor-grid midpoint quadrature with `quad_points` nodes per axis.
pub fn piecewise_constant_approx(
    f: &HolderFunction,
    n: usize,
    quad_points: usize,
) -> Result<PiecewiseConstant> {
    let partition = uniform_cube_partition(n, f.dim)?;
    if quad_points == 0 {
        return Err(Error::Parameter(
            "quadrature needs at least one node per axis".into(),
        ));
    }
    let d = f.dim;
    let h = 1.0 / n as f64;
    let nodes = quad_points.pow(d as u32);
    let mut x = vec![0.0; d];
    let betas = (0..partition.len())
        .map(|k| {
            let lo = partition.cell(k).lower;
            let mut sum = 0.0;
            for q in 0..nodes {
                let mut rest = q;
                for i in 0..d {
                    let j = rest % quad_points;
                    rest /= quad_points;
                    x[i] = lo[i] + h * (j as f64 + 0.5) / quad_points as f64;
                }
                sum += f.eval(&x);
            }
            sum / nodes as f64
        })
        .collect();
    Ok(PiecewiseConstant { partition, betas })
}

/// Per-cell indicator tolerance of the piecewise network.
pub fn piecewise_cell_tolerance(partition: &CubePartition, eps: f64, m: f64) -> f64 {
    eps / (m * partition.len() as f64)
}

/// Network L¹-close to `Σ β_k 𝟙_{Q_k}` on `[-M, M]^d`.
///
/// All cube indicators read the shared input in parallel; one extra ReLU
/// layer clips their outputs at zero (which can only shrink the error against
/// a nonnegative target) and keeps the `β` weights out of the merged layers.
pub fn build_piecewise_net(
    partition: &CubePartition,
    betas: &[f64],
    eps: f64,
    m: f64,
) -> Result<ReluNetwork> {
    if betas.len() != partition.len() {
        return Err(Error::InputShape {
            expected: partition.len(),
            got: betas.len(),
        });
    }
    if let Some(b) = betas.iter().find(|b| !(b.abs() <= m)) {
        return Err(Error::Parameter(format!(
            "coefficient {b} exceeds the range M = {m}"
        )));
    }
    let d = partition.d;
    let cells: Vec<usize> = (0..betas.len()).filter(|&k| betas[k] != 0.0).collect();
    if cells.is_empty() {
        return ReluNetwork::affine(1, d, &vec![0.0; d], vec![0.0]);
    }
    let eps_cell = piecewise_cell_tolerance(partition, eps, m);
    let indicators = cells
        .iter()
        .map(|&k| build_cube_indicator(&partition.cell(k), eps_cell, m))
        .collect::<Result<Vec<_>>>()?;
    let stacked = ReluNetwork::parallel(&indicators, true)?;
    let count = cells.len();
    let clip = Layer::from_entries(
        count,
        count,
        (0..count).map(|i| (i, i, 1.0)).collect(),
        vec![0.0; count],
    )?;
    let weights = cells
        .iter()
        .enumerate()
        .map(|(i, &k)| (0, i, betas[k]))
        .collect();
    let head = ReluNetwork::new(vec![
        clip,
        Layer::from_entries(1, count, weights, vec![0.0])?,
    ])?;
    ReluNetwork::compose(&stacked, &head)
}

/// Cells per axis making the piecewise-constant error at most `eps/2`:
/// `n = ⌈(2‖f‖/eps)^{1/α} √d⌉`.
pub fn holder_cells_per_axis(f: &HolderFunction, eps: f64) -> usize {
    ((2.0 * f.holder_norm / eps).powf(1.0 / f.alpha) * (f.dim as f64).sqrt()).ceil() as usize
}

/// Range used for the coefficients and indicator chains: `max(2, sup_bound)`.
pub fn holder_range(f: &HolderFunction) -> f64 {
    f.sup_bound.max(2.0)
}

/// Quadrature nodes per axis for the cell averages.
pub const HOLDER_QUAD_POINTS: usize = 8;

/// Network with `‖f − Φ‖_{L¹([0,1]^d)} < eps`: cell averages on the grid
/// from [`holder_cells_per_axis`], realized by [`build_piecewise_net`] at `eps/2`.
pub fn build_holder_approx(f: &HolderFunction, eps: f64) -> Result<ReluNetwork> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(format!("need 0 < eps < 1, got {eps}")));
    }
    let n = holder_cells_per_axis(f, eps);
    let cells = (n as f64).powi(f.dim as i32);
    if cells > 1e6 {
        return Err(Error::SizeCap {
            n: cells as usize,
            cap: 1_000_000,
        });
    }
    let pc = piecewise_constant_approx(f, n, HOLDER_QUAD_POINTS)?;
    build_piecewise_net(&pc.partition, &pc.betas, eps / 2.0, holder_range(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_cells() {
        let p = uniform_cube_partition(2, 1).unwrap();
        assert_eq!(
            p.cell(0),
            Cube {
                lower: vec![0.0],
                upper: vec![0.5]
            }
        );
        assert_eq!(
            p.cell(1),
            Cube {
                lower: vec![0.5],
                upper: vec![1.0]
            }
        );
        let p = uniform_cube_partition(3, 2).unwrap();
        assert_eq!(p.len(), 9);
        for k in 0..9 {
            assert!((p.cell(k).volume() - 1.0 / 9.0).abs() < 1e-15);
            let c = p.cell(k);
            let mid: Vec<f64> = c
                .lower
                .iter()
                .zip(&c.upper)
                .map(|(a, b)| (a + b) / 2.0)
                .collect();
            assert_eq!(p.locate(&mid), k);
        }
        assert_eq!(p.locate(&[1.0, 1.0]), 8);
    }

    #[test]
    fn identity_cell_averages() {
        let f = HolderFunction::new(1, 1.0, 1.0, 1.0, |x| x[0]).unwrap();
        let pc = piecewise_constant_approx(&f, 2, 4).unwrap();
        assert!((pc.betas[0] - 0.25).abs() < 1e-15);
        assert!((pc.betas[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn zero_coefficients_give_zero_network() {
        let p = uniform_cube_partition(2, 1).unwrap();
        let net = build_piecewise_net(&p, &[0.0, 0.0], 0.1, 2.0).unwrap();
        assert_eq!(net.evaluate(&[0.3]).unwrap(), vec![0.0]);
        assert_eq!(net.metrics().weight_bound, 0.0);
    }

    #[test]
    fn coefficient_above_range_is_rejected() {
        let p = uniform_cube_partition(2, 1).unwrap();
        assert!(matches!(
            build_piecewise_net(&p, &[3.0, 0.0], 0.1, 2.0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn sqrt_cell_count() {
        let f = HolderFunction::new(1, 0.5, 2.0, 1.0, |x| x[0].sqrt()).unwrap();
        assert_eq!(holder_cells_per_axis(&f, 0.25), 256);
    }
}
