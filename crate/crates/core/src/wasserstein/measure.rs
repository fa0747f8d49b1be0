use crate::error::{Error, Result};

/// Finite point cloud in R^D carrying uniform weights 1/n.
///
/// Points are stored row-major in a flat buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    dim: usize,
    coords: Vec<f64>,
}

impl EmpiricalMeasure {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter(
                "empirical measure needs dimension >= 1".into(),
            ));
        }
        if coords.is_empty() || coords.len() % dim != 0 {
            return Err(Error::Parameter(format!(
                "coordinate buffer of length {} is not a non-empty multiple of dimension {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parameter(
                "empirical measure points must be finite".into(),
            ));
        }
        Ok(EmpiricalMeasure { dim, coords })
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let dim = points.first().map(|p| p.as_ref().len()).unwrap_or(0);
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::InputShape {
                    expected: dim,
                    got: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        Self::new(dim, coords)
    }

    /// One-dimensional cloud from scalar samples.
    pub fn from_scalars(xs: &[f64]) -> Result<Self> {
        Self::new(1, xs.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Applies `f` to every point, producing a cloud of dimension `out_dim`.
    pub fn map<F: FnMut(&[f64]) -> Vec<f64>>(&self, out_dim: usize, mut f: F) -> Result<Self> {
        let mut coords = Vec::with_capacity(self.len() * out_dim);
        for p in self.points() {
            let q = f(p);
            if q.len() != out_dim {
                return Err(Error::InputShape {
                    expected: out_dim,
                    got: q.len(),
                });
            }
            coords.extend(q);
        }
        Self::new(out_dim, coords)
    }

    /// Selects points by index (repeats allowed).
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        EmpiricalMeasure {
            dim: self.dim,
            coords,
        }
    }

    /// Each point repeated `times` times; the measure is unchanged.
    pub fn replicate(&self, times: usize) -> Self {
        let idx: Vec<usize> = (0..self.len())
            .flat_map(|i| std::iter::repeat_n(i, times))
            .collect();
        self.select(&idx)
    }
}
