//! Closed-form charted manifolds: circle, sphere, flat torus, and isometric
//! embeddings of these into larger ambient spaces.
//!
//! Every manifold is a base manifold in its natural ambient space
//! (`R²`, `R³`, `R^{2d}`) optionally followed by a linear isometry `Q` with
//! orthonormal columns. Chart coordinates are intrinsic, so embedding never
//! changes tangent vectors, Jacobians or geodesic distances.

mod density;
mod spec;

pub use density::{DensitySpec, ManifoldDensity};

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, Rng};
use crate::wasserstein::EmpiricalMeasure;

/// Ambient distance beyond which a point counts as off the manifold.
pub const ON_MANIFOLD_TOLERANCE: f64 = 1e-6;

/// Samples used by the cover audit.
pub const COVER_AUDIT_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum ManifoldKind {
    Circle {
        radius: f64,
    },
    Sphere {
        radius: f64,
    },
    FlatTorus {
        dim: usize,
        radius: f64,
    },
    EmbeddedRotation {
        inner: Box<ManifoldKind>,
        ambient_dim: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Base {
    Circle(f64),
    Sphere(f64),
    Torus(usize, f64),
}

impl Base {
    fn radius(self) -> f64 {
        match self {
            Base::Circle(r) | Base::Sphere(r) | Base::Torus(_, r) => r,
        }
    }

    fn intrinsic_dim(self) -> usize {
        match self {
            Base::Circle(_) => 1,
            Base::Sphere(_) => 2,
            Base::Torus(d, _) => d,
        }
    }

    fn ambient_dim(self) -> usize {
        match self {
            Base::Circle(_) => 2,
            Base::Sphere(_) => 3,
            Base::Torus(d, _) => 2 * d,
        }
    }

    fn volume(self) -> f64 {
        match self {
            Base::Circle(r) => 2.0 * PI * r,
            Base::Sphere(r) => 4.0 * PI * r * r,
            Base::Torus(d, r) => (2.0 * PI * r).powi(d as i32),
        }
    }

    fn distance_to_manifold(self, x: &[f64]) -> f64 {
        let r = self.radius();
        match self {
            Base::Circle(_) | Base::Sphere(_) => (norm(x) - r).abs(),
            Base::Torus(d, _) => (0..d)
                .map(|i| (x[2 * i].hypot(x[2 * i + 1]) - r).powi(2))
                .sum::<f64>()
                .sqrt(),
        }
    }
}

/// Orthonormal-column map `R^{D₀} → R^D`, row-major `D × D₀`.
#[derive(Debug, Clone, PartialEq)]
struct Embedding {
    rows: usize,
    cols: usize,
    matrix: Vec<f64>,
}

impl Embedding {
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| dot(&self.matrix[i * self.cols..(i + 1) * self.cols], x))
            .collect()
    }

    fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (i, yi) in y.iter().enumerate() {
            for (o, q) in out
                .iter_mut()
                .zip(&self.matrix[i * self.cols..(i + 1) * self.cols])
            {
                *o += q * yi;
            }
        }
        out
    }
}

/// Haar-distributed orthogonal `n × n` matrix (row-major) from the QR
/// factorization of a Gaussian matrix with the sign of `diag(R)` fixed.
pub fn haar_orthogonal(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    (0..n * n).map(|k| q[(k / n, k % n)]).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartedManifold {
    kind: ManifoldKind,
    base: Base,
    embedding: Option<Embedding>,
    centers: Vec<Vec<f64>>,
}

/// Per-axis grid size of the torus cover: the smallest `k > 2√d`.
pub fn torus_grid_size(d: usize) -> usize {
    (2.0 * (d as f64).sqrt()).floor() as usize + 1
}

impl ChartedManifold {
    pub fn circle(radius: f64) -> Result<Self> {
        Self::from_base(Base::Circle(check_radius(radius)?))
    }

    pub fn sphere(radius: f64) -> Result<Self> {
        Self::from_base(Base::Sphere(check_radius(radius)?))
    }

    pub fn flat_torus(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter(
                "torus dimension must be at least 1".into(),
            ));
        }
        Self::from_base(Base::Torus(dim, check_radius(radius)?))
    }

    fn from_base(base: Base) -> Result<Self> {
        let kind = match base {
            Base::Circle(radius) => ManifoldKind::Circle { radius },
            Base::Sphere(radius) => ManifoldKind::Sphere { radius },
            Base::Torus(dim, radius) => ManifoldKind::FlatTorus { dim, radius },
        };
        let mut m = ChartedManifold {
            kind,
            base,
            embedding: None,
            centers: Vec::new(),
        };
        m.centers = (0..m.chart_count()).map(|j| m.base_center(j)).collect();
        Ok(m)
    }

    pub fn kind(&self) -> &ManifoldKind {
        &self.kind
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.base.intrinsic_dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.embedding
            .as_ref()
            .map_or(self.base.ambient_dim(), |e| e.rows)
    }

    /// Dimension of the unembedded base manifold's ambient space.
    pub fn base_ambient_dim(&self) -> usize {
        self.base.ambient_dim()
    }

    pub fn radius(&self) -> f64 {
        self.base.radius()
    }

    pub fn reach(&self) -> f64 {
        self.base.radius()
    }

    /// `‖x‖_∞` bound over the manifold.
    pub fn bound(&self) -> f64 {
        let r = self.base.radius();
        match (self.embedding.is_some(), self.base) {
            (false, _) => r,
            (true, Base::Torus(d, _)) => r * (d as f64).sqrt(),
            (true, _) => r,
        }
    }

    pub fn chart_radius(&self) -> f64 {
        PI * self.reach() / 2.0
    }

    pub fn injectivity_radius(&self) -> f64 {
        PI * self.reach()
    }

    pub fn volume(&self) -> f64 {
        self.base.volume()
    }

    pub fn chart_count(&self) -> usize {
        match self.base {
            Base::Circle(_) => 3,
            Base::Sphere(_) => 6,
            Base::Torus(d, _) => torus_grid_size(d).pow(d as u32),
        }
    }

    pub fn chart_center(&self, j: usize) -> &[f64] {
        &self.centers[j]
    }

    pub fn chart_centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    fn check_chart(&self, j: usize) -> Result<()> {
        if j >= self.chart_count() {
            return Err(Error::Parameter(format!(
                "chart {j} out of range 0..{}",
                self.chart_count()
            )));
        }
        Ok(())
    }

    fn check_tangent(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.intrinsic_dim() {
            return Err(Error::InputShape {
                expected: self.intrinsic_dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    fn check_ambient(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.ambient_dim() {
            return Err(Error::InputShape {
                expected: self.ambient_dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Per-axis angles of torus chart `j`, first axis fastest.
    fn torus_center_angles(&self, j: usize) -> Vec<f64> {
        let Base::Torus(d, _) = self.base else {
            unreachable!()
        };
        let k = torus_grid_size(d);
        let mut rest = j;
        (0..d)
            .map(|_| {
                let i = rest % k;
                rest /= k;
                2.0 * PI * i as f64 / k as f64
            })
            .collect()
    }

    fn circle_center_angle(j: usize) -> f64 {
        2.0 * PI * j as f64 / 3.0
    }

    /// Sphere chart `j` sits at `sign · R e_axis` with tangent frame
    /// `(e_{axis+1}, e_{axis+2})` (indices mod 3).
    fn sphere_axis(j: usize) -> (usize, f64) {
        (j / 2, if j % 2 == 0 { 1.0 } else { -1.0 })
    }

    fn base_center(&self, j: usize) -> Vec<f64> {
        let zero = vec![0.0; self.intrinsic_dim()];
        let c = self.base_exp(j, &zero);
        self.embed(c)
    }

    fn embed(&self, x: Vec<f64>) -> Vec<f64> {
        match &self.embedding {
            None => x,
            Some(e) => e.apply(&x),
        }
    }

    /// Coordinates in the base manifold's own ambient space.
    pub fn base_coords(&self, x: &[f64]) -> Vec<f64> {
        match &self.embedding {
            None => x.to_vec(),
            Some(e) => e.apply_transpose(x),
        }
    }

    fn base_exp(&self, j: usize, v: &[f64]) -> Vec<f64> {
        let r = self.base.radius();
        match self.base {
            Base::Circle(_) => {
                let t = Self::circle_center_angle(j) + v[0] / r;
                vec![r * t.cos(), r * t.sin()]
            }
            Base::Sphere(_) => {
                let (axis, sign) = Self::sphere_axis(j);
                let len = norm(v);
                let t = len / r;
                let mut x = vec![0.0; 3];
                x[axis] = sign * r * t.cos();
                if len > 0.0 {
                    let s = r * t.sin() / len;
                    x[(axis + 1) % 3] = s * v[0];
                    x[(axis + 2) % 3] = s * v[1];
                }
                x
            }
            Base::Torus(d, _) => {
                let phi = self.torus_center_angles(j);
                let mut x = Vec::with_capacity(2 * d);
                for i in 0..d {
                    let t = phi[i] + v[i] / r;
                    x.push(r * t.cos());
                    x.push(r * t.sin());
                }
                x
            }
        }
    }

    fn base_log(&self, j: usize, x: &[f64]) -> Vec<f64> {
        let r = self.base.radius();
        match self.base {
            Base::Circle(_) => vec![r * wrap(x[1].atan2(x[0]) - Self::circle_center_angle(j))],
            Base::Sphere(_) => {
                let (axis, sign) = Self::sphere_axis(j);
                let u = [x[(axis + 1) % 3], x[(axis + 2) % 3]];
                let t = u[0].hypot(u[1]).atan2(sign * x[axis]);
                let s = u[0].hypot(u[1]);
                if s == 0.0 {
                    vec![0.0, 0.0]
                } else {
                    vec![r * t * u[0] / s, r * t * u[1] / s]
                }
            }
            Base::Torus(d, _) => {
                let phi = self.torus_center_angles(j);
                (0..d)
                    .map(|i| r * wrap(x[2 * i + 1].atan2(x[2 * i]) - phi[i]))
                    .collect()
            }
        }
    }

    /// Geodesic endpoint `exp_{c_j}(v)`; requires `‖v‖ < π τ`.
    pub fn exp_map(&self, j: usize, v: &[f64]) -> Result<Vec<f64>> {
        self.check_chart(j)?;
        self.check_tangent(v)?;
        if !(norm(v) < self.injectivity_radius()) {
            return Err(Error::Domain(format!(
                "tangent vector of norm {} exceeds the injectivity radius {}",
                norm(v),
                self.injectivity_radius()
            )));
        }
        if v.iter().all(|&t| t == 0.0) {
            return Ok(self.centers[j].clone());
        }
        Ok(self.embed(self.base_exp(j, v)))
    }

    /// Inverse of [`exp_map`](Self::exp_map) on chart `j`.
    pub fn log_map(&self, j: usize, x: &[f64]) -> Result<Vec<f64>> {
        self.check_chart(j)?;
        self.check_on_manifold(x)?;
        let v = self.base_log(j, &self.base_coords(x));
        // closed chart ball: the quarter-arc point of the unit circle sits exactly at radius π/2
        if !(norm(&v) <= self.chart_radius() * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!(
                "point at geodesic distance {} lies outside chart {j} of radius {}",
                norm(&v),
                self.chart_radius()
            )));
        }
        Ok(v)
    }

    /// Tangent coordinates of `x` in chart `j` without the chart-radius check.
    /// Only meaningful when `x` lies within the injectivity radius of `c_j`.
    pub fn chart_coords(&self, j: usize, x: &[f64]) -> Vec<f64> {
        self.base_log(j, &self.base_coords(x))
    }

    /// Ambient distance from `x` to the manifold.
    pub fn distance_to_manifold(&self, x: &[f64]) -> f64 {
        match &self.embedding {
            None => self.base.distance_to_manifold(x),
            Some(e) => {
                let p = e.apply_transpose(x);
                let back = e.apply(&p);
                let normal: f64 = x.iter().zip(&back).map(|(a, b)| (a - b) * (a - b)).sum();
                (normal + self.base.distance_to_manifold(&p).powi(2)).sqrt()
            }
        }
    }

    fn check_on_manifold(&self, x: &[f64]) -> Result<()> {
        self.check_ambient(x)?;
        let dist = self.distance_to_manifold(x);
        if !(dist <= ON_MANIFOLD_TOLERANCE) {
            return Err(Error::Domain(format!(
                "point lies {dist:e} off the manifold"
            )));
        }
        Ok(())
    }

    pub fn geodesic_distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_on_manifold(x)?;
        self.check_on_manifold(y)?;
        let (p, q) = (self.base_coords(x), self.base_coords(y));
        let r = self.base.radius();
        Ok(match self.base {
            Base::Circle(_) => r * wrap(q[1].atan2(q[0]) - p[1].atan2(p[0])).abs(),
            Base::Sphere(_) => {
                // atan2 of |p × q| and p·q is accurate at both small and near-antipodal angles
                let cross = [
                    p[1] * q[2] - p[2] * q[1],
                    p[2] * q[0] - p[0] * q[2],
                    p[0] * q[1] - p[1] * q[0],
                ];
                r * norm(&cross).atan2(dot(&p, &q))
            }
            Base::Torus(d, _) => {
                r * (0..d)
                    .map(|i| {
                        wrap(q[2 * i + 1].atan2(q[2 * i]) - p[2 * i + 1].atan2(p[2 * i])).powi(2)
                    })
                    .sum::<f64>()
                    .sqrt()
            }
        })
    }

    /// `√det g` of the exponential chart at `v`.
    pub fn volume_jacobian(&self, _j: usize, v: &[f64]) -> f64 {
        match self.base {
            Base::Sphere(r) => {
                let t = norm(v) / r;
                if t == 0.0 {
                    1.0
                } else {
                    t.sin() / t
                }
            }
            _ => 1.0,
        }
    }

    /// Charts whose open geodesic ball contains `x`.
    pub fn charts_containing(&self, x: &[f64]) -> Vec<usize> {
        let p = self.base_coords(x);
        let r = self.chart_radius();
        (0..self.chart_count())
            .filter(|&j| norm(&self.base_log(j, &p)) < r)
            .collect()
    }

    /// Overlap count `K(x)`.
    pub fn multiplicity(&self, x: &[f64]) -> usize {
        self.charts_containing(x).len()
    }

    /// The canonical cover (all charts at radius `π τ / 2`), audited on
    /// [`COVER_AUDIT_SAMPLES`] uniform samples.
    pub fn geodesic_ball_cover(&self) -> Result<Vec<usize>> {
        let mut rng = rng_from_seed(0x0c0e_2a11);
        let mut x = Vec::new();
        for _ in 0..COVER_AUDIT_SAMPLES {
            self.sample_uniform_point(&mut rng, &mut x);
            if self.multiplicity(&x) == 0 {
                return Err(Error::Coverage(format!(
                    "uniform sample {x:?} lies in no chart"
                )));
            }
        }
        Ok((0..self.chart_count()).collect())
    }

    /// One uniform (volume-measure) point, written into `out`.
    pub fn sample_uniform_point(&self, rng: &mut Rng, out: &mut Vec<f64>) {
        let r = self.base.radius();
        let mut x = Vec::with_capacity(self.base.ambient_dim());
        match self.base {
            Base::Circle(_) => {
                let t = rng.random::<f64>() * 2.0 * PI;
                x.extend([r * t.cos(), r * t.sin()]);
            }
            Base::Sphere(_) => loop {
                let g: [f64; 3] = [
                    StandardNormal.sample(rng),
                    StandardNormal.sample(rng),
                    StandardNormal.sample(rng),
                ];
                let n = norm(&g);
                if n > 1e-12 {
                    x.extend(g.iter().map(|v| r * v / n));
                    break;
                }
            },
            Base::Torus(d, _) => {
                for _ in 0..d {
                    let t = rng.random::<f64>() * 2.0 * PI;
                    x.extend([r * t.cos(), r * t.sin()]);
                }
            }
        }
        *out = self.embed(x);
    }

    pub fn sample_uniform(&self, seed: u64, n: usize) -> EmpiricalMeasure {
        let mut rng = rng_from_seed(seed);
        let mut coords = Vec::with_capacity(n * self.ambient_dim());
        let mut x = Vec::new();
        for _ in 0..n {
            self.sample_uniform_point(&mut rng, &mut x);
            coords.extend_from_slice(&x);
        }
        EmpiricalMeasure::new(self.ambient_dim(), coords).expect("samples are finite")
    }

    /// Isometric copy in `R^{D_target}`: zero-pad, then a seeded Haar rotation.
    pub fn ambient_embed(&self, target_dim: usize, seed: u64) -> Result<ChartedManifold> {
        let d0 = self.ambient_dim();
        if target_dim < d0 {
            return Err(Error::Parameter(format!(
                "cannot embed R^{d0} into R^{target_dim}"
            )));
        }
        let rot = haar_orthogonal(target_dim, seed);
        // rotation restricted to the first d0 coordinates, composed with any existing embedding
        let (base_cols, prior) = match &self.embedding {
            None => (d0, None),
            Some(e) => (e.cols, Some(e)),
        };
        let mut matrix = vec![0.0; target_dim * base_cols];
        for i in 0..target_dim {
            for c in 0..base_cols {
                matrix[i * base_cols + c] = match prior {
                    None => rot[i * target_dim + c],
                    Some(e) => (0..d0)
                        .map(|k| rot[i * target_dim + k] * e.matrix[k * e.cols + c])
                        .sum(),
                };
            }
        }
        let mut out = self.clone();
        out.kind = ManifoldKind::EmbeddedRotation {
            inner: Box::new(self.kind.clone()),
            ambient_dim: target_dim,
            seed,
        };
        out.embedding = Some(Embedding {
            rows: target_dim,
            cols: base_cols,
            matrix,
        });
        out.centers = (0..out.chart_count()).map(|j| out.base_center(j)).collect();
        Ok(out)
    }

    /// Text form accepted by [`ChartedManifold::from_spec`].
    pub fn spec(&self) -> String {
        spec::format_kind(&self.kind)
    }
}

fn check_radius(r: f64) -> Result<f64> {
    if r > 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(Error::Parameter(format!(
            "radius must be positive and finite, got {r}"
        )))
    }
}

/// Angle difference wrapped into `(−π, π]`.
pub(crate) fn wrap(t: f64) -> f64 {
    let mut t = t % (2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    } else if t <= -PI {
        t += 2.0 * PI;
    }
    t
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests;
