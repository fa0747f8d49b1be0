//! Radial expansion of a star-shaped set onto the ball `B[0, L]`.
//!
//! With `R(x) = r(x/‖x‖)` and fixed radius `δ/2`,
//! `F(x) = x` on `B(0, δ/2)` and otherwise
//! `F(x) = (δ/2 + (L − δ/2)/(R(x) − δ/2) · (‖x‖ − δ/2)) · x/‖x‖`.
//! Rays are preserved, so the inverse swaps the roles of `R` and `L`.

use std::f64::consts::PI;

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, Rng};

/// Membership slack for points on the boundary.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-9;

/// Directions scanned when certifying the kernel and outer radii of a Fourier set.
const FOURIER_SCAN: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub enum RadialFunction {
    /// `r ≡ radius` in `R^dim`.
    Ball { radius: f64, dim: usize },
    /// Planar polygon, star-shaped about the origin, vertices counter-clockwise.
    Polygon {
        vertices: Vec<[f64; 2]>,
        angles: Vec<f64>,
    },
    /// Planar `r(θ) = a0 + Σ_k a_k cos kθ + b_k sin kθ`.
    Fourier { a0: f64, terms: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarShapedSet {
    radial: RadialFunction,
    /// `B(0, eta) ⊆ S`.
    eta: f64,
    /// `S ⊆ B[0, L]`.
    outer: f64,
    /// Fixed-region parameter; the identity region is `B(0, delta/2)`.
    delta: f64,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

/// Distance from the origin to the segment `[p, q]`.
fn origin_segment_distance(p: [f64; 2], q: [f64; 2]) -> f64 {
    let e = sub(q, p);
    let len2 = e[0] * e[0] + e[1] * e[1];
    let t = (-(p[0] * e[0] + p[1] * e[1]) / len2).clamp(0.0, 1.0);
    norm(&[p[0] + t * e[0], p[1] + t * e[1]])
}

impl StarShapedSet {
    fn finish(radial: RadialFunction, eta: f64, outer: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= outer && outer.is_finite()) {
            return Err(Error::Parameter(format!(
                "star set needs 0 < eta <= L, got eta {eta}, L {outer}"
            )));
        }
        Ok(StarShapedSet {
            radial,
            eta,
            outer,
            delta: eta,
        })
    }

    pub fn ball(radius: f64, dim: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || dim == 0 {
            return Err(Error::Parameter(format!(
                "ball needs a positive radius and dimension, got {radius}, {dim}"
            )));
        }
        Self::finish(RadialFunction::Ball { radius, dim }, radius, radius)
    }

    /// Counter-clockwise vertices whose polar angles increase strictly through
    /// one full turn, with every edge seen from the origin under less than π.
    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let k = vertices.len();
        if k < 3
            || vertices
                .iter()
                .any(|v| !(v[0].is_finite() && v[1].is_finite()))
        {
            return Err(Error::Parameter(
                "polygon needs at least 3 finite vertices".into(),
            ));
        }
        let mut turn = 0.0;
        for i in 0..k {
            let (p, q) = (vertices[i], vertices[(i + 1) % k]);
            if !(cross(p, q) > 0.0) {
                return Err(Error::Parameter(format!(
                    "polygon is not star-shaped about the origin with counter-clockwise vertices at edge {i}"
                )));
            }
            turn += cross(p, q).atan2(p[0] * q[0] + p[1] * q[1]);
        }
        if (turn - 2.0 * PI).abs() > 1e-9 {
            return Err(Error::Parameter(format!(
                "polygon vertices wind {:.6} turns about the origin, not 1",
                turn / (2.0 * PI)
            )));
        }
        let eta = (0..k)
            .map(|i| origin_segment_distance(vertices[i], vertices[(i + 1) % k]))
            .fold(f64::INFINITY, f64::min);
        let outer = vertices.iter().map(|v| norm(v)).fold(0.0, f64::max);
        let angles = vertices.iter().map(|v| v[1].atan2(v[0])).collect();
        Self::finish(RadialFunction::Polygon { vertices, angles }, eta, outer)
    }

    /// Jittered star polygon with `k >= 4` vertices and radii in `[0.5, 1.5]`.
    pub fn random_polygon(k: usize, seed: u64) -> Result<Self> {
        if k < 4 {
            return Err(Error::Parameter(format!(
                "random polygons need at least 4 vertices, got {k}"
            )));
        }
        let mut rng = rng_from_seed(seed);
        let vertices = (0..k)
            .map(|i| {
                let theta = 2.0 * PI * (i as f64 + 0.8 * rng.random::<f64>()) / k as f64;
                let r = rng.random_range(0.5..1.5);
                [r * theta.cos(), r * theta.sin()]
            })
            .collect();
        Self::polygon(vertices)
    }

    /// Kernel and outer radii are certified from a dense scan widened by the
    /// Lipschitz constant `Σ k(|a_k| + |b_k|)` of `r`.
    pub fn fourier(a0: f64, terms: Vec<(f64, f64)>) -> Result<Self> {
        if !a0.is_finite() || terms.iter().any(|(a, b)| !(a.is_finite() && b.is_finite())) {
            return Err(Error::Parameter(
                "Fourier coefficients must be finite".into(),
            ));
        }
        let lip: f64 = terms
            .iter()
            .enumerate()
            .map(|(k, (a, b))| (k + 1) as f64 * (a.abs() + b.abs()))
            .sum();
        let radial = RadialFunction::Fourier { a0, terms };
        let slack = lip * PI / FOURIER_SCAN as f64;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..FOURIER_SCAN {
            let t = 2.0 * PI * i as f64 / FOURIER_SCAN as f64;
            let r = radial_at_angle(&radial, t);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if !(lo - slack > 0.0) {
            return Err(Error::Parameter(format!(
                "Fourier radial function is not certified positive (min {lo})"
            )));
        }
        Self::finish(radial, lo - slack, hi + slack)
    }

    /// Overrides the fixed-region parameter; must satisfy `0 < delta <= eta`.
    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= self.eta) {
            return Err(Error::Parameter(format!(
                "delta must lie in (0, {}], got {delta}",
                self.eta
            )));
        }
        self.delta = delta;
        Ok(self)
    }

    /// Overrides the certified kernel radius with a smaller one.
    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= self.eta) {
            return Err(Error::Parameter(format!(
                "eta must lie in (0, {}], got {eta}",
                self.eta
            )));
        }
        self.eta = eta;
        self.delta = self.delta.min(eta);
        Ok(self)
    }

    pub fn radial(&self) -> &RadialFunction {
        &self.radial
    }

    pub fn dim(&self) -> usize {
        match &self.radial {
            RadialFunction::Ball { dim, .. } => *dim,
            _ => 2,
        }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `R(x) = r(x/‖x‖)`; the direction of the zero vector is taken as `e₁`.
    pub fn boundary_radius(&self, x: &[f64]) -> f64 {
        match &self.radial {
            RadialFunction::Ball { radius, .. } => *radius,
            r => {
                let t = if x[0] == 0.0 && x[1] == 0.0 {
                    0.0
                } else {
                    x[1].atan2(x[0])
                };
                radial_at_angle(r, t)
            }
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InputShape {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && norm(x) <= self.boundary_radius(x) + MEMBERSHIP_TOLERANCE
    }

    /// `F(x)` for `x ∈ S`.
    pub fn expand_map(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let n = norm(x);
        let half = self.delta / 2.0;
        if n <= half {
            return Ok(x.to_vec());
        }
        let r = self.boundary_radius(x);
        if n > r + MEMBERSHIP_TOLERANCE {
            return Err(Error::Domain(format!(
                "point at radius {n} lies outside the set (boundary radius {r})"
            )));
        }
        let target = half + (self.outer - half) / (r - half) * (n - half);
        Ok(x.iter().map(|v| v * (target / n)).collect())
    }

    /// `F⁻¹(y)` for `y ∈ B[0, L]`.
    pub fn expand_map_inverse(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(y)?;
        let n = norm(y);
        let half = self.delta / 2.0;
        if n <= half {
            return Ok(y.to_vec());
        }
        if n > self.outer + MEMBERSHIP_TOLERANCE {
            return Err(Error::Domain(format!(
                "point at radius {n} lies outside the ball of radius {}",
                self.outer
            )));
        }
        let r = self.boundary_radius(y);
        let target = half + (r - half) / (self.outer - half) * (n - half);
        Ok(y.iter().map(|v| v * (target / n)).collect())
    }

    /// Boundary point in the direction `u` (any nonzero vector).
    pub fn boundary_point(&self, u: &[f64]) -> Vec<f64> {
        let n = norm(u);
        let r = self.boundary_radius(u);
        u.iter().map(|v| v * r / n).collect()
    }

    /// Uniform point of the ball `B[0, radius]` in the set's dimension.
    pub fn sample_ball(&self, rng: &mut Rng, radius: f64) -> Vec<f64> {
        let d = self.dim();
        loop {
            let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let n = norm(&g);
            if n > 0.0 {
                let s = radius * rng.random::<f64>().powf(1.0 / d as f64) / n;
                return g.into_iter().map(|v| v * s).collect();
            }
        }
    }

    /// Uniform point of `S` by rejection from `B[0, L]`.
    pub fn sample_set(&self, rng: &mut Rng) -> Vec<f64> {
        loop {
            let x = self.sample_ball(rng, self.outer);
            if norm(&x) <= self.boundary_radius(&x) {
                return x;
            }
        }
    }
}

fn radial_at_angle(radial: &RadialFunction, t: f64) -> f64 {
    match radial {
        RadialFunction::Ball { radius, .. } => *radius,
        RadialFunction::Fourier { a0, terms } => {
            a0 + terms
                .iter()
                .enumerate()
                .map(|(k, (a, b))| a * ((k + 1) as f64 * t).cos() + b * ((k + 1) as f64 * t).sin())
                .sum::<f64>()
        }
        RadialFunction::Polygon { vertices, angles } => {
            let u = [t.cos(), t.sin()];
            let k = vertices.len();
            // the edge (i, i+1) covers directions from angle i to angle i+1
            // counter-clockwise; at a vertex direction both neighbours are
            // tried and the larger radius wins
            let mut best = 0.0f64;
            for i in 0..k {
                let (a, b) = (angles[i], angles[(i + 1) % k]);
                let span = (b - a).rem_euclid(2.0 * PI);
                let off = (t - a).rem_euclid(2.0 * PI);
                if off <= span || off >= 2.0 * PI - 1e-15 {
                    let (p, q) = (vertices[i], vertices[(i + 1) % k]);
                    let e = sub(q, p);
                    let den = cross(u, e);
                    if den > 0.0 {
                        best = best.max(cross(p, e) / den);
                    }
                }
            }
            best
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BiLipschitzAudit {
    pub set: String,
    pub dim: usize,
    pub eta: f64,
    pub delta: f64,
    pub outer_radius: f64,
    pub pairs: usize,
    pub lip_forward: f64,
    pub lip_inverse: f64,
    pub max_round_trip_error: f64,
}

/// Empirical Lipschitz constants of `F` on pairs in `S` and of `F⁻¹` on pairs
/// in `B[0, L]`. Half of the pairs are global, half are local perturbations
/// of scale `1e-3 L`, which is where ratios peak for piecewise-smooth `R`.
pub fn bilipschitz_audit(s: &StarShapedSet, n_pairs: usize, seed: u64) -> BiLipschitzAudit {
    let mut rng = rng_from_seed(seed);
    let scale = 1e-3 * s.outer;
    let mut lip_forward = 0.0f64;
    let mut lip_inverse = 0.0f64;
    let mut round_trip = 0.0f64;
    let ratio = |a: &[f64], b: &[f64], fa: &[f64], fb: &[f64]| {
        let den = norm(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>());
        if den > 0.0 {
            norm(&fa.iter().zip(fb).map(|(x, y)| x - y).collect::<Vec<_>>()) / den
        } else {
            0.0
        }
    };
    for i in 0..n_pairs {
        let local = i % 2 == 1;
        let x = s.sample_set(&mut rng);
        let y = if local {
            let step = s.sample_ball(&mut rng, scale);
            let y: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + b).collect();
            if !s.contains(&y) {
                continue;
            }
            y
        } else {
            s.sample_set(&mut rng)
        };
        let (fx, fy) = (s.expand_map(&x).unwrap(), s.expand_map(&y).unwrap());
        lip_forward = lip_forward.max(ratio(&x, &y, &fx, &fy));
        let back = s.expand_map_inverse(&fx).unwrap();
        round_trip = round_trip.max(norm(
            &back.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>(),
        ));

        let u = s.sample_ball(&mut rng, s.outer);
        let v = if local {
            let step = s.sample_ball(&mut rng, scale);
            let v: Vec<f64> = u.iter().zip(&step).map(|(a, b)| a + b).collect();
            if norm(&v) > s.outer {
                continue;
            }
            v
        } else {
            s.sample_ball(&mut rng, s.outer)
        };
        let (gu, gv) = (
            s.expand_map_inverse(&u).unwrap(),
            s.expand_map_inverse(&v).unwrap(),
        );
        lip_inverse = lip_inverse.max(ratio(&u, &v, &gu, &gv));
        let fwd = s.expand_map(&gu).unwrap();
        round_trip = round_trip.max(norm(
            &fwd.iter().zip(&u).map(|(a, b)| a - b).collect::<Vec<_>>(),
        ));
    }
    BiLipschitzAudit {
        set: s.spec(),
        dim: s.dim(),
        eta: s.eta,
        delta: s.delta,
        outer_radius: s.outer,
        pairs: n_pairs,
        lip_forward,
        lip_inverse,
        max_round_trip_error: round_trip,
    }
}

impl StarShapedSet {
    /// Parses `ball:L[:dim]`, `polygon:x,y;x,y;...`, `random-polygon:k:seed` or
    /// `fourier:a0[:a1,b1;a2,b2;...]`.
    pub fn from_spec(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("star set `{text}`: {why}"));
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| bad(&format!("`{s}` is not a number")))
        };
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| bad("expected kind:parameters"))?;
        match kind {
            "ball" => {
                let parts: Vec<&str> = rest.split(':').collect();
                let dim = match parts.as_slice() {
                    [_] => 2,
                    [_, d] => d
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| bad("dimension must be an integer"))?,
                    _ => return Err(bad("expected ball:L[:dim]")),
                };
                if dim > 1024 {
                    return Err(bad("dimension above 1024"));
                }
                Self::ball(num(parts[0])?, dim)
            }
            "polygon" => {
                let vertices = rest
                    .split(';')
                    .map(|p| {
                        let (x, y) = p
                            .split_once(',')
                            .ok_or_else(|| bad("vertices are x,y pairs"))?;
                        Ok([num(x)?, num(y)?])
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::polygon(vertices)
            }
            "random-polygon" => {
                let (k, seed) = rest
                    .split_once(':')
                    .ok_or_else(|| bad("expected random-polygon:k:seed"))?;
                let k = k
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| bad("vertex count must be an integer"))?;
                if k > 100_000 {
                    return Err(bad("vertex count above 100000"));
                }
                let seed = seed
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| bad("seed must be an unsigned integer"))?;
                Self::random_polygon(k, seed)
            }
            "fourier" => {
                let (a0, terms) = match rest.split_once(':') {
                    Some((a0, t)) => (a0, t),
                    None => (rest, ""),
                };
                let terms = if terms.trim().is_empty() {
                    Vec::new()
                } else {
                    terms
                        .split(';')
                        .map(|p| {
                            let (a, b) = p
                                .split_once(',')
                                .ok_or_else(|| bad("terms are a,b pairs"))?;
                            Ok((num(a)?, num(b)?))
                        })
                        .collect::<Result<Vec<_>>>()?
                };
                if terms.len() > 64 {
                    return Err(bad("more than 64 Fourier terms"));
                }
                Self::fourier(num(a0)?, terms)
            }
            _ => Err(bad("unknown kind (ball, polygon, random-polygon, fourier)")),
        }
    }

    /// Canonical text form; parses back to the same set.
    pub fn spec(&self) -> String {
        let pair = |a: f64, b: f64| format!("{a:?},{b:?}");
        match &self.radial {
            RadialFunction::Ball { radius, dim } => format!("ball:{radius:?}:{dim}"),
            RadialFunction::Polygon { vertices, .. } => {
                format!(
                    "polygon:{}",
                    vertices
                        .iter()
                        .map(|v| pair(v[0], v[1]))
                        .collect::<Vec<_>>()
                        .join(";")
                )
            }
            RadialFunction::Fourier { a0, terms } => {
                format!(
                    "fourier:{a0:?}:{}",
                    terms
                        .iter()
                        .map(|(a, b)| pair(*a, *b))
                        .collect::<Vec<_>>()
                        .join(";")
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: &[f64], b: &[f64]) -> f64 {
        norm(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
    }

    #[test]
    fn ball_map_is_identity() {
        let s = StarShapedSet::ball(2.0, 3).unwrap();
        let mut rng = rng_from_seed(1);
        for _ in 0..1000 {
            let x = s.sample_set(&mut rng);
            assert_eq!(s.expand_map(&x).unwrap(), x);
        }
        let a = bilipschitz_audit(&s, 2000, 2);
        assert!(
            (a.lip_forward - 1.0).abs() < 1e-9 && (a.lip_inverse - 1.0).abs() < 1e-9,
            "{a:?}"
        );
    }

    #[test]
    fn scaled_ball_with_smaller_kernel() {
        let s = StarShapedSet::ball(2.0, 2).unwrap().with_eta(1.0).unwrap();
        let a = bilipschitz_audit(&s, 2000, 3);
        assert!(a.lip_forward >= 1.0 - 1e-12 && a.lip_forward.is_finite());
        assert!(a.lip_forward * a.lip_inverse >= 1.0 - 1e-12);
    }

    #[test]
    fn square_radial_function() {
        let s = StarShapedSet::from_spec("polygon:1,1;-1,1;-1,-1;1,-1").unwrap();
        assert!((s.eta() - 1.0).abs() < 1e-15);
        assert!((s.outer_radius() - 2f64.sqrt()).abs() < 1e-15);
        assert!((s.boundary_radius(&[1.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!((s.boundary_radius(&[1.0, 1.0]) - 2f64.sqrt()).abs() < 1e-14);
        assert!((s.boundary_radius(&[1.0, 0.5]) - 1.25f64.sqrt()).abs() < 1e-14);
        assert!((s.boundary_radius(&[-1.0, 0.0]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn clockwise_or_non_star_polygons_are_rejected() {
        assert!(StarShapedSet::from_spec("polygon:1,-1;-1,-1;-1,1;1,1").is_err());
        assert!(StarShapedSet::from_spec("polygon:1,1;2,1;1,2").is_err());
    }

    #[test]
    fn polygon_boundary_maps_to_sphere_and_inner_ball_is_fixed() {
        let s = StarShapedSet::random_polygon(12, 7).unwrap();
        for i in 0..1000 {
            let t = 2.0 * PI * i as f64 / 1000.0;
            let b = s.boundary_point(&[t.cos(), t.sin()]);
            assert!((norm(&s.expand_map(&b).unwrap()) - s.outer_radius()).abs() < 1e-9);
            let inner = [
                0.5 * (1.0 - 1e-12) * s.delta() * t.cos(),
                0.5 * (1.0 - 1e-12) * s.delta() * t.sin(),
            ];
            assert_eq!(s.expand_map(&inner).unwrap(), inner.to_vec());
            let y = [s.outer_radius() * t.cos(), s.outer_radius() * t.sin()];
            let x = s.expand_map_inverse(&y).unwrap();
            assert!((norm(&x) - s.boundary_radius(&x)).abs() < 1e-8);
        }
    }

    #[test]
    fn round_trips_and_rays() {
        let s = StarShapedSet::random_polygon(16, 3).unwrap();
        let mut rng = rng_from_seed(4);
        for _ in 0..10_000 {
            let x = s.sample_set(&mut rng);
            assert!(
                dist(
                    &s.expand_map_inverse(&s.expand_map(&x).unwrap()).unwrap(),
                    &x
                ) < 1e-8
            );
            let y = s.sample_ball(&mut rng, s.outer_radius());
            let back = s.expand_map_inverse(&y).unwrap();
            assert!(s.contains(&back));
            assert!(dist(&s.expand_map(&back).unwrap(), &y) < 1e-8);
        }
        let u = [0.3f64.cos(), 0.3f64.sin()];
        let r = s.boundary_radius(&u);
        let mut prev = -1.0;
        for i in 0..=200 {
            let t = r * i as f64 / 200.0;
            let n = norm(&s.expand_map(&[t * u[0], t * u[1]]).unwrap());
            assert!(n > prev);
            prev = n;
        }
    }

    #[test]
    fn outside_points_are_rejected() {
        let s = StarShapedSet::ball(1.0, 2).unwrap();
        assert!(matches!(s.expand_map(&[1.5, 0.0]), Err(Error::Domain(_))));
        assert!(matches!(
            s.expand_map_inverse(&[0.0, 1.01]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            s.expand_map(&[0.1]),
            Err(Error::InputShape { .. })
        ));
    }

    #[test]
    fn fourier_radii_are_certified() {
        let s = StarShapedSet::from_spec("fourier:1:0.2,0.1;0,0.05").unwrap();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..100_000 {
            let t = 2.0 * PI * (i as f64 + 0.37) / 100_000.0;
            let r = s.boundary_radius(&[t.cos(), t.sin()]);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        assert!(s.eta() <= lo && s.outer_radius() >= hi);
        assert!(lo - s.eta() < 1e-4 && s.outer_radius() - hi < 1e-4);
        assert!(StarShapedSet::from_spec("fourier:0.1:0.5,0").is_err());
    }

    #[test]
    fn spec_round_trip() {
        for text in [
            "ball:1.5:4",
            "random-polygon:9:2",
            "fourier:1:0.1,0.2",
            "polygon:1,0;0,1;-1,0;0,-1",
        ] {
            let s = StarShapedSet::from_spec(text).unwrap();
            assert_eq!(StarShapedSet::from_spec(&s.spec()).unwrap(), s);
        }
        assert!(StarShapedSet::from_spec("cube:1").is_err());
        assert!(StarShapedSet::from_spec("ball").is_err());
    }
}
