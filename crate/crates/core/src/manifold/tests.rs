use std::f64::consts::PI;

use rand::Rng as _;

use super::*;

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn all_kinds() -> Vec<ChartedManifold> {
    vec![
        ChartedManifold::circle(1.0).unwrap(),
        ChartedManifold::circle(2.5).unwrap(),
        ChartedManifold::sphere(1.0).unwrap(),
        ChartedManifold::sphere(0.7).unwrap(),
        ChartedManifold::flat_torus(1, 1.0).unwrap(),
        ChartedManifold::flat_torus(2, 1.0).unwrap(),
        ChartedManifold::flat_torus(3, 1.0).unwrap(),
        ChartedManifold::flat_torus(3, 1.0)
            .unwrap()
            .ambient_embed(24, 5)
            .unwrap(),
        ChartedManifold::sphere(1.0)
            .unwrap()
            .ambient_embed(7, 1)
            .unwrap(),
    ]
}

#[test]
fn circle_quarter_arc() {
    let m = ChartedManifold::circle(1.0).unwrap();
    assert!(close(
        &m.exp_map(0, &[PI / 2.0]).unwrap(),
        &[0.0, 1.0],
        1e-15
    ));
    assert!((m.log_map(0, &[0.0, 1.0]).unwrap()[0] - PI / 2.0).abs() < 1e-15);
}

#[test]
fn sphere_north_pole_great_circle() {
    let m = ChartedManifold::sphere(1.0).unwrap();
    // chart 4 is +e_z with frame (e_x, e_y)
    assert_eq!(m.chart_center(4), &[0.0, 0.0, 1.0]);
    assert!(close(
        &m.exp_map(4, &[PI / 2.0, 0.0]).unwrap(),
        &[1.0, 0.0, 0.0],
        1e-15
    ));
}

#[test]
fn zero_tangent_maps_to_center() {
    for m in all_kinds() {
        for j in 0..m.chart_count() {
            let zero = vec![0.0; m.intrinsic_dim()];
            assert_eq!(m.exp_map(j, &zero).unwrap(), m.chart_center(j));
            assert!(m
                .log_map(j, m.chart_center(j))
                .unwrap()
                .iter()
                .all(|v| v.abs() < 1e-15));
        }
    }
}

#[test]
fn exp_rejects_long_vectors() {
    let m = ChartedManifold::circle(1.0).unwrap();
    assert!(matches!(m.exp_map(0, &[PI]), Err(Error::Domain(_))));
    assert!(matches!(m.log_map(0, &[-1.0, 0.0]), Err(Error::Domain(_))));
}

#[test]
fn exp_log_round_trip() {
    for m in all_kinds() {
        let mut rng = rng_from_seed(11);
        let r = m.chart_radius();
        for _ in 0..10_000 {
            let j = rng.random_range(0..m.chart_count());
            let v: Vec<f64> = loop {
                let v: Vec<f64> = (0..m.intrinsic_dim())
                    .map(|_| rng.random_range(-r..r))
                    .collect();
                if norm(&v) < r * 0.999 {
                    break v;
                }
            };
            let x = m.exp_map(j, &v).unwrap();
            let back = m.log_map(j, &x).unwrap();
            assert!(close(&back, &v, 1e-9), "{:?}: {v:?} -> {back:?}", m.kind());
            assert!(close(&m.exp_map(j, &back).unwrap(), &x, 1e-9));
            assert!(
                (norm(&back) - m.geodesic_distance(m.chart_center(j), &x).unwrap()).abs() < 1e-9
            );
        }
    }
}

#[test]
fn geodesic_distance_examples() {
    let c = ChartedManifold::circle(1.0).unwrap();
    assert!((c.geodesic_distance(&[1.0, 0.0], &[-1.0, 0.0]).unwrap() - PI).abs() < 1e-15);
    let s = ChartedManifold::sphere(1.0).unwrap();
    assert_eq!(
        s.geodesic_distance(&[0.0, 0.6, 0.8], &[0.0, 0.6, 0.8])
            .unwrap(),
        0.0
    );
    let t = ChartedManifold::flat_torus(2, 1.0).unwrap();
    let d = t
        .geodesic_distance(&[1.0, 0.0, 1.0, 0.0], &[0.0, 1.0, 0.0, 1.0])
        .unwrap();
    assert!((d - PI / 2f64.sqrt()).abs() < 1e-15);
    assert!(matches!(
        c.geodesic_distance(&[1.1, 0.0], &[1.0, 0.0]),
        Err(Error::Domain(_))
    ));
}

#[test]
fn metric_properties_and_ambient_domination() {
    for m in all_kinds() {
        let pts = m.sample_uniform(3, 300);
        for i in 0..100 {
            let (x, y, z) = (pts.point(i), pts.point(i + 100), pts.point(i + 200));
            let dxy = m.geodesic_distance(x, y).unwrap();
            let dyx = m.geodesic_distance(y, x).unwrap();
            let dxz = m.geodesic_distance(x, z).unwrap();
            let dzy = m.geodesic_distance(z, y).unwrap();
            assert!((dxy - dyx).abs() < 1e-9);
            assert!(dxy <= dxz + dzy + 1e-9);
            assert!(crate::wasserstein::euclidean(x, y) <= dxy + 1e-9);
        }
    }
}

#[test]
fn sphere_jacobian() {
    let s = ChartedManifold::sphere(1.0).unwrap();
    assert_eq!(s.volume_jacobian(0, &[0.0, 0.0]), 1.0);
    assert!((s.volume_jacobian(0, &[PI / 2.0, 0.0]) - 2.0 / PI).abs() < 1e-15);
    let c = ChartedManifold::circle(1.0).unwrap();
    assert_eq!(c.volume_jacobian(1, &[0.7]), 1.0);
    let mut rng = rng_from_seed(2);
    for _ in 0..1000 {
        let v = [rng.random_range(-1.1..1.1), rng.random_range(-1.1..1.1)];
        let jac = s.volume_jacobian(0, &v);
        assert!(jac > 0.0 && jac <= 1.0);
    }
}

#[test]
fn circle_cover_overlaps() {
    let m = ChartedManifold::circle(1.0).unwrap();
    assert_eq!(m.geodesic_ball_cover().unwrap(), vec![0, 1, 2]);
    let pts = m.sample_uniform(4, 10_000);
    for x in pts.points() {
        let k = m.multiplicity(x);
        assert!(k == 1 || k == 2);
    }
}

#[test]
fn sphere_cover_overlaps() {
    let m = ChartedManifold::sphere(1.0).unwrap();
    assert_eq!(m.geodesic_ball_cover().unwrap().len(), 6);
    let pts = m.sample_uniform(5, 10_000);
    for x in pts.points() {
        // away from the six axis points every point sees at least two hemispheres
        if x.iter().all(|c| c.abs() < 0.99) {
            assert!(m.multiplicity(x) >= 2);
        }
    }
}

#[test]
fn every_kind_is_covered() {
    for m in all_kinds() {
        assert!(m.geodesic_ball_cover().is_ok(), "{:?}", m.kind());
    }
}

#[test]
fn three_point_grid_would_not_cover_the_three_torus() {
    // angle offset π/3 on every axis is √3·π/3 ≈ 1.81 > π/2 from a 3-grid
    let gap = 3f64.sqrt() * PI / 3.0;
    assert!(gap > PI / 2.0);
    assert_eq!(torus_grid_size(3), 4);
    assert_eq!(torus_grid_size(2), 3);
    assert_eq!(torus_grid_size(1), 3);
}

#[test]
fn embedding_is_isometric() {
    let base = ChartedManifold::flat_torus(3, 1.0).unwrap();
    let emb = base.ambient_embed(24, 9).unwrap();
    assert_eq!(emb.intrinsic_dim(), 3);
    assert_eq!(emb.ambient_dim(), 24);
    let pts = base.sample_uniform(6, 2000);
    let lifted = emb.sample_uniform(6, 2000);
    for i in 0..1000 {
        let (x, y) = (pts.point(i), pts.point(i + 1000));
        let (ex, ey) = (lifted.point(i), lifted.point(i + 1000));
        assert!(
            (crate::wasserstein::euclidean(x, y) - crate::wasserstein::euclidean(ex, ey)).abs()
                < 1e-10
        );
        let g = base.geodesic_distance(x, y).unwrap();
        assert!((g - emb.geodesic_distance(ex, ey).unwrap()).abs() < 1e-10);
    }
    assert!(matches!(emb.ambient_embed(10, 1), Err(Error::Parameter(_))));
}

#[test]
fn haar_matrix_is_orthogonal() {
    let n = 9;
    let q = haar_orthogonal(n, 4);
    for i in 0..n {
        for j in 0..n {
            let d: f64 = (0..n).map(|k| q[k * n + i] * q[k * n + j]).sum();
            assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }
}

#[test]
fn uniform_circle_samples_lie_on_circle() {
    let m = ChartedManifold::circle(1.0).unwrap();
    let d = ManifoldDensity::uniform(m);
    let pts = d.sample(1, 4);
    assert_eq!(pts.len(), 4);
    for p in pts.points() {
        assert!((norm(p) - 1.0).abs() < 1e-12);
    }
    assert_eq!(d.sample(1, 4), pts);
}

#[test]
fn cosine_density_first_moment() {
    let m = ChartedManifold::circle(1.0).unwrap();
    let d = ManifoldDensity::new(m, DensitySpec::parse("cosine:2:1").unwrap());
    let pts = d.sample(7, 100_000);
    let cos: Vec<f64> = pts.points().map(|p| p[0]).collect();
    let mean = crate::stats::mean(&cos);
    let sd = crate::stats::std_dev(&cos) / (cos.len() as f64).sqrt();
    assert!((mean - 0.25).abs() < 3.0 * sd, "{mean} ± {sd}");
}

#[test]
fn density_bounds_and_normalization() {
    for m in all_kinds() {
        let d = ManifoldDensity::new(
            m,
            DensitySpec::Cosine {
                base: 3.0,
                amp: 1.0,
            },
        );
        let pts = d.manifold().sample_uniform(8, 10_000);
        for x in pts.points() {
            let q = d.density(x);
            assert!(d.lower_bound() <= q * (1.0 + 1e-12) && q <= d.upper_bound() * (1.0 + 1e-12));
        }
        let est = d.normalization_check(9, 100_000);
        assert!((est.value - 1.0).abs() <= est.half_width, "{est:?}");
    }
}

#[test]
fn spec_round_trip() {
    for text in [
        "circle:1",
        "sphere:2.5",
        "torus:3:1",
        "torus:3:1:embed:24:7",
        "sphere:1:embed:5:1:embed:8:2",
    ] {
        let m = ChartedManifold::from_spec(text).unwrap();
        assert_eq!(m.spec(), text);
    }
    let m = ChartedManifold::from_spec("torus:3:1:embed:24:7").unwrap();
    assert_eq!((m.intrinsic_dim(), m.ambient_dim()), (3, 24));
    for bad in [
        "",
        "circle",
        "circle:-1",
        "torus:x:1",
        "sphere:1:embed:2:0",
        "cube:1",
        "circle:1:extra",
    ] {
        assert!(ChartedManifold::from_spec(bad).is_err(), "{bad}");
    }
}

#[test]
fn density_spec_parsing() {
    assert_eq!(DensitySpec::parse("uniform").unwrap(), DensitySpec::Uniform);
    assert_eq!(
        DensitySpec::parse("cosine:2:1").unwrap(),
        DensitySpec::Cosine {
            base: 2.0,
            amp: 1.0
        }
    );
    assert!(DensitySpec::parse("cosine:1:2").is_err());
    assert!(DensitySpec::parse("gauss").is_err());
}
