//! Deterministic one-dimensional quadrature.

/// Adaptive Simpson integral of `f` over `[a, b]` to absolute tolerance `tol`
/// (Richardson-corrected), refining at most `max_depth` times per branch.
pub fn adaptive_simpson(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> f64 {
    if a == b {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn step(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_and_jumps() {
        let v = adaptive_simpson(&mut |x| x * x, 0.0, 1.0, 1e-12, 40);
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
        let v = adaptive_simpson(&mut |x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 40);
        assert!((v - 2.0).abs() < 1e-11);
        let v = adaptive_simpson(
            &mut |x| if x < 0.3 { 1.0 } else { 2.0 },
            0.0,
            1.0,
            1e-10,
            60,
        );
        assert!((v - 1.7).abs() < 1e-9);
    }
}
