//! Small summary statistics used by the verifiers and the harness.

/// z-quantile for a two-sided 99% normal interval.
pub const Z99: f64 = 2.575_829_303_548_901;

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample standard deviation; zero for fewer than two values.
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Mean with a normal-approximation confidence half-width at quantile `z`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub half_width: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64], z: f64) -> Self {
        let half_width = if xs.is_empty() {
            f64::INFINITY
        } else {
            z * std_dev(xs) / (xs.len() as f64).sqrt()
        };
        Estimate {
            value: mean(xs),
            half_width,
        }
    }

    pub fn upper(&self) -> f64 {
        self.value + self.half_width
    }

    pub fn lower(&self) -> f64 {
        self.value - self.half_width
    }
}

/// Ordinary least squares of `ys` on `xs`: returns (slope, intercept, slope stderr).
pub fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = mean(xs);
    let my = mean(ys);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = if xs.len() > 2 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    (slope, intercept, stderr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ols_recovers_a_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 0.5 * x).collect();
        let (s, b, se) = ols(&xs, &ys);
        assert!((s + 0.5).abs() < 1e-12);
        assert!((b - 3.0).abs() < 1e-12);
        assert!(se < 1e-12);
    }

    #[test]
    fn std_dev_of_constant_is_zero() {
        assert_eq!(std_dev(&[2.0, 2.0, 2.0]), 0.0);
        assert_eq!(std_dev(&[1.0]), 0.0);
    }
}
