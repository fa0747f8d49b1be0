//! Named test functions on `[0, 1]^d` with their Hölder data.
//!
//! Hölder norms here are `seminorm + sup`, which dominates the seminorm the
//! builders need: `√x` has seminorm 1 at `α = 1/2` and sup 1, so norm 2.

use crate::builders::HolderFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FuncSpec {
    /// `√x` on `[0, 1]`, natural exponent 1/2.
    Sqrt,
    /// `|x − c|^p` on `[0, 1]`, natural exponent `p ∈ (0, 1]`.
    AbsPower { power: f64, center: f64 },
    /// `x` on `[0, 1]`, natural exponent 1.
    Identity,
    /// The constant `c` on `[0, 1]^d`.
    Const { value: f64, dim: usize },
    /// `Π √x_i` on `[0, 1]^d`, natural exponent 1/2.
    SqrtProduct { dim: usize },
}

impl FuncSpec {
    /// `sqrt`, `abs-power:p[:c]`, `identity`, `const:c[:d]` or `sqrt-product:d`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("function `{text}`: {why}"));
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| bad(&format!("`{s}` is not a number")))
        };
        let int = |s: &str| match s.trim().parse::<usize>() {
            Ok(d) if (1..=8).contains(&d) => Ok(d),
            _ => Err(bad("dimension must be an integer in 1..=8")),
        };
        let parts: Vec<&str> = text.trim().split(':').collect();
        let spec = match parts.as_slice() {
            ["sqrt"] => FuncSpec::Sqrt,
            ["identity"] => FuncSpec::Identity,
            ["abs-power", p] => FuncSpec::AbsPower {
                power: num(p)?,
                center: 0.5,
            },
            ["abs-power", p, c] => FuncSpec::AbsPower {
                power: num(p)?,
                center: num(c)?,
            },
            ["const", c] => FuncSpec::Const {
                value: num(c)?,
                dim: 1,
            },
            ["const", c, d] => FuncSpec::Const {
                value: num(c)?,
                dim: int(d)?,
            },
            ["sqrt-product", d] => FuncSpec::SqrtProduct { dim: int(d)? },
            _ => {
                return Err(bad(
                    "expected sqrt, abs-power:p[:c], identity, const:c[:d] or sqrt-product:d",
                ))
            }
        };
        match spec {
            FuncSpec::AbsPower { power, center }
                if !(power > 0.0 && power <= 1.0 && (0.0..=1.0).contains(&center)) =>
            {
                Err(bad("abs-power needs p in (0, 1] and c in [0, 1]"))
            }
            FuncSpec::Const { value, .. } if !(value.is_finite() && value.abs() <= 1e6) => {
                Err(bad("constant must be finite and at most 1e6"))
            }
            s => Ok(s),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FuncSpec::Const { dim, .. } | FuncSpec::SqrtProduct { dim } => *dim,
            _ => 1,
        }
    }

    /// Largest exponent for which the function is Hölder.
    pub fn natural_alpha(&self) -> f64 {
        match self {
            FuncSpec::Sqrt | FuncSpec::SqrtProduct { .. } => 0.5,
            FuncSpec::AbsPower { power, .. } => *power,
            FuncSpec::Identity | FuncSpec::Const { .. } => 1.0,
        }
    }

    /// `(seminorm at the natural exponent, sup)`.
    fn natural_data(&self) -> (f64, f64) {
        match self {
            FuncSpec::Sqrt => (1.0, 1.0),
            FuncSpec::AbsPower { power, center } => (1.0, center.max(1.0 - center).powf(*power)),
            FuncSpec::Identity => (1.0, 1.0),
            FuncSpec::Const { value, .. } => (0.0, value.abs()),
            // |Πa_i − Πb_i| ≤ Σ|a_i − b_i| for factors in [0, 1], then Cauchy–Schwarz
            FuncSpec::SqrtProduct { dim } => ((*dim as f64).powf(0.75), 1.0),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            FuncSpec::Sqrt => x[0].max(0.0).sqrt(),
            FuncSpec::AbsPower { power, center } => (x[0] - center).abs().powf(*power),
            FuncSpec::Identity => x[0],
            FuncSpec::Const { value, .. } => *value,
            FuncSpec::SqrtProduct { .. } => x.iter().map(|v| v.max(0.0).sqrt()).product(),
        }
    }

    /// Hölder data at exponent `alpha ≤ natural_alpha`. On `[0, 1]^d` the
    /// seminorm grows by `diam^{α₀ − α} = d^{(α₀ − α)/2}` when lowering the exponent.
    pub fn holder(&self, alpha: f64) -> Result<HolderFunction> {
        let a0 = self.natural_alpha();
        if !(alpha > 0.0 && alpha <= a0 + 1e-12) {
            return Err(Error::Parameter(format!(
                "function is Hölder only up to exponent {a0}, got {alpha}"
            )));
        }
        let (semi, sup) = self.natural_data();
        let semi = semi * (self.dim() as f64).powf((a0 - alpha).max(0.0) / 2.0);
        let norm = (semi + sup).max(f64::MIN_POSITIVE);
        let spec = *self;
        HolderFunction::new(
            self.dim(),
            alpha.min(1.0),
            norm,
            sup.max(f64::MIN_POSITIVE),
            move |x| spec.eval(x),
        )
    }

    pub fn label(&self) -> String {
        match self {
            FuncSpec::Sqrt => "sqrt".into(),
            FuncSpec::Identity => "identity".into(),
            FuncSpec::AbsPower { power, center } => format!("abs-power:{power}:{center}"),
            FuncSpec::Const { value, dim } => format!("const:{value}:{dim}"),
            FuncSpec::SqrtProduct { dim } => format!("sqrt-product:{dim}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_data() {
        let f = FuncSpec::parse("sqrt").unwrap().holder(0.5).unwrap();
        assert_eq!((f.holder_norm, f.sup_bound, f.dim), (2.0, 1.0, 1));
        assert_eq!(
            FuncSpec::parse("abs-power:0.3").unwrap(),
            FuncSpec::AbsPower {
                power: 0.3,
                center: 0.5
            }
        );
        assert!(FuncSpec::parse("sqrt").unwrap().holder(0.7).is_err());
        assert!(FuncSpec::parse("abs-power:1.5").is_err());
        assert!(FuncSpec::parse("const:2:0").is_err());
        assert!(FuncSpec::parse("cube").is_err());
        for t in [
            "sqrt",
            "identity",
            "abs-power:0.5:0.25",
            "const:3:2",
            "sqrt-product:2",
        ] {
            let s = FuncSpec::parse(t).unwrap();
            assert_eq!(FuncSpec::parse(&s.label()).unwrap(), s);
        }
    }

    #[test]
    fn seminorm_dominates_sampled_quotients() {
        use rand::Rng as _;
        let mut rng = crate::rng::rng_from_seed(3);
        for t in ["sqrt", "abs-power:0.3:0.2", "sqrt-product:3", "identity"] {
            let s = FuncSpec::parse(t).unwrap();
            for alpha in [s.natural_alpha(), 0.25] {
                let f = s.holder(alpha).unwrap();
                for _ in 0..2000 {
                    let x: Vec<f64> = (0..s.dim()).map(|_| rng.random()).collect();
                    let y: Vec<f64> = (0..s.dim()).map(|_| rng.random()).collect();
                    let d = crate::wasserstein::euclidean(&x, &y);
                    let q = (f.eval(&x) - f.eval(&y)).abs() / d.powf(alpha);
                    assert!(
                        q <= f.holder_norm - f.sup_bound + 1e-9,
                        "{t} at alpha {alpha}: {q}"
                    );
                }
            }
        }
    }
}
