//! TOML run configurations. Keys mirror the command-line flag names
//! (`ref-mult`, `noise-sigma`, ...); explicit flags override file values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    pub manifold: Option<String>,
    pub density: Option<String>,
    pub ns: Option<Vec<usize>>,
    pub reps: Option<usize>,
    pub ref_mult: Option<usize>,
    pub seed: Option<u64>,
    pub noise_sigma: Option<f64>,
    pub n: Option<usize>,
    pub n_eval: Option<usize>,
    pub eps: Option<f64>,
    pub alpha: Option<f64>,
    pub func: Option<String>,
    pub set: Option<String>,
    pub pairs: Option<usize>,
    pub out: Option<String>,
    pub check_halving: Option<bool>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("invalid run configuration: {e}")))
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("run configurations serialize")
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overridden_by(self, flags: RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => { RunConfig { $($f: flags.$f.or(self.$f)),* } };
        }
        pick!(
            manifold,
            density,
            ns,
            reps,
            ref_mult,
            seed,
            noise_sigma,
            n,
            n_eval,
            eps,
            alpha,
            func,
            set,
            pairs,
            out,
            check_halving
        )
    }
}

/// Parses a comma-separated list of sample sizes.
pub fn parse_ns(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("sample size `{s}` is not an unsigned integer")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kebab_keys_and_override() {
        let file = RunConfig::from_toml_str(
            "manifold = \"circle:1\"\nns = [128, 256]\nref-mult = 16\nseed = 4\n",
        )
        .unwrap();
        assert_eq!(file.ref_mult, Some(16));
        let merged = file.clone().overridden_by(RunConfig {
            seed: Some(9),
            ..Default::default()
        });
        assert_eq!(
            (merged.seed, merged.ns.as_deref()),
            (Some(9), Some(&[128, 256][..]))
        );
        assert_eq!(
            RunConfig::from_toml_str(&merged.to_toml_string()).unwrap(),
            merged
        );
        assert!(RunConfig::from_toml_str("ref_mult = 16").is_err());
        assert!(RunConfig::from_toml_str("bogus = 1").is_err());
        assert_eq!(parse_ns("128, 256,512").unwrap(), vec![128, 256, 512]);
        assert!(parse_ns("12,x").is_err());
    }
}
