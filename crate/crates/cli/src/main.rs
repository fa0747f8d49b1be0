//! `genlab`: command-line front end for the approximation, transport and
//! Wasserstein experiments.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use genlab::experiments::{
    build_approx, end_to_end, noisy_sweep, parse_ns, rate_plot_svg, rate_sweep, transport_check,
    EndToEndConfig, FuncSpec, RateSweepConfig, RunConfig, SlopeFit,
};
use genlab::starshape::{bilipschitz_audit, StarShapedSet};

#[derive(Parser)]
#[command(
    name = "genlab",
    version,
    about = "Constructive ReLU generators and empirical Wasserstein experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a ReLU approximation of a Hölder function; writes the network and a budget sidecar.
    BuildApprox(Common),
    /// Push the uniform source through the oracle transport and measure W1 to the density.
    TransportCheck(Common),
    /// Convergence of empirical measures: a CSV table, sidecars and a log-log SVG plot.
    RateSweep(Common),
    /// Build the full generator network for a manifold density and measure it.
    EndToEnd(Common),
    /// Empirical bi-Lipschitz constants of the star-set expansion map.
    StarshapeAudit(Common),
}

/// Flags shared by every subcommand; each reads the ones it needs. Values in
/// `--config` (TOML, same key names) are overridden by flags given here.
#[derive(Args, Default)]
struct Common {
    /// TOML file with any of the flag names below as keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Manifold spec, e.g. `circle:1`, `sphere:1`, `torus:3:1:embed:24:5`.
    #[arg(long)]
    manifold: Option<String>,
    /// Density spec: `uniform` or `cosine:base:amp`.
    #[arg(long)]
    density: Option<String>,
    /// Comma-separated, strictly increasing sample sizes.
    #[arg(long)]
    ns: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    ref_mult: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    noise_sigma: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_eval: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Function spec: `sqrt`, `abs-power:p[:c]`, `identity`, `const:c[:d]`, `sqrt-product:d`.
    #[arg(long)]
    func: Option<String>,
    /// Star set spec: `ball:L[:dim]`, `polygon:x,y;...`, `random-polygon:k:seed`, `fourier:a0[:a,b;...]`.
    #[arg(long)]
    set: Option<String>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    check_halving: bool,
}

impl Common {
    fn resolve(self) -> Result<RunConfig> {
        let flags = RunConfig {
            manifold: self.manifold,
            density: self.density,
            ns: self.ns.as_deref().map(parse_ns).transpose()?,
            reps: self.reps,
            ref_mult: self.ref_mult,
            seed: self.seed,
            noise_sigma: self.noise_sigma,
            n: self.n,
            n_eval: self.n_eval,
            eps: self.eps,
            alpha: self.alpha,
            func: self.func,
            set: self.set,
            pairs: self.pairs,
            out: self.out.map(|p| p.display().to_string()),
            check_halving: self.check_halving.then_some(true),
        };
        let file = match &self.config {
            Some(path) => {
                RunConfig::from_file(path).with_context(|| format!("reading {}", path.display()))?
            }
            None => RunConfig::default(),
        };
        Ok(file.overridden_by(flags))
    }
}

fn require<T>(v: Option<T>, name: &str) -> Result<T> {
    match v {
        Some(v) => Ok(v),
        None => bail!("missing --{name} (flag or config key)"),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit<T: Serialize>(value: &T, out: Option<&str>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => write(Path::new(p), &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `dir/stem.ext` next to `path`.
fn sidecar(path: &Path, ext: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    path.with_file_name(format!("{stem}.{ext}"))
}

fn build_approx_cmd(cfg: RunConfig) -> Result<()> {
    let func = FuncSpec::parse(&require(cfg.func, "func")?)?;
    let alpha = cfg.alpha.unwrap_or_else(|| func.natural_alpha());
    let eps = require(cfg.eps, "eps")?;
    let out = PathBuf::from(require(cfg.out, "out")?);
    let (net, report) = build_approx(&func, alpha, eps, cfg.seed.unwrap_or(0))?;
    write(&out, &net.to_json())?;
    let budget = sidecar(&out, "budget.json");
    emit(&report, Some(&budget.display().to_string()))?;
    eprintln!(
        "depth {} width {} weight {:.3}; L1 error {:.5} ± {:.5} (eps {eps}); budget {}",
        report.metrics.depth,
        report.metrics.width,
        report.metrics.weight_bound,
        report.l1_error.value,
        report.l1_error.half_width,
        if report.budget_violations.is_empty() {
            "respected".to_string()
        } else {
            format!("violated: {:?}", report.budget_violations)
        }
    );
    Ok(())
}

fn transport_check_cmd(cfg: RunConfig) -> Result<()> {
    let report = transport_check(
        &require(cfg.manifold, "manifold")?,
        cfg.density.as_deref().unwrap_or("uniform"),
        cfg.n.unwrap_or(2048),
        cfg.seed.unwrap_or(0),
        genlab::experiments::transport_check::SHARE_CHECK_SAMPLES,
    )?;
    eprintln!(
        "pushforward W1 {:.5}, statistical floor {:.5}",
        report.w1, report.statistical_floor
    );
    emit(&report, cfg.out.as_deref())
}

fn rate_sweep_cmd(cfg: RunConfig) -> Result<()> {
    let mut sweep = RateSweepConfig::new(
        &require(cfg.manifold, "manifold")?,
        require(cfg.ns, "ns")?,
        cfg.reps.unwrap_or(10),
        cfg.seed.unwrap_or(0),
    );
    if let Some(d) = cfg.density {
        sweep.density = d;
    }
    if let Some(m) = cfg.ref_mult {
        sweep.ref_mult = m;
    }
    sweep.noise_sigma = cfg.noise_sigma;
    let out = PathBuf::from(require(cfg.out, "out")?);
    let table = rate_sweep(&sweep)?;
    write(&out, &table.to_csv())?;
    write(&sidecar(&out, "floor.csv"), &table.floor_csv())?;
    write(
        &sidecar(&out, "svg"),
        &rate_plot_svg(&table, &format!("W1 rate on {}", sweep.manifold)),
    )?;
    #[derive(Serialize)]
    struct Summary<'a> {
        config: &'a RateSweepConfig,
        fit: Option<&'a SlopeFit>,
        mean_w1: Vec<(usize, f64)>,
        reference_floor: &'a [(usize, f64)],
    }
    let summary = Summary {
        config: &sweep,
        fit: table.fit.as_ref(),
        mean_w1: table.means(),
        reference_floor: &table.reference_floor,
    };
    emit(
        &summary,
        Some(&sidecar(&out, "summary.json").display().to_string()),
    )?;
    match &table.fit {
        Some(f) => eprintln!("fitted slope {:.4} ± {:.4}", f.slope, f.stderr),
        None => eprintln!("fewer than 3 sample sizes: no slope fit"),
    }
    if sweep.noise_sigma.is_some() {
        let noisy = noisy_sweep(&sweep)?;
        emit(
            &noisy,
            Some(&sidecar(&out, "noisy.json").display().to_string()),
        )?;
        eprintln!(
            "noise: sqrt(V) {:.5}; mean clean-vs-noisy W1 within it: {}; reference bound in every replicate: {}",
            noisy.sqrt_variance, noisy.mean_within_sqrt_variance, noisy.all_within_bound
        );
    }
    Ok(())
}

fn end_to_end_cmd(cfg: RunConfig) -> Result<()> {
    let run = EndToEndConfig {
        manifold: require(cfg.manifold, "manifold")?,
        density: cfg.density.unwrap_or_else(|| "uniform".into()),
        eps: require(cfg.eps, "eps")?,
        seed: cfg.seed.unwrap_or(0),
        n_eval: cfg.n_eval.or(cfg.n).unwrap_or(2048),
        check_halving: cfg.check_halving.unwrap_or(false),
    };
    let report = end_to_end(&run)?;
    eprintln!(
        "W1 {:.5} (limit {:.5}); floor {:.5}; control {:.5}; depth {} width {}",
        report.w1,
        report.w1_limit,
        report.statistical_floor.value,
        report.control_w1.value,
        report.metrics.depth,
        report.metrics.width
    );
    emit(&report, cfg.out.as_deref())
}

fn starshape_cmd(cfg: RunConfig) -> Result<()> {
    let set = StarShapedSet::from_spec(&require(cfg.set, "set")?)?;
    let audit = bilipschitz_audit(&set, cfg.pairs.unwrap_or(10_000), cfg.seed.unwrap_or(0));
    emit(&audit, cfg.out.as_deref())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::BuildApprox(c) => build_approx_cmd(c.resolve()?),
        Command::TransportCheck(c) => transport_check_cmd(c.resolve()?),
        Command::RateSweep(c) => rate_sweep_cmd(c.resolve()?),
        Command::EndToEnd(c) => end_to_end_cmd(c.resolve()?),
        Command::StarshapeAudit(c) => starshape_cmd(c.resolve()?),
    }
}
