//! Experiment harness: convergence sweeps, noisy bounds, full generator runs,
//! approximation runs and their CSV/SVG/JSON outputs.

pub mod approx;
pub mod config;
pub mod csv;
pub mod end_to_end;
pub mod func;
pub mod plot;
pub mod rate;
pub mod transport_check;

pub use approx::{build_approx, mc_l1_error, ApproxReport};
pub use config::{parse_ns, RunConfig};
pub use end_to_end::{end_to_end, EndToEndConfig, EndToEndReport};
pub use func::FuncSpec;
pub use plot::rate_plot_svg;
pub use rate::{
    fit_slope, noisy_sweep, rate_sweep, NoisyReport, RateRow, RateSweepConfig, RateTable, SlopeFit,
};
pub use transport_check::{transport_check, TransportReport};
