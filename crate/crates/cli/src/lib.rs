//! Experiment runner: configuration files, seed sweeps and result files.

pub mod config;
pub mod output;
pub mod sweep;

pub use config::{parse_config, ConfigError, SimConfig};
pub use output::{
    render_chart, write_chart, write_run_files, write_series_csv, write_summary, write_sweep_files,
    ChartColumn, OutputError,
};
pub use sweep::{run_sweep, summarize, Summary, SweepOutcome};
