//! Experiment runners behind the `bandedge-ldos` binary.
//!
//! Subcommands: `fig1` (LDOS log-log curves, slopes and exponent summary),
//! `band-edges` (edge table) and `ldos-check` (mode expansion versus the
//! finite-stack Green's function). Exit codes: 0 success, 1 configuration
//! error, 2 numerical failure.

mod config;
mod run;

pub use config::{ExperimentConfig, DEFAULT_ORACLE_PERIODS, DEFAULT_POSITION_COUNT};
pub use run::{
    format_number, run_band_edges, run_fig1, run_ldos_check, CheckRow, Fig1Report, LdosCheckReport,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Numerical(#[from] crate::error::Error),

    #[error("max relative deviation {max_dev:.3e} exceeds bound {bound:.3e}")]
    CheckFailed { max_dev: f64, bound: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) | CliError::CheckFailed { .. } => 2,
        }
    }
}
