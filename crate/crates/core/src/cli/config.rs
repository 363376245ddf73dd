//! Line-oriented `key = value` experiment configuration.
//!
//! ```text
//! # first-gap lower edge of a quarter-wave stack
//! layer = 2.0, 0.25
//! layer = 1.0, 0.5
//! positions = 0, 0.125, 0.25
//! z_min = -7
//! ```
//!
//! Repeated `layer = n, d` lines build the unit cell; the first one replaces
//! the default cell. Lists are comma separated. `#` starts a comment.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::crystal::{EdgeSide, Layer, UnitCell};
use crate::exponent::{z_grid, DEFAULT_SLOPE_TOL, DEFAULT_Z_MAX, DEFAULT_Z_MIN, DEFAULT_Z_STEPS};
use crate::ldos::{DEFAULT_ORACLE_LOSS, MAX_ORACLE_LOSS};

use super::CliError;

pub const DEFAULT_POSITION_COUNT: usize = 8;
pub const DEFAULT_ORACLE_PERIODS: usize = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub layers: Vec<Layer>,
    /// 1-based index of the gap whose edge is approached.
    pub gap: usize,
    pub side: EdgeSide,
    pub positions: Vec<f64>,
    pub z_min: f64,
    pub z_max: f64,
    pub z_steps: usize,
    pub slope_tol: f64,
    pub oracle_periods: usize,
    pub oracle_loss: f64,
    /// Upper scan limit for `band-edges`.
    pub omega_max: f64,
    /// Relative detunings of the LDOS cross-check frequencies.
    pub check_u: Vec<f64>,
    pub check_positions: Vec<f64>,
    /// Largest relative deviation `ldos-check` accepts.
    pub check_bound: f64,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            layers: UnitCell::default_crystal().layers().to_vec(),
            gap: 1,
            side: EdgeSide::Lower,
            // Uniform over half the cell, stopping one step short of the
            // air-centre node.
            positions: (0..DEFAULT_POSITION_COUNT)
                .map(|i| 0.5 * i as f64 / DEFAULT_POSITION_COUNT as f64)
                .collect(),
            z_min: DEFAULT_Z_MIN,
            z_max: DEFAULT_Z_MAX,
            z_steps: DEFAULT_Z_STEPS,
            slope_tol: DEFAULT_SLOPE_TOL,
            oracle_periods: DEFAULT_ORACLE_PERIODS,
            oracle_loss: DEFAULT_ORACLE_LOSS,
            omega_max: 10.0,
            check_u: vec![0.5, 0.3, 0.15, 0.05, 0.02],
            check_positions: vec![0.0, 0.25],
            check_bound: 0.02,
            out_dir: PathBuf::from("out"),
        }
    }
}

fn parse_num<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T, CliError> {
    v.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("line {line}: cannot parse '{v}' for '{key}'")))
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    v.split(',').map(|p| parse_num(line, key, p)).collect()
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut custom_layers: Option<Vec<Layer>> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {line}: expected 'key = value'")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "layer" => {
                    let v = parse_list(line, key, value)?;
                    if v.len() != 2 {
                        return Err(CliError::Config(format!(
                            "line {line}: 'layer' takes 'n, d'"
                        )));
                    }
                    let layer = Layer::new(v[0], v[1])
                        .map_err(|e| CliError::Config(format!("line {line}: {e}")))?;
                    custom_layers.get_or_insert_with(Vec::new).push(layer);
                }
                "gap" => cfg.gap = parse_num(line, key, value)?,
                "side" => {
                    cfg.side = value
                        .parse()
                        .map_err(|e| CliError::Config(format!("line {line}: {e}")))?
                }
                "positions" => cfg.positions = parse_list(line, key, value)?,
                "z_min" => cfg.z_min = parse_num(line, key, value)?,
                "z_max" => cfg.z_max = parse_num(line, key, value)?,
                "z_steps" => cfg.z_steps = parse_num(line, key, value)?,
                "slope_tol" => cfg.slope_tol = parse_num(line, key, value)?,
                "oracle_periods" => cfg.oracle_periods = parse_num(line, key, value)?,
                "oracle_loss" => cfg.oracle_loss = parse_num(line, key, value)?,
                "omega_max" => cfg.omega_max = parse_num(line, key, value)?,
                "check_u" => cfg.check_u = parse_list(line, key, value)?,
                "check_positions" => cfg.check_positions = parse_list(line, key, value)?,
                "check_bound" => cfg.check_bound = parse_num(line, key, value)?,
                "out_dir" => cfg.out_dir = PathBuf::from(value),
                other => {
                    return Err(CliError::Config(format!("line {line}: unknown key '{other}'")))
                }
            }
        }
        if let Some(layers) = custom_layers {
            cfg.layers = layers;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        self.cell()?;
        if self.gap == 0 {
            return bad("gap index is 1-based".into());
        }
        if self.positions.is_empty() || self.positions.iter().any(|x| !x.is_finite()) {
            return bad("positions must be a non-empty list of finite numbers".into());
        }
        z_grid(self.z_min, self.z_max, self.z_steps)
            .map_err(|e| CliError::Config(e.to_string()))?;
        if !(self.slope_tol > 0.0) {
            return bad(format!("slope_tol must be positive, got {}", self.slope_tol));
        }
        if self.oracle_periods == 0 {
            return bad("oracle_periods must be at least 1".into());
        }
        if !(0.0..=MAX_ORACLE_LOSS).contains(&self.oracle_loss) {
            return bad(format!(
                "oracle_loss must lie in [0, {MAX_ORACLE_LOSS}], got {}",
                self.oracle_loss
            ));
        }
        if !(self.omega_max.is_finite() && self.omega_max > 0.0) {
            return bad(format!("omega_max must be positive, got {}", self.omega_max));
        }
        if self.check_u.iter().any(|u| !(*u > 0.0 && *u < 1.0)) {
            return bad("check_u values must lie in (0, 1)".into());
        }
        if self.check_positions.iter().any(|x| !x.is_finite()) {
            return bad("check_positions must be finite".into());
        }
        if !(self.check_bound > 0.0) {
            return bad(format!("check_bound must be positive, got {}", self.check_bound));
        }
        Ok(())
    }

    pub fn cell(&self) -> Result<UnitCell, CliError> {
        UnitCell::new(self.layers.clone()).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn z_values(&self) -> Result<Vec<f64>, CliError> {
        z_grid(self.z_min, self.z_max, self.z_steps).map_err(|e| CliError::Config(e.to_string()))
    }
}
