use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::crystal::{find_band_edges, find_gap, BandEdge, EdgeSide};
use crate::exponent::{analyse_position, EdgeApproach, PositionResult};
use crate::ldos::{ldos_greens_finite, ldos_mode_expansion};

use super::{CliError, ExperimentConfig};

/// 17 significant digits, round-trippable.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_csv(dir: &Path, name: &str, body: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), body)?;
    Ok(())
}

fn selected_edge(cfg: &ExperimentConfig) -> Result<BandEdge, CliError> {
    let cell = cfg.cell()?;
    let (lo, hi) = find_gap(&cell, cfg.gap)?;
    Ok(match cfg.side {
        EdgeSide::Lower => lo,
        EdgeSide::Upper => hi,
    })
}

#[derive(Debug, Clone)]
pub struct Fig1Report {
    pub edge: BandEdge,
    pub positions: Vec<PositionResult>,
}

impl Fig1Report {
    pub fn samples_csv(&self) -> String {
        let mut s = String::from("x,z,u,omega,rho,y\n");
        for p in &self.positions {
            for r in p.samples.iter().filter(|r| r.valid) {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    format_number(r.x),
                    format_number(r.z),
                    format_number(r.u),
                    format_number(r.omega),
                    format_number(r.rho),
                    format_number(r.y)
                );
            }
        }
        s
    }

    pub fn slopes_csv(&self) -> String {
        let mut s = String::from("x,z,dydz\n");
        for p in &self.positions {
            for r in &p.slopes {
                let _ = writeln!(
                    s,
                    "{},{},{}",
                    format_number(p.estimate.x),
                    format_number(r.z),
                    format_number(r.dydz)
                );
            }
        }
        s
    }

    pub fn summary_csv(&self) -> String {
        let mut s = String::from("x,eta_hat,K_hat,z_converged,converged\n");
        for p in &self.positions {
            let e = &p.estimate;
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                format_number(e.x),
                format_number(e.eta_hat),
                format_number(e.k_hat.unwrap_or(f64::NAN)),
                format_number(e.z_converged),
                e.converged
            );
        }
        s
    }
}

/// LDOS log-log curves at every configured position, their slopes and the
/// exponent summary. Writes `samples.csv`, `slopes.csv` and `summary.csv`.
pub fn run_fig1(cfg: &ExperimentConfig) -> Result<Fig1Report, CliError> {
    cfg.validate()?;
    let cell = cfg.cell()?;
    let edge = selected_edge(cfg)?;
    let z = cfg.z_values()?;
    let approach = EdgeApproach::from(&edge);
    let positions = cfg
        .positions
        .par_iter()
        .map(|&x| analyse_position(&cell, approach, x, &z, cfg.slope_tol))
        .collect::<Result<Vec<_>, _>>()?;
    let report = Fig1Report { edge, positions };
    write_csv(&cfg.out_dir, "samples.csv", &report.samples_csv())?;
    write_csv(&cfg.out_dir, "slopes.csv", &report.slopes_csv())?;
    write_csv(&cfg.out_dir, "summary.csv", &report.summary_csv())?;
    Ok(report)
}

pub fn edges_csv(edges: &[BandEdge]) -> String {
    let mut s = String::from("band_index,side,omega_c,k_edge\n");
    for e in edges {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            e.band_index,
            e.side,
            format_number(e.omega_c),
            format_number(e.k_edge)
        );
    }
    s
}

/// All edges below `omega_max`; writes `edges.csv`.
pub fn run_band_edges(cfg: &ExperimentConfig) -> Result<Vec<BandEdge>, CliError> {
    cfg.validate()?;
    let edges = find_band_edges(&cfg.cell()?, cfg.omega_max)?;
    write_csv(&cfg.out_dir, "edges.csv", &edges_csv(&edges))?;
    Ok(edges)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckRow {
    pub omega: f64,
    pub x: f64,
    pub rho_modes: f64,
    pub rho_greens: f64,
    pub rel_dev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LdosCheckReport {
    pub rows: Vec<CheckRow>,
    pub max_dev: f64,
    pub bound: f64,
}

impl LdosCheckReport {
    pub fn passed(&self) -> bool {
        self.max_dev <= self.bound
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("omega,x,rho_modes,rho_greens,rel_dev\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                format_number(r.omega),
                format_number(r.x),
                format_number(r.rho_modes),
                format_number(r.rho_greens),
                format_number(r.rel_dev)
            );
        }
        s
    }
}

/// Mode-expansion LDOS against the finite-stack Green's function at
/// `ω = ω_c(1 ∓ u)` for each configured `u` and position. Writes
/// `ldos_check.csv`. A deviation above the bound is reported in the returned
/// value, not as an error.
pub fn run_ldos_check(cfg: &ExperimentConfig) -> Result<LdosCheckReport, CliError> {
    cfg.validate()?;
    let cell = cfg.cell()?;
    let approach = EdgeApproach::from(&selected_edge(cfg)?);
    let points: Vec<(f64, f64)> = cfg
        .check_u
        .iter()
        .flat_map(|&u| cfg.check_positions.iter().map(move |&x| (approach.omega_at(u), x)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(omega, x)| {
            let rho_modes = ldos_mode_expansion(&cell, omega, x)?.rho;
            let rho_greens = ldos_greens_finite(&cell, cfg.oracle_periods, omega, x, cfg.oracle_loss)?;
            Ok(CheckRow {
                omega,
                x,
                rho_modes,
                rho_greens,
                rel_dev: (rho_greens / rho_modes - 1.0).abs(),
            })
        })
        .collect::<Result<Vec<_>, crate::error::Error>>()?;
    let max_dev = rows.iter().map(|r| r.rel_dev).fold(0.0, f64::max);
    let report = LdosCheckReport {
        rows,
        max_dev,
        bound: cfg.check_bound,
    };
    write_csv(&cfg.out_dir, "ldos_check.csv", &report.csv())?;
    Ok(report)
}
