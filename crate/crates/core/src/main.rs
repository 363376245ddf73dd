use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bandedge_ldos::cli::{
    format_number, run_band_edges, run_fig1, run_ldos_check, CliError, ExperimentConfig,
};

#[derive(Debug, Parser)]
#[command(name = "bandedge-ldos", version, about = "Band-edge LDOS exponents of 1-D photonic crystals")]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// key = value configuration file; defaults apply to missing keys
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides out_dir from the config)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for per-position and per-point sweeps
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// LDOS log-log curves, slopes and exponent summary near a band edge
    Fig1,
    /// Table of band edges below omega_max
    BandEdges,
    /// Compare mode-expansion LDOS with the finite-stack Green's function
    LdosCheck,
}

fn run(args: Args) -> Result<(), CliError> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = args.out {
        cfg.out_dir = out;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;

    pool.install(|| match args.command {
        Command::Fig1 => {
            let report = run_fig1(&cfg)?;
            println!(
                "edge: gap {} {} omega_c = {}",
                report.edge.gap_index,
                report.edge.side,
                format_number(report.edge.omega_c)
            );
            println!("{:>10} {:>12} {:>14} {:>12} {:>9}", "x", "eta_hat", "K_hat", "z_conv", "converged");
            for p in &report.positions {
                let e = &p.estimate;
                println!(
                    "{:>10.6} {:>12.6} {:>14.6e} {:>12.3} {:>9}",
                    e.x,
                    e.eta_hat,
                    e.k_hat.unwrap_or(f64::NAN),
                    e.z_converged,
                    e.converged
                );
            }
            Ok(())
        }
        Command::BandEdges => {
            let edges = run_band_edges(&cfg)?;
            println!("{:>10} {:>6} {:>24} {:>24}", "band_index", "side", "omega_c", "k_edge");
            for e in &edges {
                println!(
                    "{:>10} {:>6} {:>24} {:>24}",
                    e.band_index,
                    e.side,
                    format_number(e.omega_c),
                    format_number(e.k_edge)
                );
            }
            Ok(())
        }
        Command::LdosCheck => {
            let report = run_ldos_check(&cfg)?;
            for r in &report.rows {
                println!(
                    "omega = {:.8} x = {:.4} modes = {:.8e} greens = {:.8e} dev = {:.3e}",
                    r.omega, r.x, r.rho_modes, r.rho_greens, r.rel_dev
                );
            }
            println!("max relative deviation: {:.6e} (bound {:.3e})", report.max_dev, report.bound);
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::CheckFailed {
                    max_dev: report.max_dev,
                    bound: report.bound,
                })
            }
        }
    })
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
