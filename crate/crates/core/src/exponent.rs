//! Band-edge exponent extraction from log-log slope curves.
//!
//! Near an edge `ω_c` the LDOS behaves as `ρ(ω, x) = K(x) |ω_c - ω|^η`. With
//! `u = 1 - ω/ω_c` (lower edge) or `u = ω/ω_c - 1` (upper edge),
//! `y = log₁₀ ρ = η (log₁₀ u + log₁₀ ω_c) + log₁₀ K`, so the slope of `y`
//! against `z = log₁₀ u` tends to `η` as `z → -∞`.

use crate::crystal::{BandEdge, EdgeSide, UnitCell};
use crate::error::{Error, Result};
use crate::ldos::LdosProfile;

pub const DEFAULT_Z_MIN: f64 = -8.0;
pub const DEFAULT_Z_MAX: f64 = -1.0;
pub const DEFAULT_Z_STEPS: usize = 71;
pub const DEFAULT_SLOPE_TOL: f64 = 0.02;

/// Width in `z` of the tail that must stay flat for an estimate to converge.
pub const CONVERGENCE_WINDOW: f64 = 1.0;

/// Which edge is approached, and from which side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeApproach {
    pub omega_c: f64,
    pub side: EdgeSide,
}

impl EdgeApproach {
    pub fn new(omega_c: f64, side: EdgeSide) -> Self {
        Self { omega_c, side }
    }

    pub fn lower(omega_c: f64) -> Self {
        Self::new(omega_c, EdgeSide::Lower)
    }

    /// Frequency at relative detuning `u`: `ω_c(1 - u)` below a lower edge,
    /// `ω_c(1 + u)` above an upper one.
    pub fn omega_at(&self, u: f64) -> f64 {
        match self.side {
            EdgeSide::Lower => self.omega_c * (1.0 - u),
            EdgeSide::Upper => self.omega_c * (1.0 + u),
        }
    }
}

impl From<&BandEdge> for EdgeApproach {
    fn from(e: &BandEdge) -> Self {
        Self::new(e.omega_c, e.side)
    }
}

/// Argument handed to an LDOS evaluator: the frequency and its distance
/// `|ω - ω_c| = ω_c u` from the edge, the latter formed without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detuning {
    pub omega: f64,
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogSample {
    pub x: f64,
    pub z: f64,
    pub u: f64,
    pub omega: f64,
    pub rho: f64,
    pub y: f64,
    /// False when the evaluator failed (e.g. the frequency left the band).
    pub valid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopePoint {
    pub z: f64,
    pub dydz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentEstimate {
    pub x: f64,
    pub eta_hat: f64,
    pub k_hat: Option<f64>,
    pub z_converged: f64,
    pub converged: bool,
}

/// `steps` values from `z_max` down to `z_min`, uniformly spaced.
pub fn z_grid(z_min: f64, z_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(z_min.is_finite() && z_max.is_finite() && z_min < z_max && z_max < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need z_min < z_max < 0, got [{z_min}, {z_max}]"
        )));
    }
    if steps < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 z steps, got {steps}"
        )));
    }
    let h = (z_max - z_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { z_min } else { z_max - i as f64 * h })
        .collect())
}

/// Evaluates `rho_fn` at `ω = ω_c(1 ∓ 10^z)` for each `z`.
pub fn sample_loglog<F>(
    x: f64,
    approach: EdgeApproach,
    z_values: &[f64],
    mut rho_fn: F,
) -> Result<Vec<LogLogSample>>
where
    F: FnMut(Detuning) -> Result<f64>,
{
    if !(approach.omega_c.is_finite() && approach.omega_c > 0.0) {
        return Err(Error::NonPositiveFrequency(approach.omega_c));
    }
    z_values
        .iter()
        .map(|&z| {
            if !(z.is_finite() && z < 0.0) {
                return Err(Error::InvalidArgument(format!("z must be negative, got {z}")));
            }
            let u = 10f64.powf(z);
            let omega = approach.omega_at(u);
            let offset = approach.omega_c * u;
            let (rho, valid) = match rho_fn(Detuning { omega, offset }) {
                Ok(r) if r.is_finite() && r > 0.0 => (r, true),
                _ => (f64::NAN, false),
            };
            Ok(LogLogSample {
                x,
                z,
                u,
                omega,
                rho,
                y: rho.log10(),
                valid,
            })
        })
        .collect()
}

/// Log-log samples of the mode-expansion LDOS of `cell` at position `x`.
pub fn sample_ldos_loglog(
    cell: &UnitCell,
    approach: EdgeApproach,
    x: f64,
    z_values: &[f64],
) -> Result<Vec<LogLogSample>> {
    sample_loglog(x, approach, z_values, |d| {
        Ok(LdosProfile::new(cell, d.omega)?.at(x).rho)
    })
}

/// `dy/dz` by centred differences inside, one-sided differences at the ends.
/// Invalid samples are skipped.
pub fn slope_curve(samples: &[LogLogSample]) -> Result<Vec<SlopePoint>> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.valid)
        .map(|s| (s.z, s.y))
        .collect();
    let distinct = pts.windows(2).all(|w| w[0].0 != w[1].0);
    if pts.len() < 3 || !distinct {
        return Err(Error::TooFewSamples(pts.len()));
    }
    let n = pts.len();
    let diff = |a: (f64, f64), b: (f64, f64)| (b.1 - a.1) / (b.0 - a.0);
    Ok((0..n)
        .map(|i| {
            let dydz = match i {
                0 => diff(pts[0], pts[1]),
                _ if i == n - 1 => diff(pts[n - 2], pts[n - 1]),
                _ => diff(pts[i - 1], pts[i + 1]),
            };
            SlopePoint { z: pts[i].0, dydz }
        })
        .collect())
}

/// Reads off the asymptotic exponent from a slope curve ordered by
/// decreasing `z`.
///
/// `eta_hat` is the slope at the most negative `z`. `z_converged` is the
/// largest `z` from which every later slope stays within `tol` of it; the
/// estimate counts as converged when that tail spans at least
/// [`CONVERGENCE_WINDOW`] decades. On a unit-spaced grid this is the test
/// `|slope(z_min) - slope(z_min + 1)| < tol`.
pub fn estimate_eta(x: f64, slopes: &[SlopePoint], tol: f64) -> Result<ExponentEstimate> {
    let n = slopes.len();
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    if slopes.windows(2).any(|w| w[1].z >= w[0].z) {
        return Err(Error::InvalidArgument(
            "slopes must be sorted by decreasing z".into(),
        ));
    }
    let z_min = slopes[n - 1].z;
    let eta_hat = slopes[n - 1].dydz;
    let z_converged = slopes
        .iter()
        .rev()
        .take_while(|s| (s.dydz - eta_hat).abs() < tol)
        .last()
        .map_or(z_min, |s| s.z);
    let converged = z_converged - z_min >= CONVERGENCE_WINDOW - 1e-9;
    Ok(ExponentEstimate {
        x,
        eta_hat,
        k_hat: None,
        z_converged,
        converged,
    })
}

/// `K̂ = 10^{ȳ - η(z̄ + log₁₀ ω_c)}` with the means over the converged tail
/// `z ≤ z_converged`.
pub fn prefactor_k(
    samples: &[LogLogSample],
    estimate: &ExponentEstimate,
    omega_c: f64,
) -> Result<f64> {
    if !estimate.converged {
        return Err(Error::Unconverged);
    }
    let tail: Vec<&LogLogSample> = samples
        .iter()
        .filter(|s| s.valid && s.z <= estimate.z_converged)
        .collect();
    if tail.is_empty() {
        return Err(Error::TooFewSamples(0));
    }
    let m = tail.len() as f64;
    let y_bar = tail.iter().map(|s| s.y).sum::<f64>() / m;
    let z_bar = tail.iter().map(|s| s.z).sum::<f64>() / m;
    Ok(10f64.powf(y_bar - estimate.eta_hat * (z_bar + omega_c.log10())))
}

/// Everything computed for one position.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionResult {
    pub samples: Vec<LogLogSample>,
    pub slopes: Vec<SlopePoint>,
    pub estimate: ExponentEstimate,
}

/// Samples, slopes, exponent and (when converged) prefactor at `x`.
pub fn analyse_position(
    cell: &UnitCell,
    approach: EdgeApproach,
    x: f64,
    z_values: &[f64],
    tol: f64,
) -> Result<PositionResult> {
    let samples = sample_ldos_loglog(cell, approach, x, z_values)?;
    let slopes = slope_curve(&samples)?;
    let mut estimate = estimate_eta(x, &slopes, tol)?;
    if estimate.converged {
        estimate.k_hat = Some(prefactor_k(&samples, &estimate, approach.omega_c)?);
    }
    Ok(PositionResult {
        samples,
        slopes,
        estimate,
    })
}
