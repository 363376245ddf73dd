//! Total and local density of states of the infinite crystal.
//!
//! Convention: electric-field LDOS, modes normalised with unit ε-weighted mean
//! intensity, and the homogeneous vacuum value fixed at `1/π`. With that
//! choice `(1/L) ∫ ε(x) ρ(ω, x) dx = ρ(ω)` holds exactly.
//!
//! Bands of a lossless 1-D lattice never overlap, so at any in-band frequency
//! the mode expansion has a single term (the ±k pair).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::crystal::{check_frequency, group_velocity, UnitCell};
use crate::error::{Error, Result};
use crate::modes::ModeProfile;

pub const DEFAULT_ORACLE_LOSS: f64 = 1e-6;
pub const MAX_ORACLE_LOSS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdosValue {
    pub omega: f64,
    pub x: f64,
    pub rho: f64,
}

/// `ρ(ω) = (1/π) |dk/dω|`, counting both propagation directions per unit length.
pub fn dos_total(cell: &UnitCell, omega: f64) -> Result<f64> {
    Ok(1.0 / (PI * group_velocity(cell, omega)?))
}

/// LDOS at one frequency, cheap to evaluate at many positions.
#[derive(Debug, Clone)]
pub struct LdosProfile {
    dos: f64,
    mode: ModeProfile,
}

impl LdosProfile {
    pub fn new(cell: &UnitCell, omega: f64) -> Result<Self> {
        let dos = dos_total(cell, omega)?;
        let mode = ModeProfile::new(cell, omega)?;
        Ok(Self { dos, mode })
    }

    pub fn dos_total(&self) -> f64 {
        self.dos
    }

    pub fn at(&self, x: f64) -> LdosValue {
        LdosValue {
            omega: self.mode.omega(),
            x,
            rho: self.dos * self.mode.intensity_at(x),
        }
    }

    pub fn mode(&self) -> &ModeProfile {
        &self.mode
    }
}

/// `ρ(ω, x) = (1/π) |dk/dω| |E_k(x)|²`.
pub fn ldos_mode_expansion(cell: &UnitCell, omega: f64, x: f64) -> Result<LdosValue> {
    Ok(LdosProfile::new(cell, omega)?.at(x))
}

/// Infinite-crystal LDOS from the Green's function built out of the two
/// counter-propagating Bloch solutions: `ρ = (2ω/π) |E(x)|² / |W(E, Ē)|`.
///
/// Uses neither the mode normalisation nor `dk/dω`.
pub fn ldos_bloch_wronskian(cell: &UnitCell, omega: f64, x: f64) -> Result<f64> {
    let mode = ModeProfile::new(cell, omega)?;
    if mode.is_edge_mode() {
        return Err(Error::AtBandEdge { omega });
    }
    let [e, de] = mode.state_at(x);
    let w = e * de.conj() - de * e.conj();
    if !(w.norm() > 0.0) {
        return Err(Error::SingularWronskian { omega });
    }
    Ok(2.0 * omega * e.norm_sqr() / (PI * w.norm()))
}

/// Complex counterpart of [`crate::crystal::TransferMatrix`] for lossy frequencies.
#[derive(Debug, Clone, Copy)]
struct ComplexMatrix([[Complex64; 2]; 2]);

impl ComplexMatrix {
    fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self([[o, z], [z, o]])
    }

    fn propagation(n: f64, len: f64, omega: Complex64) -> Self {
        let q = omega * n;
        let (s, c) = ((q * len).sin(), (q * len).cos());
        Self([[c, s / q], [-q * s, c]])
    }

    fn mul(&self, r: &Self) -> Self {
        let (a, b) = (&self.0, &r.0);
        Self([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }

    fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let a = &self.0;
        [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
    }

    fn unimodular_inverse(&self) -> Self {
        let a = &self.0;
        Self([[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]])
    }
}

/// LDOS inside the central cell of an `n_periods`-cell stack surrounded by
/// vacuum, from `G(x, x) = E_L(x) E_R(x) / W` at the complex frequency
/// `ω(1 + i·loss)`.
///
/// `E_L` leaves the stack to the left as `e^{-iωx}`, `E_R` to the right as
/// `e^{+iωx}`. The result is `-(2/π) ω Im G(x, x)`, which equals `1/π` in
/// vacuum. The central cell is cell `⌊N/2⌋` (0-based).
pub fn ldos_greens_finite(
    cell: &UnitCell,
    n_periods: usize,
    omega: f64,
    x: f64,
    loss: f64,
) -> Result<f64> {
    check_frequency(omega)?;
    if n_periods == 0 {
        return Err(Error::InvalidArgument("period count must be at least 1".into()));
    }
    if !(0.0..=MAX_ORACLE_LOSS).contains(&loss) {
        return Err(Error::InvalidArgument(format!(
            "loss must lie in [0, {MAX_ORACLE_LOSS}], got {loss}"
        )));
    }
    let w = Complex64::new(omega, omega * loss);
    let segments = cell.segments();
    let x = cell.wrap(x);
    let cell_m = segments.iter().fold(ComplexMatrix::identity(), |acc, s| {
        ComplexMatrix::propagation(s.n, s.len, w).mul(&acc)
    });
    let centre = n_periods / 2;

    // Left solution: march forward to the start of the central cell, then to x.
    let mut left = [Complex64::new(1.0, 0.0), -Complex64::i() * w];
    for _ in 0..centre {
        left = cell_m.apply(left);
    }
    for s in &segments {
        if x <= s.end() {
            left = ComplexMatrix::propagation(s.n, x - s.start, w).apply(left);
            break;
        }
        left = ComplexMatrix::propagation(s.n, s.len, w).apply(left);
    }

    // Right solution: march backward to the end of the central cell, then to x.
    let mut right = [Complex64::new(1.0, 0.0), Complex64::i() * w];
    let back = cell_m.unimodular_inverse();
    for _ in 0..(n_periods - centre - 1) {
        right = back.apply(right);
    }
    for s in segments.iter().rev() {
        if x >= s.start {
            right = ComplexMatrix::propagation(s.n, -(s.end() - x), w).apply(right);
            break;
        }
        right = ComplexMatrix::propagation(s.n, -s.len, w).apply(right);
    }

    let wr = left[0] * right[1] - left[1] * right[0];
    let scale = (left[0] * right[1]).norm() + (left[1] * right[0]).norm();
    if !wr.is_finite() || !scale.is_finite() || wr.norm() <= 1e-14 * scale {
        return Err(Error::SingularWronskian { omega });
    }
    let g = left[0] * right[0] / wr;
    Ok(-(2.0 / PI) * omega * g.im)
}
