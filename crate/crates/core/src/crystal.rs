//! Periodic layered stacks: transfer matrices, the Bloch dispersion relation
//! `cos(kL) = t(ω)`, band-edge search and group velocity.
//!
//! Units: `c = 1`, lengths in units of the lattice constant, frequencies in
//! units of `c/L`. The first layer of a cell is centred at `x = 0`; the cell
//! occupies `[0, L)` with that layer split across both ends.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `| |t| - 1 |` below this counts as sitting on a band edge.
pub(crate) const EDGE_TOL: f64 = 1e-11;

/// Gaps whose peak `|t| - 1` stays below this are degenerate touchings.
const ZERO_GAP_TOL: f64 = 1e-10;

/// Relative width at which edge bisection stops.
const EDGE_REL_TOL: f64 = 1e-14;

/// A homogeneous, lossless, nondispersive slab.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    /// Refractive index.
    pub n: f64,
    /// Thickness.
    pub d: f64,
}

impl Layer {
    pub fn new(n: f64, d: f64) -> Result<Self> {
        if !(n.is_finite() && n >= 1.0 && d.is_finite() && d > 0.0) {
            return Err(Error::InvalidLayer { n, d });
        }
        Ok(Self { n, d })
    }

    pub fn permittivity(&self) -> f64 {
        self.n * self.n
    }
}

/// A contiguous piece of the unit cell laid out on `[0, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub len: f64,
    pub n: f64,
}

impl Segment {
    pub fn end(&self) -> f64 {
        self.start + self.len
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitCell {
    layers: Vec<Layer>,
    period: f64,
}

impl UnitCell {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::EmptyCell);
        }
        for l in &layers {
            Layer::new(l.n, l.d)?;
        }
        let period = layers.iter().map(|l| l.d).sum();
        Ok(Self { layers, period })
    }

    /// Dielectric slab `n = 2, d = 0.25` centred at `x = 0`, air `n = 1,
    /// d = 0.75` centred at `x = 0.5`.
    pub fn default_crystal() -> Self {
        Self {
            layers: vec![Layer { n: 2.0, d: 0.25 }, Layer { n: 1.0, d: 0.75 }],
            period: 1.0,
        }
    }

    /// Single-layer cell of unit length.
    pub fn homogeneous(n: f64) -> Result<Self> {
        Self::new(vec![Layer::new(n, 1.0)?])
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Lattice constant `L`.
    pub fn period(&self) -> f64 {
        self.period
    }

    /// Multiplies every thickness by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(
            self.layers
                .iter()
                .map(|l| Layer { n: l.n, d: l.d * s })
                .collect(),
        )
    }

    pub fn optical_length(&self) -> f64 {
        self.layers.iter().map(|l| l.n * l.d).sum()
    }

    pub fn min_index(&self) -> f64 {
        self.layers.iter().map(|l| l.n).fold(f64::INFINITY, f64::min)
    }

    /// Maps any position into `[0, L)`.
    pub fn wrap(&self, x: f64) -> f64 {
        let w = x.rem_euclid(self.period);
        if w >= self.period {
            0.0
        } else {
            w
        }
    }

    /// The cell on `[0, L)`: second half of the first layer, the remaining
    /// layers, then the first half of the first layer.
    pub fn segments(&self) -> Vec<Segment> {
        let first = self.layers[0];
        let mut out = Vec::with_capacity(self.layers.len() + 1);
        let mut start = 0.0;
        let mut push = |n: f64, len: f64| {
            out.push(Segment { start, len, n });
            start += len;
        };
        push(first.n, 0.5 * first.d);
        for l in &self.layers[1..] {
            push(l.n, l.d);
        }
        push(first.n, 0.5 * first.d);
        out
    }

    /// Index of the segment containing `x` (already wrapped into `[0, L)`).
    pub(crate) fn segment_index(segments: &[Segment], x: f64) -> usize {
        segments
            .iter()
            .position(|s| x < s.end())
            .unwrap_or(segments.len() - 1)
    }

    pub fn index_at(&self, x: f64) -> f64 {
        let segs = self.segments();
        segs[Self::segment_index(&segs, self.wrap(x))].n
    }

    pub fn permittivity_at(&self, x: f64) -> f64 {
        let n = self.index_at(x);
        n * n
    }
}

/// Real 2×2 matrix mapping `(E, dE/dx)` across a region at fixed frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl TransferMatrix {
    pub const IDENTITY: Self = Self {
        m11: 1.0,
        m12: 0.0,
        m21: 0.0,
        m22: 1.0,
    };

    /// Propagation through a homogeneous region of index `n` and length `len`.
    pub fn propagation(n: f64, len: f64, omega: f64) -> Self {
        let q = n * omega;
        let (s, c) = (q * len).sin_cos();
        Self {
            m11: c,
            m12: s / q,
            m21: -q * s,
            m22: c,
        }
    }

    /// `d/dω` of [`TransferMatrix::propagation`].
    fn propagation_derivative(n: f64, len: f64, omega: f64) -> Self {
        let q = n * omega;
        let (s, c) = (q * len).sin_cos();
        // d/dq, then chain rule dq/dω = n
        Self {
            m11: -len * s * n,
            m12: (len * c / q - s / (q * q)) * n,
            m21: (-s - q * len * c) * n,
            m22: -len * s * n,
        }
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn half_trace(&self) -> f64 {
        0.5 * self.trace()
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m11 * v[0] + self.m12 * v[1],
            self.m21 * v[0] + self.m22 * v[1],
        ]
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Self {
        Self {
            m11: self.m22,
            m12: -self.m12,
            m21: -self.m21,
            m22: self.m11,
        }
    }
}

impl Mul for TransferMatrix {
    type Output = Self;

    fn mul(self, r: Self) -> Self {
        Self {
            m11: self.m11 * r.m11 + self.m12 * r.m21,
            m12: self.m11 * r.m12 + self.m12 * r.m22,
            m21: self.m21 * r.m11 + self.m22 * r.m21,
            m22: self.m21 * r.m12 + self.m22 * r.m22,
        }
    }
}

impl std::ops::Add for TransferMatrix {
    type Output = Self;

    fn add(self, r: Self) -> Self {
        Self {
            m11: self.m11 + r.m11,
            m12: self.m12 + r.m12,
            m21: self.m21 + r.m21,
            m22: self.m22 + r.m22,
        }
    }
}

pub(crate) fn check_frequency(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveFrequency(omega))
    }
}

pub fn layer_matrix(layer: &Layer, omega: f64) -> Result<TransferMatrix> {
    check_frequency(omega)?;
    Ok(TransferMatrix::propagation(layer.n, layer.d, omega))
}

/// Product of the layer matrices in order (first layer applied first).
pub fn cell_matrix(cell: &UnitCell, omega: f64) -> Result<TransferMatrix> {
    check_frequency(omega)?;
    Ok(cell
        .layers
        .iter()
        .fold(TransferMatrix::IDENTITY, |acc, l| {
            TransferMatrix::propagation(l.n, l.d, omega) * acc
        }))
}

/// Transfer matrix of the cell laid out on `[0, L)` (see [`UnitCell::segments`]).
pub fn origin_cell_matrix(cell: &UnitCell, omega: f64) -> Result<TransferMatrix> {
    check_frequency(omega)?;
    Ok(cell
        .segments()
        .iter()
        .fold(TransferMatrix::IDENTITY, |acc, s| {
            TransferMatrix::propagation(s.n, s.len, omega) * acc
        }))
}

pub fn cell_half_trace(cell: &UnitCell, omega: f64) -> Result<f64> {
    Ok(cell_matrix(cell, omega)?.half_trace())
}

/// Half-trace `t` and its frequency derivative `dt/dω`, the latter by the
/// product rule over the layer matrices.
pub fn half_trace_with_derivative(cell: &UnitCell, omega: f64) -> Result<(f64, f64)> {
    check_frequency(omega)?;
    let (m, dm) = cell.layers.iter().fold(
        (TransferMatrix::IDENTITY, TransferMatrix {
            m11: 0.0,
            m12: 0.0,
            m21: 0.0,
            m22: 0.0,
        }),
        |(m, dm), l| {
            let p = TransferMatrix::propagation(l.n, l.d, omega);
            let dp = TransferMatrix::propagation_derivative(l.n, l.d, omega);
            (p * m, dp * m + p * dm)
        },
    );
    Ok((m.half_trace(), dm.half_trace()))
}

/// Bloch wavenumber in `[0, π/L]`, or `None` inside a gap.
pub fn dispersion_k(cell: &UnitCell, omega: f64) -> Result<Option<f64>> {
    let t = cell_half_trace(cell, omega)?;
    if t.abs() > 1.0 {
        return Ok(None);
    }
    Ok(Some(t.acos() / cell.period))
}

/// `dω/dk = L·√((1-t)(1+t)) / |dt/dω|`.
pub fn group_velocity(cell: &UnitCell, omega: f64) -> Result<f64> {
    let (t, dt) = half_trace_with_derivative(cell, omega)?;
    if t.abs() > 1.0 {
        return Err(Error::InGap {
            omega,
            half_trace_abs: t.abs(),
        });
    }
    let s2 = (1.0 - t) * (1.0 + t);
    if s2 <= 0.0 || dt == 0.0 {
        return Err(Error::AtBandEdge { omega });
    }
    Ok(cell.period * s2.sqrt() / dt.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeSide {
    /// Lower edge of a gap: top of the band below it.
    Lower,
    /// Upper edge of a gap: bottom of the band above it.
    Upper,
}

impl fmt::Display for EdgeSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeSide::Lower => "lower",
            EdgeSide::Upper => "upper",
        })
    }
}

impl FromStr for EdgeSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lower" => Ok(EdgeSide::Lower),
            "upper" => Ok(EdgeSide::Upper),
            other => Err(Error::InvalidArgument(format!(
                "edge side must be 'lower' or 'upper', got '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandEdge {
    /// 1-based index of the band this edge bounds, counted in Brillouin-zone
    /// order (degenerate touchings still separate bands).
    pub band_index: usize,
    /// 1-based index of the adjacent gap among gaps of nonzero width.
    pub gap_index: usize,
    pub side: EdgeSide,
    pub omega_c: f64,
    /// 0 or π/L.
    pub k_edge: f64,
}

struct ScanPoint {
    omega: f64,
    t: f64,
    dt: f64,
}

impl ScanPoint {
    fn at(cell: &UnitCell, omega: f64) -> Result<Self> {
        let (t, dt) = half_trace_with_derivative(cell, omega)?;
        Ok(Self { omega, t, dt })
    }

    fn in_gap(&self) -> bool {
        self.t.abs() > 1.0
    }
}

/// Default scan step: `π / (64 · Σ nᵢdᵢ)`, i.e. 64 samples per half
/// Brillouin zone of optical phase.
pub fn default_scan_step(cell: &UnitCell) -> f64 {
    PI / (64.0 * cell.optical_length())
}

pub fn find_band_edges(cell: &UnitCell, omega_max: f64) -> Result<Vec<BandEdge>> {
    find_band_edges_with_step(cell, omega_max, default_scan_step(cell))
}

/// Scans `|t| - 1` on a uniform grid of spacing `step` over `(0, omega_max]`,
/// brackets each sign change and bisects it. The edge returned is the
/// in-band end of the final bracket.
pub fn find_band_edges_with_step(
    cell: &UnitCell,
    omega_max: f64,
    step: f64,
) -> Result<Vec<BandEdge>> {
    check_frequency(omega_max)?;
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scan step must be positive, got {step}"
        )));
    }
    let n_steps = (omega_max / step).ceil() as usize;
    let mut edges = Vec::new();
    // Zone boundaries (gaps and touchings) crossed so far.
    let mut boundaries = 0usize;
    let mut gaps = 0usize;

    let mut prev = ScanPoint::at(cell, step.min(omega_max))?;
    for i in 2..=n_steps.max(1) {
        let omega = (i as f64 * step).min(omega_max);
        let cur = ScanPoint::at(cell, omega)?;
        match (prev.in_gap(), cur.in_gap()) {
            (false, true) => {
                let omega_c = bisect_edge(cell, prev.omega, cur.omega)?;
                gaps += 1;
                edges.push(make_edge(cell, omega_c, boundaries + 1, gaps, EdgeSide::Lower)?);
                boundaries += 1;
            }
            (true, false) => {
                let omega_c = bisect_edge(cell, cur.omega, prev.omega)?;
                edges.push(make_edge(cell, omega_c, boundaries + 1, gaps, EdgeSide::Upper)?);
            }
            (false, false) => {
                // t is monotonic inside a band; an extremum means the band
                // ended and restarted between two scan points.
                if prev.dt * cur.dt < 0.0 {
                    let peak = bisect_stationary(cell, prev.omega, cur.omega)?;
                    if peak.t.abs() - 1.0 > ZERO_GAP_TOL {
                        return Err(Error::ScanResolution {
                            lo: prev.omega,
                            hi: cur.omega,
                        });
                    }
                    boundaries += 1;
                }
            }
            (true, true) => {
                // A whole band hidden inside one step flips the sign of t.
                if prev.t * cur.t < 0.0 {
                    return Err(Error::ScanResolution {
                        lo: prev.omega,
                        hi: cur.omega,
                    });
                }
            }
        }
        prev = cur;
    }
    Ok(edges)
}

fn make_edge(
    cell: &UnitCell,
    omega_c: f64,
    band_index: usize,
    gap_index: usize,
    side: EdgeSide,
) -> Result<BandEdge> {
    let t = cell_half_trace(cell, omega_c)?;
    let k_edge = if t > 0.0 { 0.0 } else { PI / cell.period };
    Ok(BandEdge {
        band_index,
        gap_index,
        side,
        omega_c,
        k_edge,
    })
}

/// Bisection on `|t| - 1` given `band` in a band and `gap` in a gap.
fn bisect_edge(cell: &UnitCell, mut band: f64, mut gap: f64) -> Result<f64> {
    while (gap - band).abs() > EDGE_REL_TOL * band.abs().max(gap.abs()) {
        let mid = 0.5 * (band + gap);
        if mid == band || mid == gap {
            break;
        }
        if cell_half_trace(cell, mid)?.abs() > 1.0 {
            gap = mid;
        } else {
            band = mid;
        }
    }
    Ok(band)
}

/// Locates the zero of `dt/dω` between two points of opposite slope.
fn bisect_stationary(cell: &UnitCell, mut lo: f64, mut hi: f64) -> Result<ScanPoint> {
    let lo_sign = ScanPoint::at(cell, lo)?.dt.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if ScanPoint::at(cell, mid)?.dt.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ScanPoint::at(cell, 0.5 * (lo + hi))
}

/// Upper frequency bound that contains gap `gap_index` completely.
pub fn search_limit_for_gap(cell: &UnitCell, gap_index: usize) -> f64 {
    // The top of band j sits at k = jπ/L and ω ≤ k / n_min.
    (gap_index as f64 + 2.0) * PI / (cell.min_index() * cell.period)
}

/// The two edges of the `gap_index`-th (1-based) nonzero-width gap.
pub fn find_gap(cell: &UnitCell, gap_index: usize) -> Result<(BandEdge, BandEdge)> {
    if gap_index == 0 {
        return Err(Error::InvalidArgument("gap index is 1-based".into()));
    }
    let omega_max = search_limit_for_gap(cell, gap_index);
    let edges = find_band_edges(cell, omega_max)?;
    let lower = edges
        .iter()
        .find(|e| e.gap_index == gap_index && e.side == EdgeSide::Lower);
    let upper = edges
        .iter()
        .find(|e| e.gap_index == gap_index && e.side == EdgeSide::Upper);
    match (lower, upper) {
        (Some(l), Some(u)) => Ok((*l, *u)),
        _ => Err(Error::NoBandGap { omega_max }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter_wave() -> UnitCell {
        UnitCell::new(vec![Layer::new(2.0, 0.25).unwrap(), Layer::new(1.0, 0.5).unwrap()]).unwrap()
    }

    /// sin²θ = 8/9 at the first-gap edges of the n = 2 : 1 quarter-wave cell
    /// with nᵢdᵢ = 1/2, so ω = 2θ and 2(π - θ).
    fn closed_form_quarter_wave_edges() -> (f64, f64) {
        let theta = (8.0f64 / 9.0).sqrt().asin();
        (2.0 * theta, 2.0 * (PI - theta))
    }

    #[test]
    fn layer_rejects_bad_parameters() {
        assert!(Layer::new(0.5, 1.0).is_err());
        assert!(Layer::new(1.0, 0.0).is_err());
        assert!(Layer::new(f64::NAN, 1.0).is_err());
        assert!(UnitCell::new(vec![]).is_err());
    }

    #[test]
    fn full_and_half_period_phases() {
        let vac = Layer::new(1.0, 1.0).unwrap();
        let m = layer_matrix(&vac, 2.0 * PI).unwrap();
        assert!((m.m11 - 1.0).abs() < 1e-12 && (m.m22 - 1.0).abs() < 1e-12);
        assert!(m.m12.abs() < 1e-12 && m.m21.abs() < 1e-12);
        let m = layer_matrix(&vac, PI).unwrap();
        assert!((m.m11 + 1.0).abs() < 1e-12 && (m.m22 + 1.0).abs() < 1e-12);
        assert!(m.m12.abs() < 1e-12 && m.m21.abs() < 1e-12);
    }

    #[test]
    fn nonpositive_frequency_is_rejected() {
        let vac = Layer::new(1.0, 1.0).unwrap();
        assert_eq!(layer_matrix(&vac, 0.0), Err(Error::NonPositiveFrequency(0.0)));
        assert!(layer_matrix(&vac, -1.0).is_err());
        assert!(cell_half_trace(&UnitCell::default_crystal(), -2.0).is_err());
    }

    #[test]
    fn homogeneous_half_trace() {
        let cell = UnitCell::homogeneous(1.0).unwrap();
        assert!((cell_half_trace(&cell, PI).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn long_wavelength_limit() {
        let cell = UnitCell::default_crystal();
        let t = cell_half_trace(&cell, 1e-6).unwrap();
        assert!((t - 1.0).abs() < 1e-10);
    }

    #[test]
    fn quarter_wave_edge_has_half_trace_minus_one() {
        let (lo, _) = closed_form_quarter_wave_edges();
        assert!((lo - 2.4619188).abs() < 1e-6);
        let t = cell_half_trace(&quarter_wave(), lo).unwrap();
        assert!((t + 1.0).abs() < 1e-9, "t = {t}");
    }

    #[test]
    fn quarter_wave_first_gap_matches_closed_form() {
        let (lo, hi) = closed_form_quarter_wave_edges();
        let edges = find_band_edges(&quarter_wave(), 5.0).unwrap();
        assert_eq!(edges.len(), 2);
        assert!((edges[0].omega_c - lo).abs() < 1e-6);
        assert!((edges[1].omega_c - hi).abs() < 1e-6);
        // bisection is to 1e-14 relative
        assert!((edges[0].omega_c - lo).abs() < 1e-12);
        assert!((edges[1].omega_c - hi).abs() < 1e-12);
        assert_eq!(edges[0].side, EdgeSide::Lower);
        assert_eq!(edges[1].side, EdgeSide::Upper);
        assert_eq!((edges[0].band_index, edges[1].band_index), (1, 2));
        assert!((edges[0].k_edge - PI / 0.75).abs() < 1e-12);
    }

    #[test]
    fn homogeneous_cell_has_no_edges() {
        let cell = UnitCell::homogeneous(1.0).unwrap();
        assert!(find_band_edges(&cell, 30.0).unwrap().is_empty());
        let cell = UnitCell::new(vec![Layer::new(1.5, 0.3).unwrap(), Layer::new(1.5, 0.7).unwrap()]).unwrap();
        assert!(find_band_edges(&cell, 30.0).unwrap().is_empty());
        assert!(matches!(find_gap(&cell, 1), Err(Error::NoBandGap { .. })));
    }

    #[test]
    fn degenerate_touchings_still_advance_band_count() {
        // n=2,d=0.25 | n=1,d=0.75 closes a gap at ω = 4π.
        let edges = find_band_edges(&UnitCell::default_crystal(), 17.0).unwrap();
        for pair in edges.chunks(2) {
            assert_eq!(pair[0].side, EdgeSide::Lower);
            assert_eq!(pair[1].side, EdgeSide::Upper);
            assert!(pair[0].omega_c < pair[1].omega_c);
        }
        let last_below = edges.iter().filter(|e| e.omega_c < 4.0 * PI).last().unwrap();
        let first_above = edges.iter().find(|e| e.omega_c > 4.0 * PI).unwrap();
        // band 5 ends at the touching, the next gap bounds band 6
        assert_eq!(last_below.band_index, 5);
        assert_eq!(first_above.band_index, 6);
        assert!(edges.iter().all(|e| (e.omega_c - 4.0 * PI).abs() > 1e-3));
    }

    #[test]
    fn coarse_scan_reports_resolution_failure() {
        // A weak-contrast cell has narrow gaps that a step of 1.0 straddles.
        let cell = UnitCell::new(vec![Layer::new(1.02, 0.5).unwrap(), Layer::new(1.0, 0.5).unwrap()]).unwrap();
        let err = find_band_edges_with_step(&cell, 10.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::ScanResolution { .. }), "{err:?}");
        assert!(!find_band_edges(&cell, 10.0).unwrap().is_empty());
    }

    #[test]
    fn edges_scale_inversely_with_thickness() {
        let base = find_band_edges(&UnitCell::default_crystal(), 8.0).unwrap();
        let scaled = find_band_edges(&UnitCell::default_crystal().scaled(2.0).unwrap(), 4.0).unwrap();
        assert_eq!(base.len(), scaled.len());
        for (a, b) in base.iter().zip(&scaled) {
            assert!((a.omega_c / 2.0 - b.omega_c).abs() < 1e-12 * a.omega_c);
        }
    }

    #[test]
    fn dispersion_in_vacuum_and_gap() {
        let vac = UnitCell::homogeneous(1.0).unwrap();
        for &w in &[0.1, 1.0, 2.0, 3.0] {
            let k = dispersion_k(&vac, w).unwrap().unwrap();
            assert!((k - w).abs() < 1e-9);
        }
        let cell = UnitCell::default_crystal();
        let (lo, hi) = find_gap(&cell, 1).unwrap();
        let mid = 0.5 * (lo.omega_c + hi.omega_c);
        assert!(cell_half_trace(&cell, mid).unwrap().abs() > 1.0);
        assert_eq!(dispersion_k(&cell, mid).unwrap(), None);
        for e in [lo, hi] {
            let k = dispersion_k(&cell, e.omega_c).unwrap().unwrap();
            assert!((k - PI).abs() < 1e-6 || k.abs() < 1e-6);
        }
    }

    #[test]
    fn group_velocity_homogeneous_and_errors() {
        let cell = UnitCell::homogeneous(2.0).unwrap();
        for &w in &[0.3, 0.9, 1.4] {
            assert!((group_velocity(&cell, w).unwrap() - 0.5).abs() < 1e-12);
        }
        let cell = UnitCell::default_crystal();
        let (lo, hi) = find_gap(&cell, 1).unwrap();
        let mid = 0.5 * (lo.omega_c + hi.omega_c);
        assert!(matches!(group_velocity(&cell, mid), Err(Error::InGap { .. })));
    }

    #[test]
    fn group_velocity_vanishes_as_sqrt_u() {
        let cell = UnitCell::default_crystal();
        let (lo, _) = find_gap(&cell, 1).unwrap();
        let v4 = group_velocity(&cell, lo.omega_c * (1.0 - 1e-4)).unwrap();
        let v6 = group_velocity(&cell, lo.omega_c * (1.0 - 1e-6)).unwrap();
        assert!((v4 / v6 - 10.0).abs() < 0.1, "ratio {}", v4 / v6);
    }
}
