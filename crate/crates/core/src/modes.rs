//! Bloch mode field profiles inside the unit cell.
//!
//! A mode is the eigenvector of the origin cell matrix (see
//! [`crate::crystal::origin_cell_matrix`]) with eigenvalue `e^{ikL}`. It is
//! carried analytically across each segment and scaled so that
//! `(1/L) ∫ ε(x) |E(x)|² dx = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::crystal::{
    cell_half_trace, check_frequency, origin_cell_matrix, Segment, UnitCell, EDGE_TOL,
};
use crate::error::{Error, Result};

pub const MIN_GRID_SIZE: usize = 64;

/// Position tolerance of the golden-section node refinement.
const NODE_POSITION_TOL: f64 = 1e-12;

/// Analytic field of one Bloch mode; no sampling grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeProfile {
    omega: f64,
    k: f64,
    period: f64,
    segments: Vec<Segment>,
    /// Normalised `(E, E')` at the start of each segment.
    states: Vec<[Complex64; 2]>,
    at_edge: bool,
}

impl ModeProfile {
    pub fn new(cell: &UnitCell, omega: f64) -> Result<Self> {
        check_frequency(omega)?;
        let t = cell_half_trace(cell, omega)?;
        if t.abs() > 1.0 + EDGE_TOL {
            return Err(Error::InGap {
                omega,
                half_trace_abs: t.abs(),
            });
        }
        let m = origin_cell_matrix(cell, omega)?;
        let at_edge = (1.0 - t.abs()).abs() <= EDGE_TOL;
        let period = cell.period();

        let (lambda, k) = if at_edge {
            let s = t.signum();
            (Complex64::new(s, 0.0), if s > 0.0 { 0.0 } else { PI / period })
        } else {
            let s = ((1.0 - t) * (1.0 + t)).sqrt();
            (Complex64::new(t, s), t.acos() / period)
        };

        // Null vector of (M - λ): take whichever row gives the better-conditioned candidate.
        let a = [Complex64::new(m.m12, 0.0), lambda - m.m11];
        let b = [lambda - m.m22, Complex64::new(m.m21, 0.0)];
        let norm = |v: &[Complex64; 2]| v[0].norm_sqr() + v[1].norm_sqr();
        let mut v = if norm(&a) >= norm(&b) { a } else { b };
        let scale = m.m11.abs() + m.m12.abs() + m.m21.abs() + m.m22.abs();
        if norm(&v).sqrt() <= 1e-9 * scale {
            return Err(Error::DegenerateEdge { omega });
        }

        if at_edge {
            // Real mode, sign fixed by E(0) > 0 (or E'(0) > 0 on a node at the origin).
            let q0 = cell.layers()[0].n * omega;
            let lead = if v[0].re.abs() > 1e-6 * (v[1].re.abs() / q0) {
                v[0].re
            } else {
                v[1].re
            };
            let sgn = lead.signum();
            v = [Complex64::new(v[0].re * sgn, 0.0), Complex64::new(v[1].re * sgn, 0.0)];
        } else if v[0].norm() > 0.0 {
            let phase = v[0].conj() / v[0].norm();
            v = [v[0] * phase, v[1] * phase];
        }

        let segments = cell.segments();
        let mut states = Vec::with_capacity(segments.len());
        let mut energy = 0.0;
        let mut cur = v;
        for seg in &segments {
            states.push(cur);
            energy += seg.n * seg.n * segment_intensity_integral(seg, omega, cur);
            cur = propagate(seg.n, seg.len, omega, cur);
        }
        let inv = 1.0 / (energy / period).sqrt();
        for s in &mut states {
            s[0] *= inv;
            s[1] *= inv;
        }

        Ok(Self {
            omega,
            k,
            period,
            segments,
            states,
            at_edge,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Bloch wavenumber in `[0, π/L]`.
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn is_edge_mode(&self) -> bool {
        self.at_edge
    }

    fn wrap(&self, x: f64) -> f64 {
        let w = x.rem_euclid(self.period);
        if w >= self.period {
            0.0
        } else {
            w
        }
    }

    /// `(E, E')` at `x`, propagated from the interface on its left.
    pub fn state_at(&self, x: f64) -> [Complex64; 2] {
        let x = self.wrap(x);
        let i = UnitCell::segment_index(&self.segments, x);
        let seg = &self.segments[i];
        propagate(seg.n, x - seg.start, self.omega, self.states[i])
    }

    pub fn field_at(&self, x: f64) -> Complex64 {
        self.state_at(x)[0]
    }

    /// `|E(x)|²`.
    pub fn intensity_at(&self, x: f64) -> f64 {
        self.field_at(x).norm_sqr()
    }

    /// State at `x = L` computed by carrying the last segment to its end.
    pub fn state_after_period(&self) -> [Complex64; 2] {
        let last = self.segments.len() - 1;
        let seg = &self.segments[last];
        propagate(seg.n, seg.len, self.omega, self.states[last])
    }

    /// `(1/L) ∫ ε |E|² dx`, evaluated analytically segment by segment.
    pub fn weighted_mean_intensity(&self) -> f64 {
        self.segments
            .iter()
            .zip(&self.states)
            .map(|(seg, st)| seg.n * seg.n * segment_intensity_integral(seg, self.omega, *st))
            .sum::<f64>()
            / self.period
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }
}

/// Carries `(E, E')` a distance `len` through a region of index `n`.
fn propagate(n: f64, len: f64, omega: f64, v: [Complex64; 2]) -> [Complex64; 2] {
    let q = n * omega;
    let (s, c) = (q * len).sin_cos();
    [v[0] * c + v[1] * (s / q), v[0] * (-q * s) + v[1] * c]
}

/// `∫₀^len |A cos(qs) + C sin(qs)|² ds` with `A = E`, `C = E'/q`.
fn segment_intensity_integral(seg: &Segment, omega: f64, v: [Complex64; 2]) -> f64 {
    let q = seg.n * omega;
    let d = seg.len;
    let a = v[0];
    let c = v[1] / q;
    let s2 = (2.0 * q * d).sin() / (4.0 * q);
    let sin_sq = (q * d).sin().powi(2) / (2.0 * q);
    a.norm_sqr() * (0.5 * d + s2) + c.norm_sqr() * (0.5 * d - s2) + 2.0 * (a * c.conj()).re * sin_sq
}

/// A mode together with its samples on a uniform grid over `[0, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochMode {
    profile: ModeProfile,
    grid: Vec<f64>,
    field: Vec<Complex64>,
}

impl BlochMode {
    pub fn new(cell: &UnitCell, omega: f64, grid_size: usize) -> Result<Self> {
        if grid_size < MIN_GRID_SIZE {
            return Err(Error::GridTooSmall {
                got: grid_size,
                min: MIN_GRID_SIZE,
            });
        }
        let profile = ModeProfile::new(cell, omega)?;
        let h = cell.period() / grid_size as f64;
        let grid: Vec<f64> = (0..grid_size).map(|i| i as f64 * h).collect();
        let field = grid.iter().map(|&x| profile.field_at(x)).collect();
        Ok(Self {
            profile,
            grid,
            field,
        })
    }

    pub fn profile(&self) -> &ModeProfile {
        &self.profile
    }

    pub fn omega(&self) -> f64 {
        self.profile.omega
    }

    pub fn k(&self) -> f64 {
        self.profile.k
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn field(&self) -> &[Complex64] {
        &self.field
    }

    pub fn intensities(&self) -> Vec<f64> {
        self.field.iter().map(|e| e.norm_sqr()).collect()
    }

    pub fn intensity_at(&self, x: f64) -> f64 {
        self.profile.intensity_at(x)
    }

    /// Grid position of the largest sampled intensity.
    pub fn argmax(&self) -> f64 {
        let (i, _) = self
            .field
            .iter()
            .map(|e| e.norm_sqr())
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
        self.grid[i]
    }

    pub fn max_intensity(&self) -> f64 {
        self.field.iter().map(|e| e.norm_sqr()).fold(0.0, f64::max)
    }
}

pub fn bloch_mode(cell: &UnitCell, omega: f64, grid_size: usize) -> Result<BlochMode> {
    BlochMode::new(cell, omega, grid_size)
}

pub fn intensity_at(mode: &BlochMode, x: f64) -> f64 {
    mode.intensity_at(x)
}

/// Positions in `[0, L)` where `|E|² / max|E|² < tol`, each refined from a
/// grid local minimum by golden-section search.
pub fn find_intensity_nodes(mode: &BlochMode, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "node tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let vals = mode.intensities();
    let max = mode.max_intensity();
    let m = vals.len();
    let h = mode.profile.period / m as f64;
    let mut nodes: Vec<f64> = Vec::new();
    for i in 0..m {
        let left = vals[(i + m - 1) % m];
        let right = vals[(i + 1) % m];
        if !(vals[i] < left && vals[i] <= right) {
            continue;
        }
        let x0 = mode.grid[i];
        let x = golden_section_min(|x| mode.intensity_at(x), x0 - h, x0 + h, NODE_POSITION_TOL);
        if mode.intensity_at(x) / max < tol {
            nodes.push(mode.profile.wrap(x));
        }
    }
    nodes.sort_by(f64::total_cmp);
    let period = mode.profile.period;
    nodes.dedup_by(|a, b| (*a - *b).abs() < 0.5 * h);
    if nodes.len() > 1 && nodes[0] + period - nodes[nodes.len() - 1] < 0.5 * h {
        nodes.pop();
    }
    Ok(nodes)
}

fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{find_gap, Layer};

    fn lower_edge_mode() -> BlochMode {
        let cell = UnitCell::default_crystal();
        let (lo, _) = find_gap(&cell, 1).unwrap();
        BlochMode::new(&cell, lo.omega_c, 256).unwrap()
    }

    #[test]
    fn homogeneous_mode_has_unit_intensity() {
        let cell = UnitCell::homogeneous(1.0).unwrap();
        let mode = BlochMode::new(&cell, 1.3, 64).unwrap();
        for &x in mode.grid() {
            assert!((mode.intensity_at(x) - 1.0).abs() < 1e-12);
        }
        assert!((intensity_at(&mode, 12.345) - 1.0).abs() < 1e-12);
        assert!(find_intensity_nodes(&mode, 1e-8).unwrap().is_empty());
    }

    #[test]
    fn small_grid_and_gap_are_errors() {
        let cell = UnitCell::default_crystal();
        assert!(matches!(
            BlochMode::new(&cell, 1.0, 32),
            Err(Error::GridTooSmall { got: 32, .. })
        ));
        let (lo, hi) = find_gap(&cell, 1).unwrap();
        let mid = 0.5 * (lo.omega_c + hi.omega_c);
        assert!(matches!(BlochMode::new(&cell, mid, 64), Err(Error::InGap { .. })));
    }

    #[test]
    fn degenerate_touching_is_defective() {
        // Vacuum at ω = π: the cell matrix is -I.
        let cell = UnitCell::homogeneous(1.0).unwrap();
        assert!(matches!(
            BlochMode::new(&cell, PI, 64),
            Err(Error::DegenerateEdge { .. })
        ));
    }

    #[test]
    fn lower_edge_mode_vanishes_at_air_centre() {
        let mode = lower_edge_mode();
        assert!(mode.profile().is_edge_mode());
        assert!(mode.intensity_at(0.5) / mode.max_intensity() < 1e-10);
        assert_eq!(mode.argmax(), 0.0);
        assert!(mode.field()[0].re > 0.0);
        let nodes = find_intensity_nodes(&mode, 1e-8).unwrap();
        assert_eq!(nodes.len(), 1, "{nodes:?}");
        assert!((nodes[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn upper_edge_nodes_avoid_air_centre() {
        let cell = UnitCell::default_crystal();
        let (_, hi) = find_gap(&cell, 1).unwrap();
        let mode = BlochMode::new(&cell, hi.omega_c, 256).unwrap();
        let nodes = find_intensity_nodes(&mode, 1e-8).unwrap();
        assert!(!nodes.is_empty());
        for x in nodes {
            let dist = (x - 0.5).abs().min(1.0 - (x - 0.5).abs());
            assert!(dist > 1e-3, "node at {x}");
        }
    }

    #[test]
    fn bloch_boundary_relation() {
        let cell = UnitCell::default_crystal();
        let profile = ModeProfile::new(&cell, 1.2).unwrap();
        let lambda = Complex64::from_polar(1.0, profile.k() * cell.period());
        let end = profile.state_after_period();
        let start = profile.state_at(0.0);
        assert!((end[0] - lambda * start[0]).norm() < 1e-9);
        assert!((end[1] - lambda * start[1]).norm() < 1e-9);
    }

    #[test]
    fn field_is_continuous_across_interfaces() {
        let cell = UnitCell::new(vec![
            Layer::new(3.0, 0.2).unwrap(),
            Layer::new(1.0, 0.5).unwrap(),
            Layer::new(1.7, 0.3).unwrap(),
        ])
        .unwrap();
        let profile = ModeProfile::new(&cell, 0.9).unwrap();
        for w in profile.segments().windows(2) {
            let xb = w[1].start;
            let left = propagate(w[0].n, w[0].len, 0.9, profile.state_at(w[0].start));
            let right = profile.state_at(xb);
            assert!((left[0] - right[0]).norm() < 1e-12);
            assert!((left[1] - right[1]).norm() < 1e-12);
        }
    }

    #[test]
    fn normalisation_is_unit() {
        let cell = UnitCell::default_crystal();
        for &w in &[0.4, 1.1, 1.9, 3.3] {
            let p = ModeProfile::new(&cell, w).unwrap();
            assert!((p.weighted_mean_intensity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn node_tolerance_must_be_a_fraction() {
        let mode = lower_edge_mode();
        assert!(find_intensity_nodes(&mode, 0.0).is_err());
        assert!(find_intensity_nodes(&mode, 1.0).is_err());
    }
}
