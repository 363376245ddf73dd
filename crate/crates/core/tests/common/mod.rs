//! Test-only oracles, independent of the library's transfer-matrix path.
#![allow(dead_code)]

use std::f64::consts::PI;

use bandedge_ldos::crystal::Segment;

/// Two-layer Kronig–Penney half-trace
/// `cos θ₁ cos θ₂ - ½(q₁/q₂ + q₂/q₁) sin θ₁ sin θ₂`.
pub fn kp_half_trace(n1: f64, d1: f64, n2: f64, d2: f64, omega: f64) -> f64 {
    let (q1, q2) = (n1 * omega, n2 * omega);
    let (t1, t2) = (q1 * d1, q2 * d2);
    t1.cos() * t2.cos() - 0.5 * (q1 / q2 + q2 / q1) * t1.sin() * t2.sin()
}

/// First-gap edges of the n = 2 : 1 quarter-wave cell with nᵢdᵢ = 1/2:
/// `sin²θ = 8/9`, `ω = 2θ` and `2(π - θ)`.
pub fn quarter_wave_first_gap() -> (f64, f64) {
    let theta = (8.0f64 / 9.0).sqrt().asin();
    (2.0 * theta, 2.0 * (PI - theta))
}

/// Bisection on `|t| - 1` of the closed-form two-layer trace, run to machine
/// precision. `band` must be in a band and `gap` in a gap.
pub fn kp_edge(n1: f64, d1: f64, n2: f64, d2: f64, mut band: f64, mut gap: f64) -> f64 {
    loop {
        let mid = 0.5 * (band + gap);
        if mid == band || mid == gap {
            return band;
        }
        if kp_half_trace(n1, d1, n2, d2, mid).abs() > 1.0 {
            gap = mid;
        } else {
            band = mid;
        }
    }
}

/// Bloch wavenumber from the closed-form trace.
pub fn kp_k(n1: f64, d1: f64, n2: f64, d2: f64, omega: f64) -> f64 {
    kp_half_trace(n1, d1, n2, d2, omega).acos() / (d1 + d2)
}

/// Composite Simpson rule over `[a, b]` with `m` (even) intervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `(1/L) ∫ ε(x) g(x) dx`, integrating each segment separately so the
/// permittivity jumps sit on panel boundaries.
pub fn weighted_cell_mean<F: Fn(f64) -> f64>(segments: &[Segment], g: F, m: usize) -> f64 {
    let period: f64 = segments.iter().map(|s| s.len).sum();
    segments
        .iter()
        .map(|s| {
            // Pull the end points inward so each panel evaluates inside its own segment.
            let eps = 1e-15 * period;
            s.n * s.n * simpson(&g, s.start + eps, s.end() - eps, m)
        })
        .sum::<f64>()
        / period
}
