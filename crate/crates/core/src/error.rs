use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid layer (n = {n}, d = {d}): need n >= 1 and d > 0")]
    InvalidLayer { n: f64, d: f64 },

    #[error("unit cell has no layers")]
    EmptyCell,

    #[error("frequency must be positive and finite, got {0}")]
    NonPositiveFrequency(f64),

    #[error("frequency {omega} lies inside a band gap (|t| = {half_trace_abs})")]
    InGap { omega: f64, half_trace_abs: f64 },

    #[error("frequency {omega} sits on a band edge where the group velocity vanishes")]
    AtBandEdge { omega: f64 },

    #[error("defective eigensystem at omega = {omega}: degenerate band touching")]
    DegenerateEdge { omega: f64 },

    #[error("scan step too coarse: two band edges hide between {lo} and {hi}; use a finer scan")]
    ScanResolution { lo: f64, hi: f64 },

    #[error("no band gap below omega = {omega_max}")]
    NoBandGap { omega_max: f64 },

    #[error("grid_size must be at least {min}, got {got}")]
    GridTooSmall { got: usize, min: usize },

    #[error("Wronskian vanished or overflowed at omega = {omega}; use loss > 0 or fewer periods")]
    SingularWronskian { omega: f64 },

    #[error("need at least 3 valid samples with distinct z, got {0}")]
    TooFewSamples(usize),

    #[error("exponent estimate has not converged; prefactor is undefined")]
    Unconverged,

    #[error("{0}")]
    InvalidArgument(String),
}
