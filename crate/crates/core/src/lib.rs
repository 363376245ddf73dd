//! Local density of states of one-dimensional photonic crystals and the
//! power-law exponent of its band-edge divergence.
//!
//! The crate is organised bottom-up:
//!
//! * [`crystal`]: layered unit cells, 2×2 transfer matrices, Bloch dispersion,
//!   band-edge search and group velocity.
//! * [`modes`]: Bloch mode field profiles and intensity nodes.
//! * [`ldos`]: total and local density of states, plus Green's-function
//!   cross-checks.
//! * [`exponent`]: log-log sampling below an edge, slope curves and the
//!   asymptotic exponent / prefactor estimate.
//! * [`cli`]: configuration and the experiment runners behind the binary.

pub mod cli;
pub mod crystal;
pub mod error;
pub mod exponent;
pub mod ldos;
pub mod modes;

pub use crystal::{BandEdge, EdgeSide, Layer, TransferMatrix, UnitCell};
pub use error::{Error, Result};
pub use exponent::{ExponentEstimate, LogLogSample, SlopePoint};
pub use ldos::LdosValue;
pub use modes::BlochMode;
