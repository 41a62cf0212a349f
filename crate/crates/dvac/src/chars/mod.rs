//! Graded dimensions, zero-mode spectra, and highest-weight censuses of the
//! cutoff fermion spaces.
//!
//! Three independent views of the same state spaces:
//!
//! * [`dims`] counts states level by level and checks the counts against the
//!   Euler products the two sectors must reproduce;
//! * [`spectrum`] diagonalizes the zero mode on a single level at a rational
//!   point — exactly, since the zero mode is diagonal in the occupation
//!   basis — and reports eigenvalues with multiplicities;
//! * [`scan`] counts joint kernels of the lowering modes with x symbolic,
//!   locating the levels where highest-weight vectors sit.

use thiserror::Error;

pub mod dims;
pub mod scan;
pub mod spectrum;

pub use dims::{euler_dims, graded_dimension, LevelDim};
pub use scan::{highest_weight_scan, ScanLine, ScanReport};
pub use spectrum::{kappa_at, t0_block_spectrum, SpectrumLine, SpectrumReport, TraceCheck};

#[derive(Debug, Error)]
pub enum CharsError {
    #[error("level {level} is outside the cutoff range [0, {lambda}]")]
    LevelOutOfRange { level: String, lambda: i64 },
    #[error("x0 must lie strictly between 0 and 1, got {x0}")]
    BadPoint { x0: String },
    #[error("scan bound violated: kmax + nmax = {got} must stay at or below the cutoff {lambda}")]
    ScanBound { got: i64, lambda: i64 },
}
