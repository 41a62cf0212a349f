//! Deformed current modes on truncated Fock spaces: the single-sector
//! realization with its κ normalization and normal-ordering anomaly, and the
//! paired realization at the elliptic point.

pub mod elliptic;
pub mod trig;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DvaError {
    #[error("mode {mode} has the wrong parity: the paired current only carries half-odd modes")]
    ParityMismatch { mode: String },
}

pub use elliptic::EllipticBank;
pub use trig::{kappa_series, t0_scalar, vacuum_eigenvalue, CurrentBank, ScalarPart};
