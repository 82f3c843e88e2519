use thiserror::Error;

use crate::solver::IterationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Shapes, component counts or grids of the arguments do not agree.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Inverse transform produced a field with a non-negligible imaginary part.
    #[error("reality violation: relative imaginary residue {residue:.3e}")]
    Reality { residue: f64 },

    #[error("invalid norm exponent {0} (must be >= 1)")]
    Exponent(f64),

    #[error("invalid time {0}")]
    Time(f64),

    #[error("resolvent parameter {lambda} is within {distance:.3e} of the spectrum")]
    Singular { lambda: num_complex::Complex64, distance: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("blow-up at step {step}: norm {norm:.3e} exceeds guard {guard:.3e}")]
    BlowUp { step: usize, norm: f64, guard: f64 },

    #[error("picard iteration diverged after {} iterations", .0.iterations.len())]
    Diverged(Box<IterationReport>),

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
