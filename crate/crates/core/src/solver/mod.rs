//! Data splitting, the exponential-Euler reference solve, Picard iteration
//! for the rough part and mild-solution residuals.

mod config;
mod engine;
mod report;
mod trajectory;

pub use config::SolverConfig;
pub use engine::{Solution, Solver, Split, BLOW_UP_FACTOR, SOLENOIDAL_TOL};
pub use report::{IterationRecord, IterationReport};
pub use trajectory::{mixed_norms, Diagnostics, Trajectory};
