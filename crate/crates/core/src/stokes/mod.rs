//! The discrete hydrostatic Stokes operator `A = Delta + B`, its semigroup,
//! the `phi_1` weight, the resolvent and spectral diagnostics.

mod cache;
mod expm;
mod operator;
mod semigroup;
mod spectrum;

pub use cache::{BlockFunction, BlockKey, SemigroupCache};
pub use expm::{expm, expm_and_phi1, phi1_scalar};
pub use operator::{build_mode_operator, ModeOperator};
pub use semigroup::{HydrostaticStokes, SINGULAR_TOL};
pub use spectrum::{solenoidal_basis, spectral_bound, ModeEigenvalues, SpectrumReport, Subspace};
