//! Pseudospectral solver for the 3-D primitive equations on a periodic layer
//! `(0,1)^2 x (-h,0)` with a Dirichlet bottom and a stress-free top, built on
//! exact per-mode evaluation of the hydrostatic Stokes semigroup.
//!
//! Modules, bottom up:
//!
//! * [`spectral`]: grid, Fourier x sine basis, transforms, mixed norms.
//! * [`projection`]: Helmholtz projections `Q` and `P`, pressure recovery.
//! * [`stokes`]: the hydrostatic Stokes operator per horizontal mode, its
//!   semigroup, `phi_1`, resolvent and spectrum.
//! * [`nonlinear`]: vertical velocity and the advection term.
//! * [`solver`]: data splitting, exponential-Euler reference solve, Picard
//!   iteration for the rough part, mild-solution residuals.
//! * [`lab`]: numerical scans of kernel, convolution, semigroup, resolvent,
//!   multiplier, interpolation and nonlinear estimates.
//! * [`workbench`]: config files, snapshots, CSV output and the CLI commands.

// `!(x > 0.0)` guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod lab;
pub mod nonlinear;
pub mod projection;
pub mod solver;
pub mod spectral;
pub mod stokes;
pub mod workbench;

pub use error::{Error, Result};
