//! Empirical checks of the linear and bilinear estimates behind the
//! solver: kernel norms, discrete Young inequality, sector scans of the
//! semigroup and resolvent, planar multiplier and pressure bounds, local
//! interpolation, bilinear smoothing bounds and the Picard recursion bound.
//!
//! Scans report sup ratios without constants; a sup that stays put under
//! resolution doubling is the evidence, not a proof.

pub mod decay;
pub mod interpolation;
pub mod kernel;
pub mod nonlinear_scan;
pub mod planar;
pub mod recursion;
pub mod report;
pub mod samples;
pub mod young;

pub use decay::{
    complex_parts, decay_ratio, geometric_times, resolvent_ratio, resolvent_scan, semigroup_decay_doubling,
    semigroup_decay_scan, small_time_trend, DecayCombo, Direction, ResolventScan,
};
pub use interpolation::{interpolation_pair, interpolation_ratio};
pub use kernel::{adaptive_simpson, kernel_l1_norm, KernelNorms};
pub use nonlinear_scan::{nonlinear_estimate_scan, nonlinear_sides, NONLINEAR_NAMES};
pub use planar::{
    disk_centers, disk_lp, heat_gradient_of_q, horizontal_multiplier_scan, log_riesz_ratio, multiplier_ratio,
    periodic_disk, pressure_gradient_modulus, q_growth, MultiplierScan,
};
pub use recursion::{recursion_bound_check, RecursionCheck};
pub use report::{ScanReport, ScanRow, DENOMINATOR_FLOOR, STABILITY_TOL};
pub use samples::SampleSettings;
pub use young::{periodic_convolution, torus_l1, torus_mixed_norm, young_anisotropic_test, TorusShape};
