//! Grids, the Fourier x sine basis, transforms, vertical calculus and
//! anisotropic mixed norms.

pub mod calculus;
pub mod field;
pub mod grid;
pub mod norm;
pub mod random;
pub mod transform;

pub use calculus::{
    bottom_shear, gradient, horizontal_derivative, horizontal_divergence, horizontal_gradient, laplacian,
    vertical_derivative, vertical_integral_from_bottom, vertical_mean, HorizontalAxis,
};
pub use field::{PhysicalField, SpectralField};
pub use grid::{Grid, VerticalBasis};
pub use norm::{column_norms, l2_norm, norm_anisotropic};
pub use random::{random_spectral, sample_field, SampleSpec};
pub use transform::{forward_transform, inverse_transform, planar_forward, planar_inverse};
