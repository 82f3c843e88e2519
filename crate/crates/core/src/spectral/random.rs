//! Seeded sample fields.
//!
//! Samples are generated by walking signed frequencies in a fixed order, so
//! the same seed yields the same continuous function on every grid that
//! resolves its band. Resolution-doubling checks depend on that.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::SpectralField;
use super::grid::Grid;

/// Spectral shape of a generated sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSpec {
    /// Largest `|f_x|`, `|f_y|` carried.
    pub cutoff: i64,
    /// Number of vertical modes carried.
    pub k_max: usize,
    /// Amplitudes decay like `(1 + |f|^2 + k^2)^(-decay/2)`.
    pub decay: f64,
    /// Weight of an additional flat-spectrum ("rough") component.
    pub rough: f64,
}

impl SampleSpec {
    pub fn smooth(cutoff: i64, k_max: usize) -> Self {
        Self { cutoff, k_max, decay: 3.0, rough: 0.0 }
    }

    pub fn rough(cutoff: i64, k_max: usize) -> Self {
        Self { cutoff, k_max, decay: 2.0, rough: 0.3 }
    }
}

/// Uniformly random coefficients on every mode, with reality enforced.
pub fn random_spectral(grid: &Grid, ncomp: usize, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid, ncomp);
    for c in f.coeffs.iter_mut() {
        *c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    f.enforce_reality();
    f
}

/// A band-limited sample following `spec`. Modes that the grid cannot carry
/// (beyond its Nyquist band or `K`) are skipped, the rest are identical
/// across grids.
pub fn sample_field(grid: &Grid, ncomp: usize, spec: &SampleSpec, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid, ncomp);
    let half = grid.n() as i64 / 2;
    for c in 0..ncomp {
        for fx in -spec.cutoff..=spec.cutoff {
            for fy in -spec.cutoff..=spec.cutoff {
                for k in 0..spec.k_max {
                    let re: f64 = rng.gen_range(-1.0..1.0);
                    let im: f64 = rng.gen_range(-1.0..1.0);
                    let r2 = (fx * fx + fy * fy) as f64 + (k * k) as f64;
                    let amp = (1.0 + r2).powf(-spec.decay / 2.0) + spec.rough;
                    if fx.abs() >= half || fy.abs() >= half || k >= grid.k() {
                        continue;
                    }
                    let (m, n) = (grid.index_of(fx), grid.index_of(fy));
                    f.coeffs[[c, m, n, k]] = Complex64::new(re, im) * amp;
                }
            }
        }
    }
    f.enforce_reality();
    f
}
