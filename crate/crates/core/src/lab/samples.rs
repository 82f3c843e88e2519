use std::f64::consts::PI;

use ndarray::{Array2, Array4};
use num_complex::Complex64;

use crate::error::Result;
use crate::projection::project_hydrostatic;
use crate::spectral::{
    forward_transform, planar_inverse, sample_field, Grid, PhysicalField, SampleSpec, SpectralField,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Shared sample settings: the same seed yields the same modes on every
/// grid that can carry them.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSettings {
    pub count: usize,
    pub seed: u64,
    /// Highest horizontal frequency and number of vertical modes.
    pub cutoff: i64,
    pub k_max: usize,
    pub decay: f64,
    pub rough: f64,
}

impl SampleSettings {
    /// Smooth samples that fit a grid of size `(n, k)` below its Nyquist band.
    pub fn for_grid(n: usize, k: usize, count: usize, seed: u64) -> Self {
        Self { count, seed, cutoff: (n as i64 / 2 - 1).min(4), k_max: k.min(6), decay: 3.0, rough: 0.0 }
    }

    pub fn spec(&self) -> SampleSpec {
        SampleSpec { cutoff: self.cutoff, k_max: self.k_max, decay: self.decay, rough: self.rough }
    }

    fn seed_of(&self, i: usize) -> u64 {
        self.seed.wrapping_mul(1_000_003).wrapping_add(i as u64)
    }

    pub fn field(&self, grid: &Grid, i: usize) -> SpectralField {
        sample_field(grid, 2, &self.spec(), self.seed_of(i))
    }

    pub fn solenoidal(&self, grid: &Grid, i: usize) -> Result<SpectralField> {
        project_hydrostatic(&self.field(grid, i))
    }

    /// A solenoidal field that vanishes on the bottom and has bounded
    /// gradient: `rot_H psi` plus `grad_H g (x) b` with `b = phi_0 - (lambda_1/lambda_0) phi_1`
    /// of zero vertical mean (just `rot_H psi` when `K = 1`). Unlike `P f`,
    /// no z-constant profile is subtracted, so there is no bottom layer.
    pub fn smooth_solenoidal(&self, grid: &Grid, i: usize) -> SpectralField {
        let psi = sample_field(grid, 1, &self.spec(), self.seed_of(i) ^ 0x0a11_ce00);
        let mut out = SpectralField::zeros(grid, 2);
        let n = grid.n();
        let lam = &grid.basis().lambdas;
        let g = sample_field(grid, 1, &self.spec(), self.seed_of(i) ^ 0x0b0b_0000);
        for m in 0..n {
            for l in 0..n {
                let (a, b) = (grid.wavenumber(m), grid.wavenumber(l));
                for k in 0..grid.k() {
                    let c = psi.coeffs[[0, m, l, k]];
                    out.coeffs[[0, m, l, k]] = -I * b * c;
                    out.coeffs[[1, m, l, k]] = I * a * c;
                }
                if grid.k() > 1 {
                    let c = g.coeffs[[0, m, l, 0]];
                    for (k, w) in [(0, 1.0), (1, -lam[1] / lam[0])] {
                        out.coeffs[[0, m, l, k]] += I * a * c * w;
                        out.coeffs[[1, m, l, k]] += I * b * c * w;
                    }
                }
            }
        }
        out
    }

    /// `f = g(x, y) b(z)` with `b = sin^2(pi (z + h) / h)`, vanishing on the
    /// top and the bottom, and its exact `d_z f`, both as node values.
    pub fn compact_in_z(&self, grid: &Grid, i: usize) -> Result<(PhysicalField, PhysicalField)> {
        let planar = self.planar(grid, i);
        let h = grid.h();
        let b = |z: f64| (PI * (z + h) / h).sin().powi(2);
        let db = |z: f64| PI / h * (2.0 * PI * (z + h) / h).sin();
        let zs = grid.z_nodes();
        let (n, k) = (grid.n(), grid.k());
        let build = |prof: &dyn Fn(f64) -> f64| {
            Array4::from_shape_fn((2, n, n, k), |(c, a, bb, l)| planar[c][[a, bb]] * prof(zs[l]))
        };
        let f = PhysicalField::from_values(grid, build(&b))?;
        let dz = PhysicalField::from_values(grid, build(&db))?;
        Ok((f, dz))
    }

    /// Two planar real fields (as node values `[i, j]`) from the sample's
    /// first vertical coefficient.
    pub fn planar(&self, grid: &Grid, i: usize) -> [Array2<f64>; 2] {
        let f = self.field(grid, i);
        [0, 1].map(|c| {
            let coeffs = f.coeffs.slice(ndarray::s![c, .., .., 0]).to_owned();
            planar_inverse(coeffs.view()).mapv(|z| z.re)
        })
    }
}

/// Spectral version of node values.
pub fn to_spectral(f: &PhysicalField) -> Result<SpectralField> {
    forward_transform(f)
}
