use num_complex::Complex64;

use super::config::{InitKind, InitSpec};
use crate::error::{Error, Result};
use crate::lab::SampleSettings;
use crate::projection::project_hydrostatic;
use crate::solver::mixed_norms;
use crate::spectral::{sample_field, Grid, SampleSpec, SpectralField};

/// Rescale `v` to `L^inf_H L^p_z` norm `target` (zero stays zero).
fn normalized(v: SpectralField, target: f64, p: f64) -> Result<SpectralField> {
    let (norm, _) = mixed_norms(&v, p)?;
    Ok(if norm > 0.0 { v.scaled(target / norm) } else { v })
}

/// Solenoidal initial data for `simulate`.
pub fn initial_data(grid: &Grid, spec: &InitSpec, seed: u64, p: f64) -> Result<SpectralField> {
    let settings = SampleSettings::for_grid(grid.n(), grid.k(), 1, seed);
    let smooth = || normalized(settings.smooth_solenoidal(grid, 0), spec.amplitude, p);
    match spec.kind {
        InitKind::RandomDecay => smooth(),
        InitKind::SingleMode => single_mode(grid, spec.mode, spec.amplitude, p),
        InitKind::RoughPerturbation => {
            let half = grid.n() as i64 / 2 - 1;
            let rough = sample_field(grid, 2, &SampleSpec::rough(half, grid.k()), seed ^ 0x7f4a_7c15);
            let rough = normalized(project_hydrostatic(&rough)?, spec.rough * spec.amplitude, p)?;
            Ok(smooth()?.add(&rough))
        }
    }
}

/// `amp * e_perp cos(xi . x) phi_k` with `e_perp` perpendicular to `xi`
/// (`e_x` at `xi = 0`), scaled to the requested norm.
pub fn single_mode(grid: &Grid, (fx, fy, k): (i64, i64, usize), amplitude: f64, p: f64) -> Result<SpectralField> {
    let half = grid.n() as i64 / 2;
    if fx.abs() >= half || fy.abs() >= half || k >= grid.k() {
        return Err(Error::Config(format!("mode ({fx}, {fy}, {k}) is not resolved on this grid")));
    }
    let (m, l) = (grid.index_of(fx), grid.index_of(fy));
    let (a, b) = (grid.wavenumber(m), grid.wavenumber(l));
    let r = a.hypot(b);
    let dir = if r > 0.0 { [-b / r, a / r] } else { [1.0, 0.0] };
    let mut v = SpectralField::zeros(grid, 2);
    let (pm, pl) = v.partner(m, l);
    let amp = if (pm, pl) == (m, l) { 1.0 } else { 0.5 };
    for (c, d) in dir.iter().enumerate() {
        v.coeffs[[c, m, l, k]] += Complex64::new(amp * d, 0.0);
        if (pm, pl) != (m, l) {
            v.coeffs[[c, pm, pl, k]] += Complex64::new(amp * d, 0.0);
        }
    }
    normalized(v, amplitude, p)
}
