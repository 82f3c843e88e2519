use rayon::prelude::*;

use super::report::ScanReport;
use super::samples::SampleSettings;
use crate::error::{Error, Result};
use crate::nonlinear::NonlinearWorkspace;
use crate::projection::project_hydrostatic;
use crate::solver::mixed_norms;
use crate::spectral::{gradient, inverse_transform, norm_anisotropic, Grid, SpectralField};
use crate::stokes::HydrostaticStokes;

/// Left and right sides of the four bilinear smoothing bounds for
/// `N = P (u_1 . grad) v_2` at time `t`:
///
/// - (i) `||e^{tA} N||` vs `t^{-1/2} ||grad v1|| ||v2||`
/// - (ii) `||grad e^{tA} N||` vs `t^{-1/2} ||grad v1|| ||grad v2||`
/// - (iii) `||grad e^{tA} N||` vs `t^{-1} ||grad v1|| ||v2||`
/// - (iv) `||e^{tA} N||` vs `t^{-1/2} ||grad v2|| ||v1|| + ||grad v1|| ||grad v2||`
///
/// all in `L^inf_H L^p_z`.
pub fn nonlinear_sides(
    stokes: &HydrostaticStokes,
    ws: &NonlinearWorkspace,
    v1: &SpectralField,
    v2: &SpectralField,
    t: f64,
    p: f64,
) -> Result<[(f64, f64); 4]> {
    let n = project_hydrostatic(&ws.advection_bilinear(v1, v2)?)?;
    let e = stokes.semigroup_apply(t, &n)?;
    let ne = norm_anisotropic(&inverse_transform(&e)?, f64::INFINITY, p)?;
    let nge = norm_anisotropic(&gradient(&e)?, f64::INFINITY, p)?;
    let (a1, g1) = mixed_norms(v1, p)?;
    let (a2, g2) = mixed_norms(v2, p)?;
    let s = t.sqrt();
    Ok([(ne, g1 * a2 / s), (nge, g1 * g2 / s), (nge, g1 * a2 / t), (ne, g2 * a1 / s + g1 * g2)])
}

pub const NONLINEAR_NAMES: [&str; 4] = ["nonlinear_i", "nonlinear_ii", "nonlinear_iii", "nonlinear_iv"];

fn rows(reports: &mut [ScanReport; 4], grid: &Grid, times: &[f64], settings: &SampleSettings, p: f64) -> Result<()> {
    let stokes = HydrostaticStokes::new(grid);
    let out: Vec<Vec<(usize, f64, [(f64, f64); 4])>> = (0..settings.count)
        .into_par_iter()
        .map(|i| {
            let ws = NonlinearWorkspace::new(grid, true);
            let v1 = settings.smooth_solenoidal(grid, 2 * i);
            let v2 = settings.smooth_solenoidal(grid, 2 * i + 1);
            times.iter().map(|&t| Ok((i, t, nonlinear_sides(&stokes, &ws, &v1, &v2, t, p)?))).collect()
        })
        .collect::<Result<_>>()?;
    for (i, t, sides) in out.into_iter().flatten() {
        for (r, (num, den)) in reports.iter_mut().zip(sides) {
            r.record(grid.n(), i, t, 0.0, num, den);
        }
    }
    Ok(())
}

/// Four ratio scans over pairs of smooth solenoidal samples; `p > 3`.
pub fn nonlinear_estimate_scan(
    grid: &Grid,
    times: &[f64],
    settings: &SampleSettings,
    p: f64,
    doubling: bool,
) -> Result<[ScanReport; 4]> {
    if !(p > 3.0) {
        return Err(Error::Precondition(format!("nonlinear scans need p > 3, got {p}")));
    }
    let mut reports = NONLINEAR_NAMES.map(ScanReport::new);
    rows(&mut reports, grid, times, settings, p)?;
    let fine = if doubling {
        let f = grid.refined(2)?;
        rows(&mut reports, &f, times, settings, p)?;
        Some(f.n())
    } else {
        None
    };
    for r in reports.iter_mut() {
        r.finish(grid.n(), fine);
    }
    Ok(reports)
}
