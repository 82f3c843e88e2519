use ndarray::Array2;

use super::planar::{disk_centers, disk_lp, periodic_disk};
use super::report::ScanReport;
use super::samples::SampleSettings;
use crate::error::{Error, Result};
use crate::spectral::{column_norms, horizontal_gradient, inverse_transform, Grid, SpectralField};

/// `L^q_z` column norms of `v` and of `grad_H v`.
fn columns(v: &SpectralField, q: f64) -> Result<(Array2<f64>, Array2<f64>)> {
    let h = v.grid.h();
    let cv = column_norms(inverse_transform(v)?.values.view(), h, q)?;
    let cg = column_norms(horizontal_gradient(v)?.values.view(), h, q)?;
    Ok((cv, cg))
}

/// `(||v||_{L^inf(B; L^q_z)}, r^{-2/p} (||v||_{L^p(B; L^q_z)} + r ||grad_H v||_{L^p(B; L^q_z)}))`
/// on the periodic disk `B(center, r)`.
pub fn interpolation_pair(v: &SpectralField, center: [f64; 2], r: f64, p: f64, q: f64) -> Result<(f64, f64)> {
    let (cv, cg) = columns(v, q)?;
    Ok(pair_from_columns(&cv, &cg, center, r, p))
}

fn pair_from_columns(cv: &Array2<f64>, cg: &Array2<f64>, center: [f64; 2], r: f64, p: f64) -> (f64, f64) {
    let disk = periodic_disk(cv.nrows(), center, r);
    let num = disk.iter().map(|&(i, j)| cv[[i, j]]).fold(0.0, f64::max);
    let den = r.powf(-2.0 / p) * (disk_lp(cv, &disk, p) + r * disk_lp(cg, &disk, p));
    (num, den)
}

fn rows(
    report: &mut ScanReport,
    grid: &Grid,
    radii: &[f64],
    centers: &[[f64; 2]],
    settings: &SampleSettings,
    p: f64,
    q: f64,
) -> Result<()> {
    for i in 0..settings.count {
        let (cv, cg) = columns(&settings.field(grid, i), q)?;
        for &r in radii {
            for (ci, &c) in centers.iter().enumerate() {
                let (num, den) = pair_from_columns(&cv, &cg, c, r, p);
                report.record(grid.n(), i * centers.len() + ci, r, 0.0, num, den);
            }
        }
    }
    Ok(())
}

/// Ratio scan of the local anisotropic interpolation inequality over
/// samples, seeded disk centers and radii; `p > 2`.
pub fn interpolation_ratio(
    grid: &Grid,
    settings: &SampleSettings,
    p: f64,
    q: f64,
    radii: &[f64],
    centers: usize,
    doubling: bool,
) -> Result<ScanReport> {
    if !(p > 2.0) {
        return Err(Error::Precondition(format!("interpolation needs p > 2, got {p}")));
    }
    if !(q >= 1.0) {
        return Err(Error::Exponent(q));
    }
    let cs = disk_centers(settings.seed, centers);
    let mut report = ScanReport::new("interpolation");
    rows(&mut report, grid, radii, &cs, settings, p, q)?;
    if doubling {
        let fine = grid.refined(2)?;
        rows(&mut report, &fine, radii, &cs, settings, p, q)?;
        report.finish(grid.n(), Some(fine.n()));
    } else {
        report.finish(grid.n(), None);
    }
    Ok(report)
}
