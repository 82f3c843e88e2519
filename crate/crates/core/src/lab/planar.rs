//! Two-dimensional periodic checks on `G = [0,1)^2`: the heat multiplier
//! composed with the Helmholtz projection, growth of `Q` on `L^inf`, and
//! local bounds for the surface pressure.

use ndarray::{Array2, Array3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::ScanReport;
use super::samples::SampleSettings;
use crate::error::{Error, Result};
use crate::projection::helmholtz_2d;
use crate::spectral::{planar_forward, planar_inverse, Grid};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn planar_grid(n: usize) -> Result<Grid> {
    Grid::new(n, 1, 1.0)
}

/// Coefficients `[2, m, n]` of a planar vector field given by node values.
pub fn planar_coeffs(f: &[Array2<f64>; 2]) -> Array3<Complex64> {
    let n = f[0].nrows();
    let mut out = Array3::zeros((2, n, n));
    for (c, comp) in f.iter().enumerate() {
        out.index_axis_mut(ndarray::Axis(0), c).assign(&planar_forward(comp.view()));
    }
    out
}

/// Node maximum of the Euclidean modulus of complex component fields.
fn max_modulus(parts: &[Array2<Complex64>]) -> f64 {
    let n = parts[0].nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s: f64 = parts.iter().map(|p| p[[i, j]].norm_sqr()).sum();
            worst = worst.max(s.sqrt());
        }
    }
    worst
}

/// `grad_H e^{tau Delta_H} Q f` at the nodes, four complex components
/// `(d_x g_1, d_y g_1, d_x g_2, d_y g_2)`.
pub fn heat_gradient_of_q(f: &[Array2<f64>; 2], tau: Complex64) -> Result<Vec<Array2<Complex64>>> {
    let n = f[0].nrows();
    let g = planar_grid(n)?;
    let qf = helmholtz_2d(&g, &planar_coeffs(f));
    let mut out = Vec::with_capacity(4);
    for c in 0..2 {
        for axis in 0..2 {
            let coeffs = Array2::from_shape_fn((n, n), |(m, l)| {
                let xi = if axis == 0 { g.wavenumber(m) } else { g.wavenumber(l) };
                qf[[c, m, l]] * I * xi * (-tau * g.wavenumber_sq(m, l)).exp()
            });
            out.push(planar_inverse(coeffs.view()));
        }
    }
    Ok(out)
}

/// `(|tau|^{1/2} ||grad_H e^{tau Delta_H} Q f||_inf, ||f||_inf)`.
pub fn multiplier_ratio(f: &[Array2<f64>; 2], tau: Complex64) -> Result<(f64, f64)> {
    let num = tau.norm().sqrt() * max_modulus(&heat_gradient_of_q(f, tau)?);
    let den = max_modulus(&f.clone().map(|a| a.mapv(|v| Complex64::new(v, 0.0))));
    Ok((num, den))
}

/// Multiplier scan parameters: `tau = r e^{i phi}` with `|phi| <= theta < pi/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierScan {
    pub theta: f64,
    pub magnitudes: Vec<f64>,
}

impl MultiplierScan {
    pub fn new(theta: f64, magnitudes: Vec<f64>) -> Result<Self> {
        if !(theta >= 0.0 && theta < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Precondition(format!("multiplier sector angle {theta} must lie in [0, pi/2)")));
        }
        Ok(Self { theta, magnitudes })
    }

    pub fn angles(&self) -> [f64; 3] {
        [-self.theta, 0.0, self.theta]
    }
}

fn multiplier_rows(report: &mut ScanReport, n: usize, scan: &MultiplierScan, settings: &SampleSettings) -> Result<()> {
    let g = Grid::new(n, settings.k_max.max(1), 1.0)?;
    let rows: Vec<Vec<(usize, f64, f64, f64, f64)>> = (0..settings.count)
        .into_par_iter()
        .map(|i| {
            let f = settings.planar(&g, i);
            let mut out = Vec::new();
            for &r in &scan.magnitudes {
                for phi in scan.angles() {
                    let (num, den) = multiplier_ratio(&f, Complex64::from_polar(r, phi))?;
                    out.push((i, r, phi, num, den));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    for (i, r, phi, num, den) in rows.into_iter().flatten() {
        report.record(n, i, r, phi, num, den);
    }
    Ok(())
}

/// Sup of `|tau|^{1/2} ||grad_H e^{tau Delta_H} Q f||_inf / ||f||_inf` over
/// planar samples, on `N` and optionally `2N`.
pub fn horizontal_multiplier_scan(
    n: usize,
    scan: &MultiplierScan,
    settings: &SampleSettings,
    doubling: bool,
) -> Result<ScanReport> {
    let mut report = ScanReport::new("multiplier");
    multiplier_rows(&mut report, n, scan, settings)?;
    if doubling {
        multiplier_rows(&mut report, 2 * n, scan, settings)?;
        report.finish(n, Some(2 * n));
    } else {
        report.finish(n, None);
    }
    Ok(report)
}

/// `||Q f||_inf / ||f||_inf` for `f = (1_S, 0)`, `S = [1/4, 3/4)^2`, at each
/// resolution. The ratio grows as the grid resolves the corners.
pub fn q_growth(resolutions: &[usize]) -> Result<Vec<(usize, f64)>> {
    resolutions
        .iter()
        .map(|&n| {
            let g = planar_grid(n)?;
            let box_ind = Array2::from_shape_fn((n, n), |(i, j)| {
                let inside = |a: usize| 4 * a >= n && 4 * a < 3 * n;
                if inside(i) && inside(j) {
                    1.0
                } else {
                    0.0
                }
            });
            let f = [box_ind, Array2::zeros((n, n))];
            let qf = helmholtz_2d(&g, &planar_coeffs(&f));
            let parts: Vec<_> =
                (0..2).map(|c| planar_inverse(qf.index_axis(ndarray::Axis(0), c))).collect();
            Ok((n, max_modulus(&parts)))
        })
        .collect()
}

/// Node indices within periodic distance `r` of `center`.
pub fn periodic_disk(n: usize, center: [f64; 2], r: f64) -> Vec<(usize, usize)> {
    let wrap = |d: f64| {
        let d = d.rem_euclid(1.0);
        d.min(1.0 - d)
    };
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (dx, dy) = (wrap(i as f64 / n as f64 - center[0]), wrap(j as f64 / n as f64 - center[1]));
            if dx * dx + dy * dy <= r * r {
                out.push((i, j));
            }
        }
    }
    out
}

/// `(sum_{disk} |g|^p / N^2)^{1/p}`.
pub fn disk_lp(values: &Array2<f64>, disk: &[(usize, usize)], p: f64) -> f64 {
    let n = values.nrows();
    let s: f64 = disk.iter().map(|&(i, j)| values[[i, j]].abs().powf(p)).sum();
    (s / (n * n) as f64).powf(1.0 / p)
}

/// Seeded disk centers shared by all resolutions.
pub fn disk_centers(seed: u64, count: usize) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_d15c);
    (0..count).map(|_| [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect()
}

/// Pressure gradient `grad pi = (1 - Q) F` of `Delta_H pi = div_H F`, as
/// its pointwise modulus.
pub fn pressure_gradient_modulus(f: &[Array2<f64>; 2]) -> Result<Array2<f64>> {
    let n = f[0].nrows();
    let g = planar_grid(n)?;
    let coeffs = planar_coeffs(f);
    let grad = &coeffs - &helmholtz_2d(&g, &coeffs);
    let parts: Vec<_> = (0..2).map(|c| planar_inverse(grad.index_axis(ndarray::Axis(0), c))).collect();
    Ok(Array2::from_shape_fn((n, n), |(i, j)| (parts[0][[i, j]].norm_sqr() + parts[1][[i, j]].norm_sqr()).sqrt()))
}

fn log_riesz_rows(
    report: &mut ScanReport,
    n: usize,
    radii: &[f64],
    centers: &[[f64; 2]],
    settings: &SampleSettings,
    p: f64,
) -> Result<()> {
    let g = Grid::new(n, settings.k_max.max(1), 1.0)?;
    for i in 0..settings.count {
        let f = settings.planar(&g, i);
        let grad = pressure_gradient_modulus(&f)?;
        let sup = Array2::from_shape_fn((n, n), |(a, b)| f[0][[a, b]].hypot(f[1][[a, b]])).fold(0.0, |m: f64, v| m.max(*v));
        for &r in radii {
            for (ci, &c) in centers.iter().enumerate() {
                let disk = periodic_disk(n, c, r);
                let num = disk_lp(&grad, &disk, p);
                let den = r.powf(2.0 / p) * (1.0 + r.ln().abs()) * sup;
                report.record(n, i * centers.len() + ci, r, 0.0, num, den);
            }
        }
    }
    Ok(())
}

/// `||grad_H pi||_{L^p(B(x, r))} / (r^{2/p} (1 + |log r|) ||F||_inf)`.
pub fn log_riesz_ratio(
    n: usize,
    radii: &[f64],
    centers: usize,
    settings: &SampleSettings,
    p: f64,
    doubling: bool,
) -> Result<ScanReport> {
    if !(p >= 1.0) {
        return Err(Error::Exponent(p));
    }
    let cs = disk_centers(settings.seed, centers);
    let mut report = ScanReport::new("log_riesz");
    log_riesz_rows(&mut report, n, radii, &cs, settings, p)?;
    if doubling {
        log_riesz_rows(&mut report, 2 * n, radii, &cs, settings, p)?;
        report.finish(n, Some(2 * n));
    } else {
        report.finish(n, None);
    }
    Ok(report)
}
