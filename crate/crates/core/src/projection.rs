//! The periodic Helmholtz projection `Q` on `G` and the hydrostatic
//! projection `P f = f - (1 - Q) mean(f)`, in truncated form.
//!
//! A z-constant field is carried in the sine basis through the renormalized
//! expansion `beta_k / sigma_K`, whose truncated vertical mean is exactly one.
//! With it `P` is an exact, L2-orthogonal projector on the truncated space,
//! and `div_H mean(P f) = 0` holds to round-off at every wavenumber.

use ndarray::{Array2, Array3};
use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::{bottom_shear, vertical_mean, Grid, SpectralField};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Per-wavenumber projector directions and the renormalized constant.
#[derive(Clone, Debug)]
pub struct ProjectionTables {
    /// `xi / |xi|` per `(m, n)`; `None` where the derivative symbol vanishes.
    pub directions: Array2<Option<[f64; 2]>>,
    pub beta_tilde: Vec<f64>,
}

impl ProjectionTables {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.n();
        let directions = Array2::from_shape_fn((n, n), |(m, l)| direction(grid, m, l));
        Self { directions, beta_tilde: grid.basis().beta_tilde() }
    }
}

/// Unit direction of the horizontal wavevector at `(m, n)`.
pub fn direction(grid: &Grid, m: usize, n: usize) -> Option<[f64; 2]> {
    let (a, b) = (grid.wavenumber(m), grid.wavenumber(n));
    let r = a.hypot(b);
    (r > 0.0).then(|| [a / r, b / r])
}

/// `Q g` for a planar vector field `[2, m, n]`. The zero mode is untouched.
pub fn helmholtz_2d(grid: &Grid, g: &Array3<Complex64>) -> Array3<Complex64> {
    let mut out = g.clone();
    let n = grid.n();
    for m in 0..n {
        for l in 0..n {
            if let Some([dx, dy]) = direction(grid, m, l) {
                let par = dx * g[[0, m, l]] + dy * g[[1, m, l]];
                out[[0, m, l]] -= dx * par;
                out[[1, m, l]] -= dy * par;
            }
        }
    }
    out
}

/// Hydrostatic projection of a two-component field.
pub fn project_hydrostatic(f: &SpectralField) -> Result<SpectralField> {
    f.require_ncomp(2, "project_hydrostatic")?;
    let grid = &f.grid;
    let bt = grid.basis().beta_tilde();
    let means = vertical_mean(f);
    let mut out = f.clone();
    let n = grid.n();
    for m in 0..n {
        for l in 0..n {
            let Some([dx, dy]) = direction(grid, m, l) else { continue };
            let par = dx * means[[0, m, l]] + dy * means[[1, m, l]];
            if par == ZERO {
                continue;
            }
            for (k, b) in bt.iter().enumerate() {
                out.coeffs[[0, m, l, k]] -= par * (dx * b);
                out.coeffs[[1, m, l, k]] -= par * (dy * b);
            }
        }
    }
    Ok(out)
}

/// `max_xi |xi . mean(f)(xi)| / ||f||_{L2}`; zero for the zero field.
pub fn check_solenoidal(f: &SpectralField) -> f64 {
    if f.ncomp() != 2 {
        return f64::NAN;
    }
    let grid = &f.grid;
    let means = vertical_mean(f);
    let n = grid.n();
    let mut worst: f64 = 0.0;
    for m in 0..n {
        for l in 0..n {
            let d = grid.wavenumber(m) * means[[0, m, l]] + grid.wavenumber(l) * means[[1, m, l]];
            worst = worst.max(d.norm());
        }
    }
    let norm = f.l2_norm();
    if norm == 0.0 {
        0.0
    } else {
        worst / norm
    }
}

/// Surface pressure gradient `[2, m, n]` solving
/// `Delta_H pi = div_H mean(f) - (1/h) div_H d_z v|_{z=-h}`.
pub fn recover_pressure_gradient(v: &SpectralField, f: &SpectralField) -> Result<Array3<Complex64>> {
    v.require_ncomp(2, "recover_pressure_gradient")?;
    f.require_ncomp(2, "recover_pressure_gradient")?;
    v.require_same_grid(f)?;
    let grid = &v.grid;
    let fbar = vertical_mean(f);
    let shear = bottom_shear(v);
    let n = grid.n();
    let inv_h = 1.0 / grid.h();
    let mut out = Array3::<Complex64>::zeros((2, n, n));
    for m in 0..n {
        for l in 0..n {
            let Some([dx, dy]) = direction(grid, m, l) else { continue };
            let gx = fbar[[0, m, l]] - shear[[0, m, l]] * inv_h;
            let gy = fbar[[1, m, l]] - shear[[1, m, l]] * inv_h;
            let par = dx * gx + dy * gy;
            out[[0, m, l]] = dx * par;
            out[[1, m, l]] = dy * par;
        }
    }
    Ok(out)
}

/// Surface pressure `[m, n]` with zero mean, from its gradient.
pub fn recover_pressure(v: &SpectralField, f: &SpectralField) -> Result<Array2<Complex64>> {
    let grad = recover_pressure_gradient(v, f)?;
    let grid = &v.grid;
    let n = grid.n();
    Ok(Array2::from_shape_fn((n, n), |(m, l)| {
        let (a, b) = (grid.wavenumber(m), grid.wavenumber(l));
        let r2 = a * a + b * b;
        if r2 == 0.0 {
            ZERO
        } else {
            // i xi pi = grad  =>  pi = -i xi . grad / |xi|^2
            -I * (a * grad[[0, m, l]] + b * grad[[1, m, l]]) / r2
        }
    }))
}

/// Spectral field `g(x,y) (x) 1`: each planar coefficient times the
/// renormalized constant profile.
pub fn z_constant(grid: &Grid, planar: &Array3<Complex64>) -> SpectralField {
    let ncomp = planar.dim().0;
    let bt = grid.basis().beta_tilde();
    let mut out = SpectralField::zeros(grid, ncomp);
    for ((c, m, l, k), v) in out.coeffs.indexed_iter_mut() {
        *v = planar[[c, m, l]] * bt[k];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{forward_transform, random_spectral, PhysicalField};
    use std::f64::consts::PI;

    fn planar(grid: &Grid, f: impl Fn(usize, f64, f64) -> f64) -> Array3<Complex64> {
        let n = grid.n();
        let xs = grid.x_nodes();
        let mut out = Array3::zeros((2, n, n));
        for c in 0..2 {
            let vals = Array2::from_shape_fn((n, n), |(i, j)| f(c, xs[i], xs[j]));
            let spec = crate::spectral::planar_forward(vals.view());
            out.index_axis_mut(ndarray::Axis(0), c).assign(&spec);
        }
        out
    }

    fn max_diff(a: &Array3<Complex64>, b: &Array3<Complex64>) -> f64 {
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn q_annihilates_gradients() {
        let g = Grid::new(8, 1, 1.0).unwrap();
        let grad = planar(&g, |c, x, _| if c == 0 { 2.0 * PI * (2.0 * PI * x).cos() } else { 0.0 });
        assert!(helmholtz_2d(&g, &grad).iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn q_fixes_divergence_free_and_constants() {
        let g = Grid::new(8, 1, 1.0).unwrap();
        // psi = sin(2 pi x) sin(2 pi y); g = (-psi_y, psi_x)
        let rot = planar(&g, |c, x, y| {
            let (sx, cx, sy, cy) = ((2.0 * PI * x).sin(), (2.0 * PI * x).cos(), (2.0 * PI * y).sin(), (2.0 * PI * y).cos());
            if c == 0 {
                -2.0 * PI * sx * cy
            } else {
                2.0 * PI * cx * sy
            }
        });
        assert!(max_diff(&helmholtz_2d(&g, &rot), &rot) < 1e-13);
        let cst = planar(&g, |c, _, _| if c == 0 { 3.0 } else { -1.0 });
        assert!(max_diff(&helmholtz_2d(&g, &cst), &cst) < 1e-15);
    }

    #[test]
    fn q_is_idempotent() {
        let g = Grid::new(8, 1, 1.0).unwrap();
        let f = random_spectral(&g, 2, 1);
        let p = f.coeffs.index_axis(ndarray::Axis(3), 0).to_owned();
        let q1 = helmholtz_2d(&g, &p);
        assert!(max_diff(&helmholtz_2d(&g, &q1), &q1) < 1e-14);
    }

    #[test]
    fn projection_keeps_mean_free_fields() {
        let g = Grid::new(8, 6, 1.0).unwrap();
        let mut f = random_spectral(&g, 2, 2);
        // make every vertical mean zero: subtract mean * beta_tilde
        let means = vertical_mean(&f);
        let bt = g.basis().beta_tilde();
        for ((c, m, l, k), v) in f.coeffs.indexed_iter_mut() {
            *v -= means[[c, m, l]] * bt[k];
        }
        let p = project_hydrostatic(&f).unwrap();
        assert!(max_diff4(&p, &f) < 1e-14);
    }

    fn max_diff4(a: &SpectralField, b: &SpectralField) -> f64 {
        a.coeffs.iter().zip(b.coeffs.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn solenoidal_z_constant_field_unchanged() {
        let g = Grid::new(8, 5, 1.0).unwrap();
        let f = z_constant(&g, &planar(&g, |c, _, y| if c == 0 { (2.0 * PI * y).sin() } else { 0.0 }));
        let p = project_hydrostatic(&f).unwrap();
        assert!(max_diff4(&p, &f) < 1e-14);
    }

    #[test]
    fn gradient_z_constant_field_projects_to_truncation_remainder() {
        // Brute-force oracle: subtract the exact vertical mean of the
        // x-component (times the renormalized constant) directly.
        let g = Grid::new(8, 6, 1.0).unwrap();
        let raw = PhysicalField::from_fn(&g, 2, |c, x, _, _| if c == 0 { (2.0 * PI * x).sin() } else { 0.0 });
        let f = forward_transform(&raw).unwrap();
        let p = project_hydrostatic(&f).unwrap();
        let mut oracle = f.clone();
        let bt = g.basis().beta_tilde();
        let lam = &g.basis().lambdas;
        for &m in &[1usize, 7] {
            let mean: Complex64 = (0..6).map(|k| f.coeffs[[0, m, 0, k]] / (lam[k] * g.h())).sum();
            for k in 0..6 {
                oracle.coeffs[[0, m, 0, k]] -= mean * bt[k];
            }
        }
        assert!(max_diff4(&p, &oracle) < 1e-14);
        let pm = vertical_mean(&p);
        assert!(pm[[0, 1, 0]].norm() < 1e-15);
        // residual equals the (nonzero) truncation remainder of the constant
        let resid = p.l2_norm();
        assert!(resid > 1e-3 && (resid - oracle.l2_norm()).abs() < 1e-14);
    }

    #[test]
    fn projection_is_idempotent_and_solenoidal() {
        let g = Grid::new(10, 7, 0.7).unwrap();
        let f = random_spectral(&g, 2, 9);
        let p = project_hydrostatic(&f).unwrap();
        let pp = project_hydrostatic(&p).unwrap();
        assert!(pp.sub(&p).l2_norm() <= 1e-13 * f.l2_norm());
        assert!(check_solenoidal(&p) <= 1e-13);
        // complement has zero perpendicular part
        let diff = f.sub(&p);
        for m in 0..10 {
            for l in 0..10 {
                if let Some([dx, dy]) = direction(&g, m, l) {
                    for k in 0..7 {
                        let perp = -dy * diff.coeffs[[0, m, l, k]] + dx * diff.coeffs[[1, m, l, k]];
                        assert!(perp.norm() < 1e-14);
                    }
                }
            }
        }
        assert!(project_hydrostatic(&random_spectral(&g, 1, 0)).is_err());
    }

    #[test]
    fn check_solenoidal_hand_value() {
        let g = Grid::new(8, 4, 1.0).unwrap();
        let l0 = g.basis().lambdas[0];
        let f = forward_transform(&PhysicalField::from_fn(&g, 2, |c, x, _, z| {
            if c == 0 {
                (2.0 * PI * x).sin() * (l0 * (z + 1.0)).sin()
            } else {
                0.0
            }
        }))
        .unwrap();
        assert!((check_solenoidal(&f) - 4.0).abs() < 1e-12);
        assert_eq!(check_solenoidal(&SpectralField::zeros(&g, 2)), 0.0);
    }

    #[test]
    fn pressure_for_single_mode() {
        let g = Grid::new(8, 5, 1.0).unwrap();
        let v = SpectralField::zeros(&g, 2);
        let pl = planar(&g, |c, x, _| if c == 0 { (2.0 * PI * x).sin() } else { 0.0 });
        let f = z_constant(&g, &pl);
        let grad = recover_pressure_gradient(&v, &f).unwrap();
        assert!(max_diff(&grad, &pl) < 1e-14);
        let pi = recover_pressure(&v, &f).unwrap();
        // pi = -cos(2 pi x)/(2 pi)
        let xs = g.x_nodes();
        let vals = crate::spectral::planar_inverse(pi.view());
        for i in 0..8 {
            assert!((vals[[i, 3]].re + (2.0 * PI * xs[i]).cos() / (2.0 * PI)).abs() < 1e-14);
        }
        let zero = recover_pressure_gradient(&v, &project_hydrostatic(&random_spectral(&g, 2, 1)).unwrap()).unwrap();
        assert!(zero.iter().all(|c| c.norm() < 1e-13));
    }
}
