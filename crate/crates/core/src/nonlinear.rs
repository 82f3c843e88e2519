//! Vertical velocity and the advective nonlinearity `(u . grad) v`.
//!
//! With dealiasing on, products are formed on a `3N/2` horizontal grid and
//! at Gauss-Legendre points in `z`, then projected back onto the grid's
//! Fourier x sine modes. The horizontal 3/2 rule is exact for quadratic
//! products; the Gauss-Legendre rule resolves the trigonometric vertical
//! products to round-off, so the result is the exact Galerkin projection and
//! `<(u . grad) v, v> = 0` holds for solenoidal `u = v`.
//!
//! With dealiasing off the products are formed at the `N x N x K`
//! collocation nodes.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use ndarray::{s, Array2, Array3, Array4, ArrayView3, Axis};
use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::transform::{analyze, synthesize};
use crate::spectral::{
    horizontal_derivative, horizontal_divergence, vertical_integral_from_bottom, Grid, HorizontalAxis,
    PhysicalField, SpectralField,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Number of Gauss-Legendre points used for a vertical basis of size `k`.
pub fn vertical_quadrature_size(k: usize) -> usize {
    3 * k + 16
}

/// `w = -int_{-h}^z div_H v dr` at the collocation nodes.
pub fn vertical_velocity(v: &SpectralField) -> Result<PhysicalField> {
    v.require_ncomp(2, "vertical_velocity")?;
    let mut w = vertical_integral_from_bottom(&horizontal_divergence(v)?)?;
    w.values.mapv_inplace(|x| -x);
    Ok(w)
}

/// Transform tables for products; one per worker.
#[derive(Clone, Debug)]
pub struct NonlinearWorkspace {
    grid: Grid,
    dealias: bool,
    m: usize,
    /// Vertical evaluation points, bottom to top, plus `z = 0` last.
    z: Vec<f64>,
    sin_t: Array2<f64>,
    dz_t: Array2<f64>,
    w_t: Array2<f64>,
    sin_proj: Array2<f64>,
    flux_proj: Array2<f64>,
}

impl NonlinearWorkspace {
    pub fn new(grid: &Grid, dealias: bool) -> Self {
        let h = grid.h();
        let k = grid.k();
        let (mut z, weights): (Vec<f64>, Vec<f64>) = if dealias {
            let q = NonZeroUsize::new(vertical_quadrature_size(k)).expect("positive");
            GaussLegendre::new(q)
                .as_node_weight_pairs()
                .iter()
                .map(|(x, w)| (0.5 * h * (x - 1.0), 0.5 * h * w))
                .unzip()
        } else {
            (grid.z_nodes(), vec![grid.vertical_weight(); k])
        };
        let nq = z.len();
        z.push(0.0);
        let lam = &grid.basis().lambdas;
        let s = |kk: usize, q: usize| lam[kk] * (z[q] + h);
        let sin_t = Array2::from_shape_fn((k, nq + 1), |(kk, q)| s(kk, q).sin());
        let dz_t = Array2::from_shape_fn((k, nq + 1), |(kk, q)| lam[kk] * s(kk, q).cos());
        let w_t = Array2::from_shape_fn((k, nq + 1), |(kk, q)| -(1.0 - s(kk, q).cos()) / lam[kk]);
        let sin_proj = Array2::from_shape_fn((nq + 1, k), |(q, kk)| {
            if q == nq {
                0.0
            } else {
                2.0 / h * weights[q] * s(kk, q).sin()
            }
        });
        // int d_z(g) phi_k = g(0) phi_k(0) - int g lambda_k cos(...), with g(-h) = 0
        let flux_proj = Array2::from_shape_fn((nq + 1, k), |(q, kk)| {
            if q == nq {
                2.0 / h * if kk % 2 == 0 { 1.0 } else { -1.0 }
            } else {
                -2.0 / h * weights[q] * lam[kk] * s(kk, q).cos()
            }
        });
        let m = if dealias { 3 * grid.n() / 2 } else { grid.n() };
        Self { grid: grid.clone(), dealias, m, z, sin_t, dz_t, w_t, sin_proj, flux_proj }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dealias(&self) -> bool {
        self.dealias
    }

    /// Padded horizontal size and number of vertical evaluation points.
    pub fn padded_shape(&self) -> (usize, usize) {
        (self.m, self.z.len() - 1)
    }

    fn eval(&self, f: &SpectralField, comp: usize, table: &Array2<f64>) -> Result<Array3<f64>> {
        synthesize(&self.grid, f.coeffs.index_axis(Axis(0), comp), table.view(), self.m)
    }

    fn project(&self, values: ArrayView3<f64>, proj: &Array2<f64>) -> Array3<Complex64> {
        analyze(&self.grid, values, proj.view())
    }

    fn assemble(&self, parts: Vec<Array3<Complex64>>) -> SpectralField {
        let (n, k) = (self.grid.n(), self.grid.k());
        let mut coeffs = Array4::zeros((parts.len(), n, n, k));
        for (c, p) in parts.into_iter().enumerate() {
            coeffs.slice_mut(s![c, .., .., ..]).assign(&p);
        }
        SpectralField { grid: self.grid.clone(), coeffs }
    }

    fn check(&self, f: &SpectralField, what: &str) -> Result<()> {
        f.require_ncomp(2, what)?;
        if f.grid != self.grid {
            return Err(crate::Error::Contract(format!("{what}: field grid differs from workspace grid")));
        }
        Ok(())
    }

    /// `(u . grad) v = (u_H . grad_H) v + w(u) d_z v`.
    pub fn advection_bilinear(&self, u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
        self.check(u, "advection")?;
        self.check(v, "advection")?;
        let u1 = self.eval(u, 0, &self.sin_t)?;
        let u2 = self.eval(u, 1, &self.sin_t)?;
        let w = self.eval(&horizontal_divergence(u)?, 0, &self.w_t)?;
        let vx = horizontal_derivative(v, HorizontalAxis::X);
        let vy = horizontal_derivative(v, HorizontalAxis::Y);
        let mut parts = Vec::with_capacity(2);
        for c in 0..2 {
            let mut prod = self.eval(v, c, &self.dz_t)?;
            prod *= &w;
            prod += &(&u1 * &self.eval(&vx, c, &self.sin_t)?);
            prod += &(&u2 * &self.eval(&vy, c, &self.sin_t)?);
            parts.push(self.project(prod.view(), &self.sin_proj));
        }
        Ok(self.assemble(parts))
    }

    pub fn advection(&self, v: &SpectralField) -> Result<SpectralField> {
        self.advection_bilinear(v, v)
    }

    /// `div_H(u_H (x) v) + d_z(w(u) v)`, equal to the advective form when
    /// `div u = 0`.
    pub fn divergence_form_bilinear(&self, u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
        self.check(u, "divergence_form")?;
        self.check(v, "divergence_form")?;
        let g = &self.grid;
        let u1 = self.eval(u, 0, &self.sin_t)?;
        let u2 = self.eval(u, 1, &self.sin_t)?;
        let w = self.eval(&horizontal_divergence(u)?, 0, &self.w_t)?;
        let mut parts = Vec::with_capacity(2);
        for c in 0..2 {
            let vc = self.eval(v, c, &self.sin_t)?;
            let a1 = self.project((&u1 * &vc).view(), &self.sin_proj);
            let a2 = self.project((&u2 * &vc).view(), &self.sin_proj);
            let mut out = self.project((&w * &vc).view(), &self.flux_proj);
            for ((m, l, k), o) in out.indexed_iter_mut() {
                *o += I * (g.wavenumber(m) * a1[[m, l, k]] + g.wavenumber(l) * a2[[m, l, k]]);
            }
            parts.push(out);
        }
        Ok(self.assemble(parts))
    }

    pub fn divergence_form(&self, v: &SpectralField) -> Result<SpectralField> {
        self.divergence_form_bilinear(v, v)
    }
}

/// One-shot `(v . grad) v` with a fresh workspace.
pub fn advection(v: &SpectralField, dealias: bool) -> Result<SpectralField> {
    NonlinearWorkspace::new(&v.grid, dealias).advection(v)
}

/// One-shot divergence-form nonlinearity with a fresh workspace.
pub fn divergence_form(v: &SpectralField, dealias: bool) -> Result<SpectralField> {
    NonlinearWorkspace::new(&v.grid, dealias).divergence_form(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_vertical_velocity() {
        let g = Grid::new(8, 4, 1.0).unwrap();
        // sin(2 pi x) = (e^{2 pi i x} - e^{-2 pi i x}) / 2i
        let mut v = SpectralField::zeros(&g, 2);
        v.coeffs[[0, 1, 0, 0]] = Complex64::new(0.0, -0.5);
        v.coeffs[[0, 7, 0, 0]] = Complex64::new(0.0, 0.5);
        let w = vertical_velocity(&v).unwrap();
        let (xs, zs) = (g.x_nodes(), g.z_nodes());
        for (i, x) in xs.iter().enumerate() {
            for (j, z) in zs.iter().enumerate() {
                let exact = -2.0 * PI * (2.0 * PI * x).cos() * (1.0 - (PI / 2.0 * (z + 1.0)).cos()) / (PI / 2.0);
                assert!((w.values[[0, i, 3, j]] - exact).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gauss_points_integrate_triple_products() {
        let g = Grid::new(4, 8, 1.7).unwrap();
        let ws = NonlinearWorkspace::new(&g, true);
        let lam = &g.basis().lambdas;
        let (_, nq) = ws.padded_shape();
        // int_0^h sin(a s) sin(b s) cos(c s) ds against the closed form
        let (a, b, c) = (lam[7], lam[6], lam[7]);
        let quad: f64 = (0..nq)
            .map(|q| {
                let s = ws.z[q] + 1.7;
                ws.sin_proj[[q, 7]] * 1.7 / 2.0 * (b * s).sin() * (c * s).cos()
            })
            .sum();
        let prim = |f: f64| if f == 0.0 { 1.7 } else { (f * 1.7).sin() / f };
        // sin a sin b cos c = (cos(a-b) - cos(a+b)) cos c / 2
        let exact = 0.25 * (prim(a - b + c) + prim(a - b - c) - prim(a + b + c) - prim(a + b - c));
        assert!((quad - exact).abs() < 1e-14, "{quad} {exact}");
    }

    #[test]
    fn zero_in_zero_out() {
        let g = Grid::new(8, 4, 1.0).unwrap();
        let v = SpectralField::zeros(&g, 2);
        for dealias in [true, false] {
            assert_eq!(advection(&v, dealias).unwrap().max_abs_coeff(), 0.0);
            assert_eq!(divergence_form(&v, dealias).unwrap().max_abs_coeff(), 0.0);
        }
    }
}
