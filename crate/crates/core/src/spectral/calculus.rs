use ndarray::{s, Array2, Array3, Array4, Axis};
use num_complex::Complex64;

use super::field::{PhysicalField, SpectralField};
use super::transform::{inverse_transform, synthesize};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HorizontalAxis {
    X,
    Y,
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Multiply every coefficient by `i xi_axis`.
pub fn horizontal_derivative(c: &SpectralField, axis: HorizontalAxis) -> SpectralField {
    let g = &c.grid;
    let mut out = c.clone();
    for ((_, m, n, _), v) in out.coeffs.indexed_iter_mut() {
        let xi = match axis {
            HorizontalAxis::X => g.wavenumber(m),
            HorizontalAxis::Y => g.wavenumber(n),
        };
        *v *= I * xi;
    }
    out
}

/// `div_H` of a two-component field, as a scalar spectral field.
pub fn horizontal_divergence(c: &SpectralField) -> Result<SpectralField> {
    c.require_ncomp(2, "horizontal_divergence")?;
    let g = &c.grid;
    let mut out = SpectralField::zeros(g, 1);
    for ((_, m, n, k), v) in out.coeffs.indexed_iter_mut() {
        *v = I * (g.wavenumber(m) * c.coeffs[[0, m, n, k]] + g.wavenumber(n) * c.coeffs[[1, m, n, k]]);
    }
    Ok(out)
}

/// Spectral Laplacian: `-(|xi|^2 + lambda_k^2)` per coefficient.
pub fn laplacian(c: &SpectralField) -> SpectralField {
    let g = &c.grid;
    let lam = &g.basis().lambdas;
    let mut out = c.clone();
    for ((_, m, n, k), v) in out.coeffs.indexed_iter_mut() {
        *v *= -(g.wavenumber_sq(m, n) + lam[k] * lam[k]);
    }
    out
}

/// `d/dz` evaluated at the nodes through the cosine series
/// `sum_k c_k lambda_k cos(lambda_k (z+h))`.
pub fn vertical_derivative(c: &SpectralField) -> Result<PhysicalField> {
    let g = &c.grid;
    let b = g.basis();
    let table = Array2::from_shape_fn(b.cos_table.dim(), |(k, j)| b.lambdas[k] * b.cos_table[[k, j]]);
    evaluate_with(c, &table)
}

/// `(1/h) int_{-h}^0 v dz` per component and horizontal mode, `[comp, m, n]`.
pub fn vertical_mean(c: &SpectralField) -> Array3<Complex64> {
    let g = &c.grid;
    let w: Vec<f64> = g.basis().lambdas.iter().map(|l| 1.0 / (g.h() * l)).collect();
    let (nc, nn, _, _) = c.coeffs.dim();
    Array3::from_shape_fn((nc, nn, nn), |(comp, m, n)| {
        c.coeffs.slice(s![comp, m, n, ..]).iter().zip(&w).map(|(v, w)| v * w).sum()
    })
}

/// `int_{-h}^{z} f dr` at the nodes for a scalar field.
pub fn vertical_integral_from_bottom(c: &SpectralField) -> Result<PhysicalField> {
    c.require_ncomp(1, "vertical_integral_from_bottom")?;
    let b = c.grid.basis();
    let table = Array2::from_shape_fn(b.cos_table.dim(), |(k, j)| (1.0 - b.cos_table[[k, j]]) / b.lambdas[k]);
    evaluate_with(c, &table)
}

/// Per-mode bottom shear `d_z v |_{z=-h} = sum_k lambda_k c_k`, `[comp, m, n]`.
pub fn bottom_shear(c: &SpectralField) -> Array3<Complex64> {
    let lam = &c.grid.basis().lambdas;
    let (nc, nn, _, _) = c.coeffs.dim();
    Array3::from_shape_fn((nc, nn, nn), |(comp, m, n)| {
        c.coeffs.slice(s![comp, m, n, ..]).iter().zip(lam).map(|(v, l)| v * *l).sum()
    })
}

/// Full gradient at the nodes. Components are ordered
/// `(d_x v_c, d_y v_c, d_z v_c)` for each input component `c`.
pub fn gradient(c: &SpectralField) -> Result<PhysicalField> {
    let dx = inverse_transform(&horizontal_derivative(c, HorizontalAxis::X))?;
    let dy = inverse_transform(&horizontal_derivative(c, HorizontalAxis::Y))?;
    let dz = vertical_derivative(c)?;
    let mut parts = Vec::new();
    for comp in 0..c.ncomp() {
        for f in [&dx, &dy, &dz] {
            parts.push(f.values.slice(s![comp..comp + 1, .., .., ..]).to_owned());
        }
    }
    let views: Vec<_> = parts.iter().map(|p| p.view()).collect();
    let values = ndarray::concatenate(Axis(0), &views).expect("same shapes");
    Ok(PhysicalField { grid: c.grid.clone(), values })
}

/// Horizontal gradient only: `(d_x v_c, d_y v_c)` per component.
pub fn horizontal_gradient(c: &SpectralField) -> Result<PhysicalField> {
    let dx = inverse_transform(&horizontal_derivative(c, HorizontalAxis::X))?;
    let dy = inverse_transform(&horizontal_derivative(c, HorizontalAxis::Y))?;
    let mut parts = Vec::new();
    for comp in 0..c.ncomp() {
        for f in [&dx, &dy] {
            parts.push(f.values.slice(s![comp..comp + 1, .., .., ..]).to_owned());
        }
    }
    let views: Vec<_> = parts.iter().map(|p| p.view()).collect();
    let values = ndarray::concatenate(Axis(0), &views).expect("same shapes");
    Ok(PhysicalField { grid: c.grid.clone(), values })
}

fn evaluate_with(c: &SpectralField, table: &Array2<f64>) -> Result<PhysicalField> {
    let g = &c.grid;
    let mut values = Array4::<f64>::zeros((c.ncomp(), g.n(), g.n(), g.k()));
    for comp in 0..c.ncomp() {
        let v = synthesize(g, c.coeffs.index_axis(Axis(0), comp), table.view(), g.n())?;
        values.slice_mut(s![comp, .., .., ..]).assign(&v);
    }
    Ok(PhysicalField { grid: g.clone(), values })
}
