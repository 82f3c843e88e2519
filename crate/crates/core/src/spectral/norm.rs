use ndarray::{Array2, ArrayView4};

use super::field::PhysicalField;
use crate::error::{Error, Result};

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::Exponent(p))
    }
}

/// `L^p` of nonnegative samples with equal quadrature weight `w`.
pub(crate) fn lp(samples: impl Iterator<Item = f64>, w: f64, p: f64) -> f64 {
    if p.is_infinite() {
        samples.fold(0.0, f64::max)
    } else {
        let s: f64 = samples.map(|v| v.powf(p)).sum();
        (s * w).powf(1.0 / p)
    }
}

/// Vertical `L^p` norm of the pointwise Euclidean magnitude, per horizontal
/// node: the inner norm of `L^q_H L^p_z`.
pub fn column_norms(values: ArrayView4<f64>, h: f64, p: f64) -> Result<Array2<f64>> {
    check_exponent(p)?;
    let (nc, n1, n2, k) = values.dim();
    let w = h / k as f64;
    Ok(Array2::from_shape_fn((n1, n2), |(i, j)| {
        lp(
            (0..k).map(|l| (0..nc).map(|c| values[[c, i, j, l]].powi(2)).sum::<f64>().sqrt()),
            w,
            p,
        )
    }))
}

/// `||f||_{L^q_H L^p_z}` with node quadrature: midpoint weights `h/K`
/// vertically, `1/N^2` horizontally, and node maxima for infinite exponents.
///
/// `q = infinity` is a max over the horizontal nodes, which under-resolves the
/// essential supremum of a non-smooth field; refine `N` to check.
pub fn norm_anisotropic(f: &PhysicalField, q: f64, p: f64) -> Result<f64> {
    check_exponent(q)?;
    let cols = column_norms(f.values.view(), f.grid.h(), p)?;
    Ok(lp(cols.iter().copied(), f.grid.horizontal_weight(), q))
}

/// `L2(Omega)` norm by node quadrature.
pub fn l2_norm(f: &PhysicalField) -> f64 {
    norm_anisotropic(f, 2.0, 2.0).expect("valid exponents")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;
    use std::f64::consts::PI;

    #[test]
    fn unit_constant() {
        let g = Grid::new(8, 5, 1.0).unwrap();
        let f = PhysicalField::from_fn(&g, 1, |_, _, _, _| 1.0);
        for q in [1.0, 2.0, 3.5, f64::INFINITY] {
            for p in [1.0, 4.0, f64::INFINITY] {
                assert!((norm_anisotropic(&f, q, p).unwrap() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn tensor_factorization() {
        let h = 2.5;
        let g = Grid::new(8, 6, h).unwrap();
        let f = PhysicalField::from_fn(&g, 1, |_, x, y, _| 1.0 + (2.0 * PI * x).sin() * (2.0 * PI * y).cos());
        let gvals: Vec<f64> = {
            let xs = g.x_nodes();
            let mut v = Vec::new();
            for x in &xs {
                for y in &xs {
                    v.push((1.0 + (2.0 * PI * x).sin() * (2.0 * PI * y).cos()).abs());
                }
            }
            v
        };
        for (q, p) in [(1.0, 2.0), (3.0, 5.0), (f64::INFINITY, 4.0)] {
            let gq = lp(gvals.iter().copied(), 1.0 / 64.0, q);
            let expect = gq * h.powf(1.0 / p);
            assert!((norm_anisotropic(&f, q, p).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn sine_sup_norm() {
        let g = Grid::new(8, 3, 1.0).unwrap();
        let f = PhysicalField::from_fn(&g, 1, |_, x, _, _| (2.0 * PI * x).sin());
        assert!((norm_anisotropic(&f, f64::INFINITY, 2.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_small_exponents() {
        let g = Grid::new(4, 1, 1.0).unwrap();
        let f = PhysicalField::zeros(&g, 1);
        assert!(matches!(norm_anisotropic(&f, 0.5, 2.0), Err(Error::Exponent(_))));
        assert!(matches!(norm_anisotropic(&f, 2.0, 0.9), Err(Error::Exponent(_))));
    }

    #[test]
    fn vector_fields_use_pointwise_magnitude() {
        let g = Grid::new(4, 2, 1.0).unwrap();
        let f = PhysicalField::from_fn(&g, 2, |c, _, _, _| if c == 0 { 3.0 } else { 4.0 });
        assert!((norm_anisotropic(&f, f64::INFINITY, f64::INFINITY).unwrap() - 5.0).abs() < 1e-14);
    }
}
