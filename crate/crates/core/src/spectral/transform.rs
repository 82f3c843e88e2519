use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use ndarray::{s, Array2, Array3, Array4, ArrayView2, ArrayView3, Axis};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::{PhysicalField, SpectralField};
use super::grid::{freq_of, Grid};
use crate::error::{Error, Result};

/// Relative imaginary residue tolerated when synthesizing a real field.
pub const REALITY_TOL: f64 = 1e-12;

type Plans = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plans(n: usize) -> Plans {
    static CACHE: OnceLock<Mutex<HashMap<usize, Plans>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        })
        .clone()
}

/// Unnormalized 2-D DFT of a square slab, in place.
pub(crate) fn fft2(slab: &mut Array2<Complex64>, inverse: bool) {
    let n = slab.nrows();
    debug_assert_eq!(n, slab.ncols());
    let (fwd, inv) = plans(n);
    let plan = if inverse { inv } else { fwd };
    let mut buf: Vec<Complex64> = slab.iter().copied().collect();
    plan.process(&mut buf);
    let mut t = Array2::from_shape_vec((n, n), buf).expect("square").reversed_axes().as_standard_layout().to_owned();
    plan.process(t.as_slice_mut().expect("contiguous"));
    slab.assign(&t.reversed_axes());
}

/// Where each horizontal index of an `n`-grid lands on a padded `m`-grid.
/// The Nyquist coefficient is split evenly between `-n/2` and `+n/2` so that
/// the padded field is real and agrees with the original at the old nodes.
fn pad_targets(i: usize, n: usize, m: usize) -> Vec<(usize, f64)> {
    if m == n {
        return vec![(i, 1.0)];
    }
    let f = freq_of(i, n);
    let half = n as i64 / 2;
    if f == -half {
        vec![((m as i64 - half) as usize, 0.5), (half as usize, 0.5)]
    } else {
        vec![(f.rem_euclid(m as i64) as usize, 1.0)]
    }
}

/// Evaluate one component on an `m_out x m_out` horizontal grid (`m_out >= N`)
/// at the vertical points encoded by `table[k, z]`.
///
/// Returns values `[i, j, z]`. Fails if the result is not real.
pub(crate) fn synthesize(
    grid: &Grid,
    coeffs: ArrayView3<Complex64>,
    table: ArrayView2<f64>,
    m_out: usize,
) -> Result<Array3<f64>> {
    let n = grid.n();
    let nz = table.ncols();
    let (re, im) = split_dot(coeffs, table);
    let targets: Vec<Vec<(usize, f64)>> = (0..n).map(|i| pad_targets(i, n, m_out)).collect();

    let mut out = Array3::<f64>::zeros((m_out, m_out, nz));
    let mut worst_im: f64 = 0.0;
    let mut worst: f64 = 0.0;
    let mut slab = Array2::<Complex64>::zeros((m_out, m_out));
    for z in 0..nz {
        slab.fill(Complex64::new(0.0, 0.0));
        for a in 0..n {
            for b in 0..n {
                let c = Complex64::new(re[[a * n + b, z]], im[[a * n + b, z]]);
                if c.re == 0.0 && c.im == 0.0 {
                    continue;
                }
                for &(ta, wa) in &targets[a] {
                    for &(tb, wb) in &targets[b] {
                        slab[[ta, tb]] += c * (wa * wb);
                    }
                }
            }
        }
        fft2(&mut slab, true);
        for ((i, j), v) in slab.indexed_iter() {
            worst_im = worst_im.max(v.im.abs());
            worst = worst.max(v.norm());
            out[[i, j, z]] = v.re;
        }
    }
    if worst > 0.0 && worst_im > REALITY_TOL * worst {
        return Err(Error::Reality { residue: worst_im / worst });
    }
    Ok(out)
}

/// `[m*n, K] x [K, Z]` for the real and imaginary parts separately.
fn split_dot(coeffs: ArrayView3<Complex64>, table: ArrayView2<f64>) -> (Array2<f64>, Array2<f64>) {
    let (a, b, k) = coeffs.dim();
    let flat = coeffs.to_shape((a * b, k)).expect("reshape");
    let re = flat.mapv(|c| c.re).dot(&table);
    let im = flat.mapv(|c| c.im).dot(&table);
    (re, im)
}

/// Project real values `[i, j, z]` on an `m x m` horizontal grid onto the
/// grid's Fourier x sine modes. `projector[z, k]` carries the vertical
/// quadrature. When `m > N` the Nyquist row and column are zeroed.
pub(crate) fn analyze(grid: &Grid, values: ArrayView3<f64>, projector: ArrayView2<f64>) -> Array3<Complex64> {
    let n = grid.n();
    let (m, m2, nz) = values.dim();
    debug_assert_eq!(m, m2);
    let k = projector.ncols();
    let flat = values.to_shape((m * m, nz)).expect("reshape");
    let vert = flat.dot(&projector);
    let scale = 1.0 / (m * m) as f64;
    let mut out = Array3::<Complex64>::zeros((n, n, k));
    let mut slab = Array2::<Complex64>::zeros((m, m));
    let src: Vec<Option<usize>> = (0..n)
        .map(|i| {
            let f = freq_of(i, n);
            if m > n && f == -(n as i64) / 2 {
                None
            } else {
                Some(f.rem_euclid(m as i64) as usize)
            }
        })
        .collect();
    for l in 0..k {
        for a in 0..m {
            for b in 0..m {
                slab[[a, b]] = Complex64::new(vert[[a * m + b, l]], 0.0);
            }
        }
        fft2(&mut slab, false);
        for a in 0..n {
            let Some(sa) = src[a] else { continue };
            for b in 0..n {
                let Some(sb) = src[b] else { continue };
                out[[a, b, l]] = slab[[sa, sb]] * scale;
            }
        }
    }
    hermitian_average(&mut out);
    out
}

/// Make `c(-m,-n,k) = conj c(m,n,k)` hold exactly, so that sums and
/// differences of analyzed fields stay exactly real.
fn hermitian_average(c: &mut Array3<Complex64>) {
    let (n, _, k) = c.dim();
    for a in 0..n {
        for b in 0..n {
            let (pa, pb) = ((n - a) % n, (n - b) % n);
            if (pa, pb) < (a, b) {
                continue;
            }
            for l in 0..k {
                let avg = 0.5 * (c[[a, b, l]] + c[[pa, pb, l]].conj());
                c[[a, b, l]] = avg;
                c[[pa, pb, l]] = avg.conj();
            }
        }
    }
}

/// Vertical analysis matrix `[z, k] = (2/K) sin(lambda_k (z_j + h))`.
pub(crate) fn sine_projector(grid: &Grid) -> Array2<f64> {
    let scale = 2.0 / grid.k() as f64;
    grid.basis().sin_table.t().mapv(|v| v * scale)
}

/// Horizontal-only transform of a planar slab `[i, j]` (scaled by `1/N^2`).
pub fn planar_forward(values: ArrayView2<f64>) -> Array2<Complex64> {
    let n = values.nrows();
    let mut slab = values.mapv(|v| Complex64::new(v, 0.0));
    fft2(&mut slab, false);
    slab.mapv_inplace(|c| c / (n * n) as f64);
    slab
}

/// Inverse of [`planar_forward`]; returns complex values.
pub fn planar_inverse(coeffs: ArrayView2<Complex64>) -> Array2<Complex64> {
    let mut slab = coeffs.to_owned();
    fft2(&mut slab, true);
    slab
}

pub fn forward_transform(f: &PhysicalField) -> Result<SpectralField> {
    let grid = &f.grid;
    let (c, a, b, k) = f.values.dim();
    if a != grid.n() || b != grid.n() || k != grid.k() {
        return Err(Error::Contract("physical field shape does not match its grid".into()));
    }
    let proj = sine_projector(grid);
    let mut coeffs = Array4::<Complex64>::zeros((c, a, b, k));
    for comp in 0..c {
        let spec = analyze(grid, f.values.index_axis(Axis(0), comp), proj.view());
        coeffs.slice_mut(s![comp, .., .., ..]).assign(&spec);
    }
    SpectralField::from_coeffs(grid, coeffs)
}

pub fn inverse_transform(c: &SpectralField) -> Result<PhysicalField> {
    let grid = &c.grid;
    let table = &grid.basis().sin_table;
    let mut values = Array4::<f64>::zeros((c.ncomp(), grid.n(), grid.n(), grid.k()));
    for comp in 0..c.ncomp() {
        let v = synthesize(grid, c.coeffs.index_axis(Axis(0), comp), table.view(), grid.n())?;
        values.slice_mut(s![comp, .., .., ..]).assign(&v);
    }
    Ok(PhysicalField { grid: grid.clone(), values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::random_spectral;
    use std::f64::consts::PI;

    #[test]
    fn basis_function_maps_to_unit_coefficient() {
        let g = Grid::new(8, 6, 1.0).unwrap();
        let l0 = g.basis().lambdas[0];
        let f = PhysicalField::from_fn(&g, 1, |_, _, _, z| (l0 * (z + 1.0)).sin());
        let c = forward_transform(&f).unwrap();
        for ((_, m, n, k), v) in c.coeffs.indexed_iter() {
            let expect = if (m, n, k) == (0, 0, 0) { 1.0 } else { 0.0 };
            assert!((v - Complex64::new(expect, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = Grid::new(6, 3, 2.0).unwrap();
        let c = forward_transform(&PhysicalField::zeros(&g, 2)).unwrap();
        assert!(c.coeffs.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn unit_coefficient_synthesizes_basis_function() {
        let g = Grid::new(8, 5, 1.0).unwrap();
        let mut c = SpectralField::zeros(&g, 1);
        c.coeffs[[0, 0, 0, 0]] = Complex64::new(1.0, 0.0);
        let f = inverse_transform(&c).unwrap();
        let zs = g.z_nodes();
        for ((_, _, _, l), v) in f.values.indexed_iter() {
            assert!((v - (PI / 2.0 * (zs[l] + 1.0)).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn reality_violation_is_rejected() {
        let g = Grid::new(8, 2, 1.0).unwrap();
        let mut c = SpectralField::zeros(&g, 1);
        c.coeffs[[0, 1, 0, 0]] = Complex64::new(1.0, 0.0);
        assert!(matches!(inverse_transform(&c), Err(Error::Reality { .. })));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let g = Grid::new(8, 2, 1.0).unwrap();
        let bad = PhysicalField { grid: g.clone(), values: Array4::zeros((1, 8, 8, 3)) };
        assert!(forward_transform(&bad).is_err());
    }

    #[test]
    fn random_round_trip() {
        let g = Grid::new(8, 8, 1.0).unwrap();
        let f = PhysicalField::from_fn(&g, 2, |c, x, y, z| {
            ((c + 1) as f64 * 13.1 * x + 7.3 * y * y + 3.0 * z).sin() + x * y * z
        });
        let back = inverse_transform(&forward_transform(&f).unwrap()).unwrap();
        let err = (&back.values - &f.values).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(err <= 1e-12 * f.max_abs(), "err={err}");
    }

    #[test]
    fn random_coefficients_round_trip() {
        let g = Grid::new(10, 7, 0.5).unwrap();
        let c = random_spectral(&g, 2, 11);
        let f = inverse_transform(&c).unwrap();
        let c2 = forward_transform(&f).unwrap();
        let err = (&c2.coeffs - &c.coeffs).iter().fold(0.0f64, |m, v| m.max(v.norm()));
        assert!(err < 1e-13, "err={err}");
    }

    #[test]
    fn padded_synthesis_agrees_at_shared_nodes() {
        let g = Grid::new(8, 4, 1.0).unwrap();
        let c = random_spectral(&g, 1, 5);
        let table = g.basis().sin_table.clone();
        let coarse = synthesize(&g, c.coeffs.index_axis(Axis(0), 0), table.view(), 8).unwrap();
        let fine = synthesize(&g, c.coeffs.index_axis(Axis(0), 0), table.view(), 16).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                for z in 0..4 {
                    assert!((coarse[[i, j, z]] - fine[[2 * i, 2 * j, z]]).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn parseval_holds() {
        let g = Grid::new(12, 9, 1.7).unwrap();
        let c = random_spectral(&g, 2, 3);
        let f = inverse_transform(&c).unwrap();
        let phys: f64 = f.values.iter().map(|v| v * v).sum::<f64>() * g.horizontal_weight() * g.vertical_weight();
        let spec = c.l2_norm().powi(2);
        assert!(((phys - spec) / spec).abs() < 1e-12);
    }
}
