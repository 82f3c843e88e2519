use ndarray::Array3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::ScanReport;
use crate::spectral::norm::lp;

/// Side lengths of the discrete torus `[0,1)^3` used for convolution tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusShape {
    pub n: usize,
    pub nz: usize,
}

impl Default for TorusShape {
    fn default() -> Self {
        Self { n: 8, nz: 8 }
    }
}

impl TorusShape {
    pub fn cell(&self) -> f64 {
        1.0 / (self.n * self.n * self.nz) as f64
    }
}

/// `L^q_H L^p_z` on the unit torus with node quadrature.
pub fn torus_mixed_norm(values: &Array3<f64>, q: f64, p: f64) -> f64 {
    let (n, _, nz) = values.dim();
    let cols = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| {
        lp((0..nz).map(|l| values[[i, j, l]].abs()), 1.0 / nz as f64, p)
    });
    lp(cols, 1.0 / (n * n) as f64, q)
}

pub fn torus_l1(values: &Array3<f64>) -> f64 {
    let (n, _, nz) = values.dim();
    values.iter().map(|v| v.abs()).sum::<f64>() / (n * n * nz) as f64
}

/// `(g * f)(x) = sum_y g(x - y) f(y) |cell|`, by direct summation.
pub fn periodic_convolution(g: &Array3<f64>, f: &Array3<f64>) -> Array3<f64> {
    let (n, _, nz) = f.dim();
    let cell = 1.0 / (n * n * nz) as f64;
    Array3::from_shape_fn((n, n, nz), |(a, b, c)| {
        let mut s = 0.0;
        for ((i, j, l), fv) in f.indexed_iter() {
            if *fv == 0.0 {
                continue;
            }
            s += g[[(a + n - i) % n, (b + n - j) % n, (c + nz - l) % nz]] * fv;
        }
        s * cell
    })
}

/// `||g * f|| / (||g||_1 ||f||)` over random pairs; the discrete inequality
/// is exact, so every ratio should be at most one up to round-off.
pub fn young_anisotropic_test(samples: usize, q: f64, p: f64, seed: u64, shape: TorusShape) -> ScanReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ScanReport::new(format!("young_q{q}_p{p}"));
    let dims = (shape.n, shape.n, shape.nz);
    for s in 0..samples {
        let signed = s % 2 == 1;
        let mut draw = |sparse: bool| {
            Array3::from_shape_fn(dims, |_| {
                if sparse && rng.gen_bool(0.8) {
                    return 0.0;
                }
                if signed {
                    rng.gen_range(-1.0..1.0)
                } else {
                    rng.gen_range(0.0..1.0)
                }
            })
        };
        let g = draw(s % 3 == 0);
        let f = draw(false);
        let conv = periodic_convolution(&g, &f);
        let den = torus_l1(&g) * torus_mixed_norm(&f, q, p);
        report.record(shape.n, s, 0.0, 0.0, torus_mixed_norm(&conv, q, p), den);
    }
    report.finish(shape.n, None);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn delta_kernel_is_identity() {
        let shape = TorusShape::default();
        let mut g = Array3::zeros((8, 8, 8));
        g[[0, 0, 0]] = 1.0 / shape.cell();
        let f = Array3::from_shape_fn((8, 8, 8), |(i, j, l)| ((i * 3 + j * 5 + l * 7) % 11) as f64 - 4.0);
        let c = periodic_convolution(&g, &f);
        assert!((&c - &f).iter().all(|d| d.abs() < 1e-12));
        let ratio = torus_mixed_norm(&c, f64::INFINITY, 4.0) / (torus_l1(&g) * torus_mixed_norm(&f, f64::INFINITY, 4.0));
        assert!((ratio - 1.0).abs() < 1e-14);
    }

    #[test]
    fn box_kernel_on_a_mode_gives_its_symbol() {
        // g = normalized box over offsets {-1,0,1} in x; f = cos(2 pi x)
        let n = 8;
        let mut g = Array3::zeros((n, n, n));
        for i in [n - 1, 0, 1] {
            g[[i, 0, 0]] = (n * n * n) as f64 / 3.0;
        }
        let f = Array3::from_shape_fn((n, n, n), |(i, _, _)| (2.0 * PI * i as f64 / n as f64).cos());
        let c = periodic_convolution(&g, &f);
        let symbol = (1.0 + 2.0 * (2.0 * PI / n as f64).cos()) / 3.0;
        for (q, p) in [(f64::INFINITY, 4.0), (2.0, 2.0), (1.0, f64::INFINITY)] {
            let ratio = torus_mixed_norm(&c, q, p) / (torus_l1(&g) * torus_mixed_norm(&f, q, p));
            assert!((ratio - symbol).abs() < 1e-12, "{q} {p}");
        }
    }

    #[test]
    fn random_pairs_respect_the_inequality() {
        let r = young_anisotropic_test(12, 2.0, 3.0, 5, TorusShape { n: 4, nz: 4 });
        assert_eq!(r.rows.len(), 12);
        assert!(r.sup <= 1.0 + 1e-10);
    }
}
