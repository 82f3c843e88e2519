use std::f64::consts::PI;

use hydrostokes::nonlinear::{vertical_velocity, NonlinearWorkspace};
use hydrostokes::projection::project_hydrostatic;
use hydrostokes::spectral::{forward_transform, sample_field, Grid, PhysicalField, SampleSpec, SpectralField};
use proptest::prelude::*;

/// Band-limited solenoidal field without Nyquist content.
fn solenoidal(grid: &Grid, seed: u64) -> SpectralField {
    let cutoff = grid.n() as i64 / 2 - 1;
    let v = sample_field(grid, 2, &SampleSpec::smooth(cutoff, grid.k()), seed);
    project_hydrostatic(&v).unwrap()
}

fn analytic(grid: &Grid) -> SpectralField {
    let h = grid.h();
    let f = PhysicalField::from_fn(grid, 2, |c, x, y, z| {
        let s = PI * (z + h) / (2.0 * h);
        let horiz = if c == 0 { (0.6 * (2.0 * PI * y).sin()).exp() } else { 1.0 / (1.5 + (2.0 * PI * x).cos()) };
        horiz * (s.sin() + 0.3 * (3.0 * s).sin())
    });
    forward_transform(&f).unwrap()
}

#[test]
fn top_value_of_w_vanishes_for_solenoidal_fields() {
    let g = Grid::new(16, 8, 1.0).unwrap();
    let v = solenoidal(&g, 3);
    let w = vertical_velocity(&v).unwrap();
    assert!(w.max_abs() > 1e-3);
    // w(0) = -h * div_H mean(v), evaluated through the cosine table at z = 0
    let lam = &g.basis().lambdas;
    let div = hydrostokes::spectral::horizontal_divergence(&v).unwrap();
    let mut worst: f64 = 0.0;
    for m in 0..16 {
        for n in 0..16 {
            let top: num_complex::Complex64 = (0..8).map(|k| div.coeffs[[0, m, n, k]] / lam[k]).sum();
            worst = worst.max(top.norm());
        }
    }
    assert!(worst <= 1e-11 * v.l2_norm());
}

#[test]
fn advection_is_energy_neutral_on_solenoidal_fields() {
    for (n, k, h) in [(8, 4, 1.0), (16, 8, 0.7), (12, 10, 2.0)] {
        let g = Grid::new(n, k, h).unwrap();
        let ws = NonlinearWorkspace::new(&g, true);
        for seed in 0..3 {
            let v = solenoidal(&g, seed);
            let adv = ws.advection(&v).unwrap();
            let e = adv.inner(&v);
            let scale = v.l2_norm().powi(2) * adv.l2_norm();
            assert!(e.abs() <= 1e-12 * scale, "{n} {k} {h}: {e} vs {scale}");
        }
    }
}

#[test]
fn advective_and_divergence_forms_agree() {
    let g = Grid::new(16, 8, 1.0).unwrap();
    let ws = NonlinearWorkspace::new(&g, true);
    for seed in 0..3 {
        let v = solenoidal(&g, 10 + seed);
        let a = ws.advection(&v).unwrap();
        let b = ws.divergence_form(&v).unwrap();
        assert!(a.sub(&b).l2_norm() <= 1e-9 * a.l2_norm());
    }
}

#[test]
fn aliased_products_lose_the_identities() {
    // without padding the collocation products alias, so the two forms drift apart
    let g = Grid::new(8, 4, 1.0).unwrap();
    let v = solenoidal(&g, 1);
    let ws = NonlinearWorkspace::new(&g, false);
    let a = ws.advection(&v).unwrap();
    let b = ws.divergence_form(&v).unwrap();
    assert!(a.sub(&b).l2_norm() > 1e-6 * a.l2_norm());
}

#[test]
fn padded_result_is_independent_of_resolution_for_band_limited_data() {
    let g = Grid::new(8, 4, 1.0).unwrap();
    let fine = Grid::new(16, 8, 1.0).unwrap();
    let v = solenoidal(&g, 5);
    let coarse_out = NonlinearWorkspace::new(&g, true).advection(&v).unwrap();
    let fine_out = NonlinearWorkspace::new(&fine, true).advection(&v.resample(&fine).unwrap()).unwrap();
    let back = fine_out.resample(&g).unwrap();
    assert!(coarse_out.sub(&back).l2_norm() <= 1e-11 * coarse_out.l2_norm());
}

#[test]
fn resolution_convergence_for_analytic_fields() {
    let grids: Vec<Grid> = [(8, 4), (16, 8), (32, 16)].iter().map(|&(n, k)| Grid::new(n, k, 1.0).unwrap()).collect();
    let outs: Vec<SpectralField> =
        grids.iter().map(|g| NonlinearWorkspace::new(g, true).advection(&analytic(g)).unwrap()).collect();
    let d1 = outs[0].sub(&outs[1].resample(&grids[0]).unwrap()).l2_norm();
    let d2 = outs[1].sub(&outs[2].resample(&grids[1]).unwrap()).l2_norm();
    assert!(d2 < 0.1 * d1, "{d1} {d2}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn energy_neutrality_holds_for_random_seeds(seed in 0u64..100_000) {
        let g = Grid::new(8, 6, 1.0).unwrap();
        let v = solenoidal(&g, seed);
        let adv = NonlinearWorkspace::new(&g, true).advection(&v).unwrap();
        let scale = v.l2_norm().powi(2) * adv.l2_norm();
        prop_assert!(adv.inner(&v).abs() <= 1e-12 * scale);
        prop_assert!(adv.reality_defect() <= 1e-12 * adv.max_abs_coeff().max(1e-300));
    }
}
