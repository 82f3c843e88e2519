use std::f64::consts::PI;

use hydrostokes::projection::{check_solenoidal, helmholtz_2d, project_hydrostatic, z_constant};
use hydrostokes::spectral::{
    bottom_shear, horizontal_derivative, laplacian, sample_field, Grid, HorizontalAxis, SampleSpec, SpectralField,
};
use hydrostokes::stokes::{build_mode_operator, spectral_bound, HydrostaticStokes, Subspace};
use hydrostokes::Error;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn smooth(grid: &Grid, seed: u64) -> SpectralField {
    sample_field(grid, 2, &SampleSpec::smooth(2, grid.k().min(6)), seed)
}

fn single_mode(grid: &Grid, comp: usize, m: usize, n: usize, k: usize, amp: Complex64) -> SpectralField {
    let mut f = SpectralField::zeros(grid, 2);
    f.coeffs[[comp, m, n, k]] = amp;
    let (pm, pn) = f.partner(m, n);
    f.coeffs[[comp, pm, pn, k]] = amp.conj();
    f
}

/// Classical RK4 on `dc/dt = M c + f`, fine enough to serve as reference.
fn rk4(m: &DMatrix<f64>, c0: &DVector<f64>, f: &DVector<f64>, t: f64, steps: usize) -> DVector<f64> {
    let dt = t / steps as f64;
    let rhs = |c: &DVector<f64>| m * c + f;
    let mut c = c0.clone();
    for _ in 0..steps {
        let k1 = rhs(&c);
        let k2 = rhs(&(&c + &k1 * (dt / 2.0)));
        let k3 = rhs(&(&c + &k2 * (dt / 2.0)));
        let k4 = rhs(&(&c + &k3 * dt));
        c += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    }
    c
}

#[test]
fn perpendicular_mode_is_an_eigenvector() {
    let g = Grid::new(8, 4, 1.0).unwrap();
    let op = HydrostaticStokes::new(&g);
    let lam = g.basis().lambdas[2];
    let v = single_mode(&g, 1, 1, 0, 2, Complex64::new(0.7, 0.2));
    let av = op.apply_a(&v).unwrap();
    let expect = v.scaled(-(4.0 * PI * PI + lam * lam));
    assert!(av.sub(&expect).l2_norm() < 1e-12 * expect.l2_norm());
}

#[test]
fn zero_mode_is_pure_vertical_heat() {
    let g = Grid::new(4, 5, 1.0).unwrap();
    let op = HydrostaticStokes::new(&g);
    let v = single_mode(&g, 0, 0, 0, 3, Complex64::new(1.0, 0.0));
    let lam = g.basis().lambdas[3];
    let av = op.apply_a(&v).unwrap();
    assert!(av.sub(&v.scaled(-lam * lam)).l2_norm() < 1e-12);
    let ev = op.semigroup_apply(0.05, &v).unwrap();
    assert!((ev.coeffs[[0, 0, 0, 3]].re - (-lam * lam * 0.05).exp()).abs() < 1e-14);
}

#[test]
fn apply_a_matches_assembled_laplacian_plus_shear_term() {
    let g = Grid::new(8, 6, 1.3).unwrap();
    let op = HydrostaticStokes::new(&g);
    let v = hydrostokes::spectral::random_spectral(&g, 2, 11);
    let shear = bottom_shear(&v);
    let q = helmholtz_2d(&g, &shear);
    let b_term = z_constant(&g, &(&shear - &q).mapv(|c| c / g.h()));
    let assembled = laplacian(&v).add(&b_term);
    let av = op.apply_a(&v).unwrap();
    assert!(av.sub(&assembled).l2_norm() <= 1e-12 * assembled.l2_norm());
}

#[test]
fn identity_at_time_zero_and_time_errors() {
    let g = Grid::new(4, 3, 1.0).unwrap();
    let op = HydrostaticStokes::new(&g);
    let v = smooth(&g, 1);
    assert_eq!(op.semigroup_apply(0.0, &v).unwrap(), v);
    assert!(matches!(op.semigroup_apply(-1e-3, &v), Err(Error::Time(_))));
    assert!(matches!(op.phi1_apply(0.0, &v), Err(Error::Time(_))));
    assert!(matches!(op.phi1_apply(-1.0, &v), Err(Error::Time(_))));
}

#[test]
fn semigroup_law() {
    let g = Grid::new(8, 8, 1.0).unwrap();
    let op = HydrostaticStokes::new(&g);
    let v = smooth(&g, 3);
    for s in [0.01, 0.1, 1.0] {
        for t in [0.01, 0.1, 1.0] {
            let lhs = op.semigroup_apply(s + t, &v).unwrap();
            let rhs = op.semigroup_apply(s, &op.semigroup_apply(t, &v).unwrap()).unwrap();
            assert!(lhs.sub(&rhs).l2_norm() <= 1e-10 * v.l2_norm(), "s={s} t={t}");
        }
    }
}

#[test]
fn generator_consistency_is_first_order() {
    let g = Grid::new(8, 6, 1.0).unwrap();
    let op = HydrostaticStokes::new(&g);
    let v = smooth(&g, 5);
    let av = op.apply_a(&v).unwrap();
    let err = |tau: f64| {
        let e = op.semigroup_apply(tau, &v).unwrap();
        e.sub(&v).scaled(1.0 / tau).sub(&av).l2_norm()
    };
    let (e1, e2) = (err(1e-3), err(1e-4));
    let order = (e1 / e2).log10();
    assert!(order >= 0.9, "order {order}");
}

#[test]
fn matches_ode_integration_on_a_coupled_block() {
    let g = Grid::new(8, 8, 1.0).unwrap();
    let op = HydrostaticStokes::new(&g);
    let mode = build_mode_operator(&g, 1, 1);
    let [dx, dy] = mode.direction.unwrap();
    let c0 = DVector::from_fn(8, |i, _| ((i * 37 + 5) % 11) as f64 / 11.0 - 0.45);
    let mut v = SpectralField::zeros(&g, 2);
    for k in 0..8 {
        v.coeffs[[0, 1, 1, k]] = Complex64::new(dx * c0[k], 0.0);
        v.coeffs[[1, 1, 1, k]] = Complex64::new(dy * c0[k], 0.0);
    }
    let out = op.semigroup_apply(0.1, &v).unwrap();
    let reference = rk4(&mode.parallel_block(), &c0, &DVector::zeros(8), 0.1, 4000);
    for k in 0..8 {
        let par = dx * out.coeffs[[0, 1, 1, k]] + dy * out.coeffs[[1, 1, 1, k]];
        assert!((par.re - reference[k]).abs() < 1e-8, "k={k}");
        assert!(par.im.abs() < 1e-15);
    }
}

#[test]
fn phi1_solves_forced_problem() {
    let g = Grid::new(8, 8, 1.0).unwrap();
    let op = HydrostaticStokes::new(&g);
    let mode = build_mode_operator(&g, 1, 1);
    let [dx, dy] = mode.direction.unwrap();
    let c0 = DVector::from_fn(8, |i, _| (i as f64 * 0.7).sin());
    let f0 = DVector::from_fn(8, |i, _| (i as f64 * 1.3).cos());
    let lift = |c: &DVector<f64>| {
        let mut v = SpectralField::zeros(&g, 2);
        for k in 0..8 {
            v.coeffs[[0, 1, 1, k]] = Complex64::new(dx * c[k], 0.0);
            v.coeffs[[1, 1, 1, k]] = Complex64::new(dy * c[k], 0.0);
        }
        v
    };
    let t = 0.1;
    let mut out = op.semigroup_apply(t, &lift(&c0)).unwrap();
    out.axpy(t, &op.phi1_apply(t, &lift(&f0)).unwrap());
    let reference = rk4(&mode.parallel_block(), &c0, &f0, t, 4000);
    for k in 0..8 {
        let par = dx * out.coeffs[[0, 1, 1, k]] + dy * out.coeffs[[1, 1, 1, k]];
        assert!((par.re - reference[k]).abs() < 1e-9, "k={k}");
    }
}

#[test]
fn phi1_scalar_and_small_time_limit() {
    let g = Grid::new(8, 6, 1.0).unwrap();
    let op = HydrostaticStokes::new(&g);
    let v = smooth(&g, 8);
    let t = 1e-6;
    let diff = op.phi1_apply(t, &v).unwrap().sub(&v).l2_norm();
    let av = op.apply_a(&v).unwrap().l2_norm();
    assert!(diff <= t * av, "{diff} vs {}", t * av);
}

#[test]
fn resolvent_examples_and_residual() {
    let g = Grid::new(8, 6, 1.0).unwrap();
    let op = HydrostaticStokes::new(&g);
    let lam = g.basis().lambdas[1];
    let f = single_mode(&g, 1, 1, 0, 1, Complex64::new(1.0, 0.0));
    let r = op.resolvent_apply(Complex64::new(1.0, 0.0), &f).unwrap();
    let expect = 1.0 / (1.0 + 4.0 * PI * PI + lam * lam);
    assert!((r.coeffs[[1, 1, 0, 1]].re - expect).abs() < 1e-15);

    let f = hydrostokes::spectral::random_spectral(&g, 2, 2);
    for z in [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 30.0), Complex64::new(0.0, -5.0)] {
        let r = op.resolvent_apply(z, &f).unwrap();
        let mut res = r.clone();
        for c in res.coeffs.iter_mut() {
            *c *= z;
        }
        let res = res.sub(&op.apply_a(&r).unwrap()).sub(&f);
        assert!(res.l2_norm() <= 1e-10 * f.l2_norm(), "{z}");
    }

    let err = op.resolvent_apply(Complex64::new(-PI * PI / 4.0, 0.0), &f);
    assert!(matches!(err, Err(Error::Singular { .. })));
}

#[test]
fn resolvent_is_laplace_transform_of_semigroup() {
    let g = Grid::new(4, 4, 1.0).unwrap();
    let op = HydrostaticStokes::new(&g);
    let v = smooth(&g, 21);
    let z = 1.0;
    // composite Simpson on [0, 40] advanced by the one-step propagator
    let (t_end, cells) = (40.0, 8000);
    let dt = t_end / cells as f64;
    let mut acc = SpectralField::zeros(&g, 2);
    let mut cur = v.clone();
    for j in 0..=cells {
        let w = if j == 0 || j == cells { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
        let t = j as f64 * dt;
        acc.axpy(w * dt / 3.0 * (-z * t).exp(), &cur);
        cur = op.semigroup_apply(dt, &cur).unwrap();
    }
    let r = op.resolvent_apply(Complex64::new(z, 0.0), &v).unwrap();
    assert!(acc.sub(&r).l2_norm() <= 1e-4 * r.l2_norm());
}

#[test]
fn commutes_with_horizontal_derivatives() {
    let g = Grid::new(8, 5, 0.7).unwrap();
    let op = HydrostaticStokes::new(&g);
    let v = smooth(&g, 4);
    for axis in [HorizontalAxis::X, HorizontalAxis::Y] {
        let a = horizontal_derivative(&op.semigroup_apply(0.03, &v).unwrap(), axis);
        let b = op.semigroup_apply(0.03, &horizontal_derivative(&v, axis)).unwrap();
        assert!(a.sub(&b).l2_norm() <= 1e-14 * a.l2_norm().max(1.0));
    }
}

#[test]
fn cache_reuses_shell_blocks() {
    let g = Grid::new(8, 4, 1.0).unwrap();
    let op = HydrostaticStokes::new(&g);
    let v = hydrostokes::spectral::random_spectral(&g, 2, 9);
    let a = op.semigroup_apply(0.2, &v).unwrap();
    let entries = op.cache().len();
    let b = op.semigroup_apply(0.2, &v).unwrap();
    assert_eq!(op.cache().len(), entries);
    assert_eq!(a, b);
    op.cache().clear();
    assert_eq!(op.semigroup_apply(0.2, &v).unwrap(), a);
}

#[test]
fn spectra_are_stable_across_sweep() {
    for h in [0.5, 1.0, 2.0] {
        for (n, k) in [(4, 1), (8, 16), (16, 64), (64, 8)] {
            let g = Grid::new(n, k, h).unwrap();
            let full = spectral_bound(&g, Subspace::Full);
            let sol = spectral_bound(&g, Subspace::Solenoidal);
            assert!(full.bound < 0.0 && sol.bound < 0.0, "n={n} k={k} h={h}");
            assert!(full.bound >= sol.bound);
            assert!((sol.bound + (PI / (2.0 * h)).powi(2)).abs() < 1e-9 * sol.bound.abs());
            assert!(full.modes.iter().all(|m| m.eigenvalues.iter().all(|z| z.re < 0.0)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solenoidal_data_stay_solenoidal_and_contract(seed in 0u64..10_000, t in 1e-3f64..2.0) {
        let g = Grid::new(8, 6, 1.0).unwrap();
        let op = HydrostaticStokes::new(&g);
        let v = project_hydrostatic(&hydrostokes::spectral::random_spectral(&g, 2, seed)).unwrap();
        let out = op.semigroup_apply(t, &v).unwrap();
        prop_assert!(check_solenoidal(&out) <= 1e-12);
        prop_assert!(out.l2_norm() <= v.l2_norm() * (1.0 + 1e-12));
        prop_assert!(out.reality_defect() <= 1e-12 * v.max_abs_coeff());
    }
}
