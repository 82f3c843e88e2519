use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::cache::{BlockFunction, BlockKey, SemigroupCache};
use super::expm::{expm, expm_and_phi1, phi1_scalar};
use super::operator::{build_mode_operator, ModeOperator};
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Relative distance to the spectrum below which the resolvent refuses.
pub const SINGULAR_TOL: f64 = 1e-10;

/// The discrete hydrostatic Stokes operator on one grid, with memoized
/// per-shell matrix functions.
pub struct HydrostaticStokes {
    grid: Grid,
    cache: SemigroupCache,
    eigen: Mutex<HashMap<u64, Arc<Vec<Complex64>>>>,
}

impl HydrostaticStokes {
    pub fn new(grid: &Grid) -> Self {
        Self::with_capacity(grid, 4096)
    }

    pub fn with_capacity(grid: &Grid, capacity: usize) -> Self {
        Self { grid: grid.clone(), cache: SemigroupCache::new(capacity), eigen: Mutex::new(HashMap::new()) }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn cache(&self) -> &SemigroupCache {
        &self.cache
    }

    pub fn mode_operator(&self, m: usize, n: usize) -> ModeOperator {
        build_mode_operator(&self.grid, m, n)
    }

    fn check(&self, v: &SpectralField) -> Result<()> {
        v.require_ncomp(2, "hydrostatic Stokes operator")?;
        if v.grid != self.grid {
            return Err(Error::Contract("field grid differs from operator grid".into()));
        }
        Ok(())
    }

    /// `A v = Delta v + B v`.
    pub fn apply_a(&self, v: &SpectralField) -> Result<SpectralField> {
        self.check(v)?;
        Ok(self.map_modes(v, |op| Arc::new(op.parallel_block()), |d| d))
    }

    /// `e^{tA} v`; `t = 0` is the identity.
    pub fn semigroup_apply(&self, t: f64, v: &SpectralField) -> Result<SpectralField> {
        self.check(v)?;
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Time(t));
        }
        if t == 0.0 {
            return Ok(v.clone());
        }
        Ok(self.map_modes(
            v,
            |op| self.block(op, t, BlockFunction::Exp, || expm(&(op.parallel_block() * t))),
            |d| (t * d).exp(),
        ))
    }

    /// `phi_1(tA) g = (tA)^{-1}(e^{tA} - I) g`, for `t > 0`.
    pub fn phi1_apply(&self, t: f64, g: &SpectralField) -> Result<SpectralField> {
        self.check(g)?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Time(t));
        }
        Ok(self.map_modes(
            g,
            |op| self.block(op, t, BlockFunction::Phi1, || expm_and_phi1(&op.parallel_block(), t).1),
            |d| phi1_scalar(t * d),
        ))
    }

    /// `(lambda - A)^{-1} f` by a dense solve per mode.
    pub fn resolvent_apply(&self, lambda: Complex64, f: &SpectralField) -> Result<SpectralField> {
        self.check(f)?;
        let g = &self.grid;
        let n = g.n();
        let k = g.k();
        // refuse near-spectral parameters before solving anything
        for (shell, op) in self.shells() {
            let eig = self.block_eigenvalues(shell, &op);
            for mu in eig.iter().copied().chain(op.diag.iter().map(|d| Complex64::new(*d, 0.0))) {
                let dist = (lambda - mu).norm();
                if dist <= SINGULAR_TOL * mu.norm().max(1.0) {
                    return Err(Error::Singular { lambda, distance: dist });
                }
            }
        }
        let cols: Vec<Vec<Complex64>> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (m, l) = (idx / n, idx % n);
                let op = build_mode_operator(g, m, l);
                let (vx, vy) = column(f, m, l);
                match op.direction {
                    None => {
                        let mut out = Vec::with_capacity(2 * k);
                        for v in [&vx, &vy] {
                            out.extend(v.iter().zip(&op.diag).map(|(c, d)| c / (lambda - d)));
                        }
                        out
                    }
                    Some(dir) => {
                        let (par, perp) = split(dir, &vx, &vy);
                        let mut mat = op.parallel_block().map(|x| Complex64::new(-x, 0.0));
                        for i in 0..k {
                            mat[(i, i)] += lambda;
                        }
                        let rhs = DVector::from_vec(par);
                        let par_out = mat.lu().solve(&rhs).expect("nonsingular away from the spectrum");
                        let perp_out: Vec<Complex64> = perp.iter().zip(&op.diag).map(|(c, d)| c / (lambda - d)).collect();
                        join(dir, par_out.as_slice(), &perp_out)
                    }
                }
            })
            .collect();
        Ok(scatter(f, cols))
    }

    /// Eigenvalues of the parallel block on one shell (coupled).
    pub(crate) fn block_eigenvalues(&self, shell: u64, op: &ModeOperator) -> Arc<Vec<Complex64>> {
        if !op.is_coupled() {
            return Arc::new(op.diag.iter().map(|d| Complex64::new(*d, 0.0)).collect());
        }
        if let Some(v) = self.eigen.lock().expect("eigen cache poisoned").get(&shell) {
            return v.clone();
        }
        let ev: Vec<Complex64> = op.parallel_block().complex_eigenvalues().iter().copied().collect();
        let ev = Arc::new(ev);
        self.eigen.lock().expect("eigen cache poisoned").insert(shell, ev.clone());
        ev
    }

    /// One representative operator per distinct `(shell, coupled)` pair.
    pub(crate) fn shells(&self) -> Vec<(u64, ModeOperator)> {
        let g = &self.grid;
        let mut seen = HashMap::new();
        for m in 0..g.n() {
            for l in 0..g.n() {
                let op = build_mode_operator(g, m, l);
                let key = g.shell(m, l) * 2 + op.is_coupled() as u64;
                seen.entry(key).or_insert((g.shell(m, l), op));
            }
        }
        let mut v: Vec<_> = seen.into_iter().collect();
        v.sort_by_key(|(k, _)| *k);
        v.into_iter().map(|(_, x)| x).collect()
    }

    fn block(
        &self,
        op: &ModeOperator,
        t: f64,
        function: BlockFunction,
        compute: impl FnOnce() -> DMatrix<f64>,
    ) -> Arc<DMatrix<f64>> {
        let shell = (op.xi_sq / (4.0 * std::f64::consts::PI * std::f64::consts::PI)).round() as u64;
        let key = BlockKey { shell, coupled: op.is_coupled(), time_bits: t.to_bits(), function };
        self.cache.get_or_insert(key, compute)
    }

    /// Apply a matrix function to the parallel coefficients and the matching
    /// scalar function of the diagonal to everything else.
    fn map_modes<B, S>(&self, v: &SpectralField, block: B, scalar: S) -> SpectralField
    where
        B: Fn(&ModeOperator) -> Arc<DMatrix<f64>> + Sync,
        S: Fn(f64) -> f64 + Sync,
    {
        let g = &self.grid;
        let n = g.n();
        let cols: Vec<Vec<Complex64>> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (m, l) = (idx / n, idx % n);
                let (vx, vy) = column(v, m, l);
                if vx.iter().chain(&vy).all(|c| *c == ZERO) {
                    return vec![ZERO; 2 * g.k()];
                }
                let op = build_mode_operator(g, m, l);
                let s: Vec<f64> = op.diag.iter().map(|d| scalar(*d)).collect();
                match op.direction {
                    None => {
                        let mut out = Vec::with_capacity(2 * g.k());
                        for c in [&vx, &vy] {
                            out.extend(c.iter().zip(&s).map(|(a, b)| a * b));
                        }
                        out
                    }
                    Some(dir) => {
                        let (par, perp) = split(dir, &vx, &vy);
                        let mat = block(&op);
                        let par_out = mat_vec(&mat, &par);
                        let perp_out: Vec<Complex64> = perp.iter().zip(&s).map(|(a, b)| a * b).collect();
                        join(dir, &par_out, &perp_out)
                    }
                }
            })
            .collect();
        scatter(v, cols)
    }
}

fn column(v: &SpectralField, m: usize, l: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let k = v.grid.k();
    ((0..k).map(|i| v.coeffs[[0, m, l, i]]).collect(), (0..k).map(|i| v.coeffs[[1, m, l, i]]).collect())
}

fn split(dir: [f64; 2], vx: &[Complex64], vy: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let [dx, dy] = dir;
    let par = vx.iter().zip(vy).map(|(a, b)| a * dx + b * dy).collect();
    let perp = vx.iter().zip(vy).map(|(a, b)| -a * dy + b * dx).collect();
    (par, perp)
}

fn join(dir: [f64; 2], par: &[Complex64], perp: &[Complex64]) -> Vec<Complex64> {
    let [dx, dy] = dir;
    let mut out: Vec<Complex64> = par.iter().zip(perp).map(|(p, q)| p * dx - q * dy).collect();
    out.extend(par.iter().zip(perp).map(|(p, q)| p * dy + q * dx));
    out
}

fn mat_vec(mat: &DMatrix<f64>, x: &[Complex64]) -> Vec<Complex64> {
    let k = x.len();
    (0..k).map(|i| (0..k).map(|j| x[j] * mat[(i, j)]).sum()).collect()
}

fn scatter(like: &SpectralField, cols: Vec<Vec<Complex64>>) -> SpectralField {
    let g = &like.grid;
    let (n, k) = (g.n(), g.k());
    let mut out = SpectralField::zeros(g, 2);
    for (idx, col) in cols.into_iter().enumerate() {
        let (m, l) = (idx / n, idx % n);
        for i in 0..k {
            out.coeffs[[0, m, l, i]] = col[i];
            out.coeffs[[1, m, l, i]] = col[k + i];
        }
    }
    out
}
