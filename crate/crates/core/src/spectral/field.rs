use ndarray::{Array4, Axis};
use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Coefficients in the Fourier (horizontal) x sine (vertical) basis,
/// indexed `[component, m, n, k]` with `m, n` in transform order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    pub grid: Grid,
    pub coeffs: Array4<Complex64>,
}

/// Values at the collocation nodes, indexed `[component, i, j, j_z]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField {
    pub grid: Grid,
    pub values: Array4<f64>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid, ncomp: usize) -> Self {
        let (n, k) = (grid.n(), grid.k());
        Self { grid: grid.clone(), coeffs: Array4::zeros((ncomp, n, n, k)) }
    }

    pub fn from_coeffs(grid: &Grid, coeffs: Array4<Complex64>) -> Result<Self> {
        let (c, a, b, k) = coeffs.dim();
        if a != grid.n() || b != grid.n() || k != grid.k() || c == 0 {
            return Err(Error::Contract(format!(
                "coefficient shape {:?} does not match grid N={} K={}",
                coeffs.dim(),
                grid.n(),
                grid.k()
            )));
        }
        Ok(Self { grid: grid.clone(), coeffs })
    }

    pub fn ncomp(&self) -> usize {
        self.coeffs.len_of(Axis(0))
    }

    pub(crate) fn require_ncomp(&self, ncomp: usize, op: &str) -> Result<()> {
        if self.ncomp() != ncomp {
            return Err(Error::Contract(format!("{op} needs {ncomp} components, got {}", self.ncomp())));
        }
        Ok(())
    }

    pub(crate) fn require_same_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid || self.ncomp() != other.ncomp() {
            return Err(Error::Contract("fields live on different grids".into()));
        }
        Ok(())
    }

    /// Index of the conjugate partner `(-m, -n)`.
    pub fn partner(&self, m: usize, n: usize) -> (usize, usize) {
        let nn = self.grid.n();
        ((nn - m) % nn, (nn - n) % nn)
    }

    /// Largest violation of `c(-m,-n,k) = conj c(m,n,k)`.
    pub fn reality_defect(&self) -> f64 {
        let nn = self.grid.n();
        let mut worst: f64 = 0.0;
        for c in 0..self.ncomp() {
            for m in 0..nn {
                for n in 0..nn {
                    let (pm, pn) = self.partner(m, n);
                    for k in 0..self.grid.k() {
                        let d = self.coeffs[[c, m, n, k]] - self.coeffs[[c, pm, pn, k]].conj();
                        worst = worst.max(d.norm());
                    }
                }
            }
        }
        worst
    }

    /// Replace each coefficient pair by its Hermitian average.
    pub fn enforce_reality(&mut self) {
        let nn = self.grid.n();
        for c in 0..self.ncomp() {
            for m in 0..nn {
                for n in 0..nn {
                    let (pm, pn) = self.partner(m, n);
                    for k in 0..self.grid.k() {
                        let a = self.coeffs[[c, m, n, k]];
                        let b = self.coeffs[[c, pm, pn, k]];
                        let avg = 0.5 * (a + b.conj());
                        self.coeffs[[c, m, n, k]] = avg;
                        self.coeffs[[c, pm, pn, k]] = avg.conj();
                    }
                }
            }
        }
    }

    /// `L2(Omega)` norm from Parseval: `sum |c|^2 * h/2`.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        (s * self.grid.h() / 2.0).sqrt()
    }

    /// `L2` inner product (real part) of two real fields.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        let s: f64 = self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| (a.conj() * b).re).sum();
        s * self.grid.h() / 2.0
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { grid: self.grid.clone(), coeffs: self.coeffs.mapv(|c| c * s) }
    }

    pub fn add(&self, other: &SpectralField) -> Self {
        Self { grid: self.grid.clone(), coeffs: &self.coeffs + &other.coeffs }
    }

    pub fn sub(&self, other: &SpectralField) -> Self {
        Self { grid: self.grid.clone(), coeffs: &self.coeffs - &other.coeffs }
    }

    /// `self + s * other`, in place.
    pub fn axpy(&mut self, s: f64, other: &SpectralField) {
        self.coeffs.zip_mut_with(&other.coeffs, |a, b| *a += b * s);
    }

    /// Zero every mode outside `|f_x|, |f_y| <= cutoff`, `k < k_max`.
    pub fn truncate(&mut self, cutoff: i64, k_max: usize) {
        let nn = self.grid.n();
        for c in 0..self.ncomp() {
            for m in 0..nn {
                for n in 0..nn {
                    let keep_h = self.grid.freq(m).abs() <= cutoff && self.grid.freq(n).abs() <= cutoff;
                    for k in 0..self.grid.k() {
                        if !keep_h || k >= k_max {
                            self.coeffs[[c, m, n, k]] = Complex64::new(0.0, 0.0);
                        }
                    }
                }
            }
        }
    }

    /// Copy onto a finer or coarser grid with the same depth, keeping the
    /// shared modes. Nyquist modes of the source are dropped.
    pub fn resample(&self, grid: &Grid) -> Result<Self> {
        if grid.h().to_bits() != self.grid.h().to_bits() {
            return Err(Error::Contract("resample requires equal layer depth".into()));
        }
        let mut out = Self::zeros(grid, self.ncomp());
        let src_n = self.grid.n() as i64;
        let dst_n = grid.n() as i64;
        let kk = self.grid.k().min(grid.k());
        for c in 0..self.ncomp() {
            for m in 0..self.grid.n() {
                let fm = self.grid.freq(m);
                if fm == -src_n / 2 || fm.abs() >= dst_n / 2 {
                    continue;
                }
                for n in 0..self.grid.n() {
                    let fn_ = self.grid.freq(n);
                    if fn_ == -src_n / 2 || fn_.abs() >= dst_n / 2 {
                        continue;
                    }
                    for k in 0..kk {
                        out.coeffs[[c, grid.index_of(fm), grid.index_of(fn_), k]] = self.coeffs[[c, m, n, k]];
                    }
                }
            }
        }
        Ok(out)
    }
}

impl PhysicalField {
    pub fn zeros(grid: &Grid, ncomp: usize) -> Self {
        let (n, k) = (grid.n(), grid.k());
        Self { grid: grid.clone(), values: Array4::zeros((ncomp, n, n, k)) }
    }

    pub fn from_values(grid: &Grid, values: Array4<f64>) -> Result<Self> {
        let (c, a, b, k) = values.dim();
        if a != grid.n() || b != grid.n() || k != grid.k() || c == 0 {
            return Err(Error::Contract(format!(
                "value shape {:?} does not match grid N={} K={}",
                values.dim(),
                grid.n(),
                grid.k()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("non-finite field value".into()));
        }
        Ok(Self { grid: grid.clone(), values })
    }

    /// Sample `f(component, x, y, z)` at the nodes.
    pub fn from_fn(grid: &Grid, ncomp: usize, f: impl Fn(usize, f64, f64, f64) -> f64) -> Self {
        let xs = grid.x_nodes();
        let zs = grid.z_nodes();
        let (n, k) = (grid.n(), grid.k());
        let values = Array4::from_shape_fn((ncomp, n, n, k), |(c, i, j, l)| f(c, xs[i], xs[j], zs[l]));
        Self { grid: grid.clone(), values }
    }

    pub fn ncomp(&self) -> usize {
        self.values.len_of(Axis(0))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Stack components of several fields on the same grid.
    pub fn stack(parts: &[&PhysicalField]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Contract("nothing to stack".into()))?;
        let views: Vec<_> = parts.iter().map(|p| p.values.view()).collect();
        if parts.iter().any(|p| p.grid != first.grid) {
            return Err(Error::Contract("cannot stack fields on different grids".into()));
        }
        let values = ndarray::concatenate(Axis(0), &views).map_err(|e| Error::Contract(e.to_string()))?;
        Ok(Self { grid: first.grid.clone(), values })
    }
}
