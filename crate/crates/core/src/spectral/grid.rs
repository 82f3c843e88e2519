use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Collocation grid on the periodic layer `(0,1)^2 x (-h,0)`.
///
/// Horizontal nodes are `i/N`; vertical nodes are the cell midpoints
/// `z_j = -h + (2j+1)h/(2K)`, which are the DST-IV nodes of the sine basis
/// `phi_k(z) = sin(lambda_k (z+h))`, `lambda_k = (2k+1)pi/(2h)`.
///
/// Normalization table (all transforms use these and nothing else):
///
/// | quantity                                  | factor      |
/// |-------------------------------------------|-------------|
/// | horizontal forward DFT                    | `1/N^2`     |
/// | horizontal inverse DFT                    | `1`         |
/// | vertical forward (sine analysis)          | `2/K`       |
/// | vertical inverse (sine synthesis)         | `1`         |
/// | L2 weight of one coefficient `|c|^2`      | `h/2`       |
/// | horizontal quadrature weight              | `1/N^2`     |
/// | vertical quadrature weight                | `h/K`       |
#[derive(Clone, Debug)]
pub struct Grid {
    n: usize,
    k: usize,
    h: f64,
    basis: Arc<VerticalBasis>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.h.to_bits() == other.h.to_bits()
    }
}

impl Grid {
    pub fn new(n: usize, k: usize, h: f64) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::Contract(format!("N must be even and >= 4, got {n}")));
        }
        if k == 0 {
            return Err(Error::Contract("K must be >= 1".into()));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Contract(format!("layer depth must be positive, got {h}")));
        }
        Ok(Self { n, k, h, basis: Arc::new(VerticalBasis::new(k, h)) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn basis(&self) -> &VerticalBasis {
        &self.basis
    }

    /// Same geometry with `N` and `K` scaled by `factor`.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.n * factor, self.k * factor, self.h)
    }

    /// Signed integer frequency of storage index `i` (transform order).
    pub fn freq(&self, i: usize) -> i64 {
        freq_of(i, self.n)
    }

    /// Storage index of signed frequency `f`.
    pub fn index_of(&self, f: i64) -> usize {
        f.rem_euclid(self.n as i64) as usize
    }

    pub fn is_nyquist(&self, i: usize) -> bool {
        self.freq(i) == -(self.n as i64) / 2
    }

    /// Symbol of the first horizontal derivative along one axis: `2 pi f`,
    /// with the Nyquist frequency mapped to zero so that odd derivatives and
    /// the projections stay real.
    pub fn wavenumber(&self, i: usize) -> f64 {
        if self.is_nyquist(i) {
            0.0
        } else {
            2.0 * PI * self.freq(i) as f64
        }
    }

    /// `|xi|^2` of the horizontal Laplacian at `(m,n)` (Nyquist kept).
    pub fn wavenumber_sq(&self, m: usize, n: usize) -> f64 {
        let (a, b) = (self.freq(m) as f64, self.freq(n) as f64);
        4.0 * PI * PI * (a * a + b * b)
    }

    /// Integer key `fx^2 + fy^2`; modes sharing it share their Stokes block.
    pub fn shell(&self, m: usize, n: usize) -> u64 {
        let (a, b) = (self.freq(m), self.freq(n));
        (a * a + b * b) as u64
    }

    pub fn x_nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| i as f64 / self.n as f64).collect()
    }

    pub fn z_nodes(&self) -> Vec<f64> {
        self.basis.nodes.clone()
    }

    pub fn horizontal_weight(&self) -> f64 {
        1.0 / (self.n * self.n) as f64
    }

    pub fn vertical_weight(&self) -> f64 {
        self.h / self.k as f64
    }
}

pub(crate) fn freq_of(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// The vertical eigenbasis of the Laplacian with `f(-h) = 0`, `f'(0) = 0`.
#[derive(Clone, Debug)]
pub struct VerticalBasis {
    pub lambdas: Vec<f64>,
    /// Coefficients of the constant function 1: `beta_k = 2/(h lambda_k)`.
    pub betas: Vec<f64>,
    /// Vertical mean of the truncated constant, `(2/h^2) sum lambda_k^-2`.
    pub sigma: f64,
    pub nodes: Vec<f64>,
    /// `sin(lambda_k (z_j + h))`, indexed `[k, j]`.
    pub sin_table: Array2<f64>,
    /// `cos(lambda_k (z_j + h))`, indexed `[k, j]`.
    pub cos_table: Array2<f64>,
}

impl VerticalBasis {
    fn new(k: usize, h: f64) -> Self {
        let lambdas: Vec<f64> = (0..k).map(|i| (2 * i + 1) as f64 * PI / (2.0 * h)).collect();
        let betas: Vec<f64> = lambdas.iter().map(|l| 2.0 / (h * l)).collect();
        let sigma = 2.0 / (h * h) * lambdas.iter().map(|l| 1.0 / (l * l)).sum::<f64>();
        let nodes: Vec<f64> = (0..k).map(|j| -h + (2 * j + 1) as f64 * h / (2 * k) as f64).collect();
        let sin_table = Array2::from_shape_fn((k, k), |(a, j)| (lambdas[a] * (nodes[j] + h)).sin());
        let cos_table = Array2::from_shape_fn((k, k), |(a, j)| (lambdas[a] * (nodes[j] + h)).cos());
        Self { lambdas, betas, sigma, nodes, sin_table, cos_table }
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// `phi_k(z)`.
    pub fn phi(&self, k: usize, z: f64, h: f64) -> f64 {
        (self.lambdas[k] * (z + h)).sin()
    }

    /// Renormalized constant expansion `beta_k / sigma_K`, whose truncated
    /// vertical mean is exactly one.
    pub fn beta_tilde(&self) -> Vec<f64> {
        self.betas.iter().map(|b| b / self.sigma).collect()
    }
}
