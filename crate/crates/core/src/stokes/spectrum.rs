use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::operator::{build_mode_operator, ModeOperator};
use crate::error::Error;
use crate::spectral::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subspace {
    Full,
    Solenoidal,
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subspace::Full => "full",
            Subspace::Solenoidal => "solenoidal",
        })
    }
}

impl FromStr for Subspace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "full" => Ok(Subspace::Full),
            "solenoidal" => Ok(Subspace::Solenoidal),
            other => Err(Error::Contract(format!("unknown subspace `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModeEigenvalues {
    pub m: usize,
    pub n: usize,
    /// Sorted by decreasing real part.
    pub eigenvalues: Arc<Vec<Complex64>>,
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub subspace: Subspace,
    pub bound: f64,
    pub modes: Vec<ModeEigenvalues>,
}

/// Orthonormal basis of `{c : sum_k c_k / lambda_k = 0}` from the Householder
/// reflector mapping `g / |g|` to `e_0`.
pub fn solenoidal_basis(lambdas: &[f64]) -> DMatrix<f64> {
    let k = lambdas.len();
    let g = DVector::from_iterator(k, lambdas.iter().map(|l| 1.0 / l));
    let mut u = &g / g.norm();
    // u[0] > 0 always, so adding avoids cancellation
    u[0] += 1.0;
    let un = u.norm_squared();
    let refl = DMatrix::identity(k, k) - (&u * u.transpose()) * (2.0 / un);
    refl.columns(1, k - 1).into_owned()
}

fn sorted(mut ev: Vec<Complex64>) -> Vec<Complex64> {
    ev.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    ev
}

fn mode_spectrum(op: &ModeOperator, subspace: Subspace) -> Vec<Complex64> {
    let diag = op.diag.iter().map(|d| Complex64::new(*d, 0.0));
    let mut ev: Vec<Complex64> = diag.clone().collect();
    if !op.is_coupled() {
        ev.extend(diag);
        return sorted(ev);
    }
    let block = op.parallel_block();
    let par = match subspace {
        Subspace::Full => block,
        Subspace::Solenoidal => {
            let q = solenoidal_basis(&op.lambdas);
            q.transpose() * block * q
        }
    };
    if par.nrows() > 0 {
        ev.extend(par.complex_eigenvalues().iter().copied());
    }
    sorted(ev)
}

/// Supremum of the real spectrum over all mode blocks, with the
/// eigenvalues of every mode.
pub fn spectral_bound(grid: &Grid, subspace: Subspace) -> SpectrumReport {
    let n = grid.n();
    let mut by_shell: HashMap<(u64, bool), Arc<Vec<Complex64>>> = HashMap::new();
    let mut modes = Vec::with_capacity(n * n);
    let mut bound = f64::NEG_INFINITY;
    for m in 0..n {
        for l in 0..n {
            let op = build_mode_operator(grid, m, l);
            let key = (grid.shell(m, l), op.is_coupled());
            let ev = by_shell.entry(key).or_insert_with(|| Arc::new(mode_spectrum(&op, subspace))).clone();
            bound = ev.iter().map(|z| z.re).fold(bound, f64::max);
            modes.push(ModeEigenvalues { m, n: l, eigenvalues: ev });
        }
    }
    SpectrumReport { subspace, bound, modes }
}
