use nalgebra::{DMatrix, DVector};

use crate::projection::direction;
use crate::spectral::Grid;

/// The hydrostatic Stokes operator `A = Delta + B` restricted to one
/// horizontal wavenumber.
///
/// In the frame `(xi_hat, xi_hat_perp)` the perpendicular component sees
/// only the diagonal Laplacian. The parallel component also carries the
/// rank-one bottom-shear coupling
/// `R[k][j] = (beta_tilde_k / h) lambda_j = 2 lambda_j / (h^2 lambda_k sigma_K)`.
#[derive(Clone, Debug)]
pub struct ModeOperator {
    /// Unit wavevector, `None` where the derivative symbol vanishes (no coupling).
    pub direction: Option<[f64; 2]>,
    pub xi_sq: f64,
    /// `-(|xi|^2 + lambda_k^2)`, shared by both components.
    pub diag: Vec<f64>,
    /// Left factor `beta_tilde / h` of the coupling.
    pub shear_profile: Vec<f64>,
    /// Right factor `lambda` of the coupling.
    pub lambdas: Vec<f64>,
}

impl ModeOperator {
    pub fn is_coupled(&self) -> bool {
        self.direction.is_some()
    }

    pub fn coupling(&self) -> DMatrix<f64> {
        let k = self.diag.len();
        if !self.is_coupled() {
            return DMatrix::zeros(k, k);
        }
        &DVector::from_column_slice(&self.shear_profile) * DVector::from_column_slice(&self.lambdas).transpose()
    }

    /// `D + R` acting on parallel coefficients (plain `D` when uncoupled).
    pub fn parallel_block(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_column_slice(&self.diag)) + self.coupling()
    }
}

pub fn build_mode_operator(grid: &Grid, m: usize, n: usize) -> ModeOperator {
    let xi_sq = grid.wavenumber_sq(m, n);
    block_operator(grid, xi_sq, direction(grid, m, n))
}

pub(crate) fn block_operator(grid: &Grid, xi_sq: f64, direction: Option<[f64; 2]>) -> ModeOperator {
    let b = grid.basis();
    let h = grid.h();
    ModeOperator {
        direction,
        xi_sq,
        diag: b.lambdas.iter().map(|l| -(xi_sq + l * l)).collect(),
        shear_profile: b.beta_tilde().iter().map(|bt| bt / h).collect(),
        lambdas: b.lambdas.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_vertical_mode_zero_wavenumber() {
        let g = Grid::new(4, 1, 1.0).unwrap();
        let op = build_mode_operator(&g, 0, 0);
        assert!(!op.is_coupled());
        assert!((op.parallel_block()[(0, 0)] + PI * PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn single_vertical_mode_hand_value() {
        let g = Grid::new(4, 1, 1.0).unwrap();
        let op = build_mode_operator(&g, 1, 0);
        let sigma = g.basis().sigma;
        assert!((sigma - 8.0 / (PI * PI)).abs() < 1e-15);
        assert!((op.coupling()[(0, 0)] - PI * PI / 4.0).abs() < 1e-13);
        assert!((op.parallel_block()[(0, 0)] + 4.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn coupling_matches_outer_product() {
        let g = Grid::new(8, 9, 1.3).unwrap();
        let op = build_mode_operator(&g, 2, 7);
        let r = op.coupling();
        let b = g.basis();
        for k in 0..9 {
            for j in 0..9 {
                let brute = 2.0 * b.lambdas[j] / (1.3 * 1.3 * b.lambdas[k] * b.sigma);
                assert!((r[(k, j)] - brute).abs() < 1e-12 * brute.abs());
            }
        }
        assert_eq!(r.rank(1e-10), 1);
    }

    #[test]
    fn solenoidal_subspace_is_invariant() {
        let g = Grid::new(8, 7, 0.8).unwrap();
        let op = build_mode_operator(&g, 1, 3);
        let lam = &g.basis().lambdas;
        // c with sum c_k / lambda_k = 0
        let mut c = DVector::from_fn(7, |i, _| ((i * 5 + 1) % 7) as f64 - 3.0);
        let mean: f64 = c.iter().zip(lam).map(|(v, l)| v / l).sum();
        c[0] -= mean * lam[0];
        let out = op.parallel_block() * &c;
        let out_mean: f64 = out.iter().zip(lam).map(|(v, l)| v / l).sum();
        assert!(out_mean.abs() < 1e-10 * out.norm());
    }
}
