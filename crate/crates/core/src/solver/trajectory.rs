use crate::error::{Error, Result};
use crate::projection::check_solenoidal;
use crate::spectral::{gradient, inverse_transform, norm_anisotropic, SpectralField};

/// Scalar diagnostics of one snapshot.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// `||v||_{L2}^2 / 2`.
    pub energy: f64,
    pub sol_drift: f64,
    /// `||v||_{L^inf_H L^p_z}`.
    pub norm_inf_p: f64,
    /// `t^{1/2} ||grad v||_{L^inf_H L^p_z}`.
    pub t_sqrt_grad_norm: f64,
}

impl Diagnostics {
    pub fn of(v: &SpectralField, t: f64, p: f64) -> Result<Self> {
        let (norm, grad) = mixed_norms(v, p)?;
        Ok(Self {
            energy: 0.5 * v.l2_norm().powi(2),
            sol_drift: check_solenoidal(v),
            norm_inf_p: norm,
            t_sqrt_grad_norm: t.sqrt() * grad,
        })
    }
}

/// `(||v||, ||grad v||)` in `L^inf_H L^p_z`, the gradient measured by its
/// pointwise Euclidean magnitude.
pub fn mixed_norms(v: &SpectralField, p: f64) -> Result<(f64, f64)> {
    let phys = inverse_transform(v)?;
    let grad = gradient(v)?;
    Ok((norm_anisotropic(&phys, f64::INFINITY, p)?, norm_anisotropic(&grad, f64::INFINITY, p)?))
}

/// Snapshots on a strictly increasing time grid.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    pub diagnostics: Vec<Diagnostics>,
    pub p: f64,
}

impl Trajectory {
    pub fn new(p: f64) -> Self {
        Self { p, ..Default::default() }
    }

    pub fn push(&mut self, t: f64, v: SpectralField) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if !(t > last) {
                return Err(Error::Contract(format!("time {t} does not follow {last}")));
            }
        }
        self.diagnostics.push(Diagnostics::of(&v, t, self.p)?);
        self.times.push(t);
        self.states.push(v);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&SpectralField> {
        self.states.last()
    }

    /// Uniform spacing of the grid, or an error if it is not uniform.
    pub fn uniform_step(&self) -> Result<f64> {
        if self.len() < 2 {
            return Ok(0.0);
        }
        let dt = self.times[1] - self.times[0];
        for w in self.times.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt {
                return Err(Error::Contract("trajectory time grid is not uniform".into()));
            }
        }
        Ok(dt)
    }

    /// The first `count` nodes.
    pub fn prefix(&self, count: usize) -> Self {
        let c = count.min(self.len());
        Self {
            times: self.times[..c].to_vec(),
            states: self.states[..c].to_vec(),
            diagnostics: self.diagnostics[..c].to_vec(),
            p: self.p,
        }
    }

    pub fn energies(&self) -> Vec<f64> {
        self.diagnostics.iter().map(|d| d.energy).collect()
    }
}
