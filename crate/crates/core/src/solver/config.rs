use crate::error::{Error, Result};
use crate::spectral::Grid;

/// Parameters of a solve. Times are in the nondimensional units of the
/// domain `(0,1)^2 x (-h,0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub n: usize,
    pub k: usize,
    pub h: f64,
    /// Vertical exponent of the `L^inf_H L^p_z` norms; must exceed 3.
    pub p: f64,
    pub dt: f64,
    pub horizon: f64,
    /// Smoothing time for the split `a_ref = e^{delta A} a`.
    pub delta: f64,
    /// Threshold on `||a_0||`; `None` means `0.05 ||a||`.
    pub eps0: Option<f64>,
    pub max_iter: usize,
    /// Picard stopping tolerance, relative to `||V_0||_S`.
    pub tol: f64,
    /// Length of the initial interval handled by the Picard iteration;
    /// the rest of the horizon continues with the reference integrator.
    pub picard_window: f64,
    pub dealias: bool,
    pub reproject: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n: 16,
            k: 16,
            h: 1.0,
            p: 4.0,
            dt: 1e-3,
            horizon: 0.1,
            delta: 0.01,
            eps0: None,
            max_iter: 20,
            tol: 1e-8,
            picard_window: 0.1,
            dealias: true,
            reproject: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        Grid::new(self.n, self.k, self.h).map_err(|e| Error::Config(e.to_string()))?;
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.p > 3.0) {
            return bad(format!("norm exponent p = {} must exceed 3", self.p));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("time step {} must be positive", self.dt));
        }
        if !(self.horizon.is_finite() && self.dt <= self.horizon) {
            return bad(format!("time step {} exceeds horizon {}", self.dt, self.horizon));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return bad(format!("smoothing time {} must be nonnegative", self.delta));
        }
        if let Some(e) = self.eps0 {
            if !(e > 0.0) {
                return bad(format!("rough-part threshold {e} must be positive"));
            }
        }
        if self.max_iter == 0 {
            return bad("picard.max_iter must be at least 1".into());
        }
        if !(self.tol > 0.0) {
            return bad(format!("picard tolerance {} must be positive", self.tol));
        }
        if !(self.picard_window > 0.0) {
            return bad(format!("picard window {} must be positive", self.picard_window));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        self.validate()?;
        Grid::new(self.n, self.k, self.h)
    }

    /// Number of uniform steps covering `horizon`; the step is adjusted to
    /// `horizon / steps`.
    pub fn steps_for(&self, horizon: f64) -> usize {
        ((horizon / self.dt).round() as usize).max(1)
    }
}
