use crate::error::{Error, Result};
use crate::nonlinear::NonlinearWorkspace;
use crate::projection::{check_solenoidal, project_hydrostatic};
use crate::spectral::{Grid, SpectralField};
use crate::stokes::HydrostaticStokes;

use super::config::SolverConfig;
use super::report::{IterationRecord, IterationReport};
use super::trajectory::{mixed_norms, Trajectory};

/// Trajectories abort once `||v||_{L2}` exceeds this multiple of its initial value.
pub const BLOW_UP_FACTOR: f64 = 1e6;

/// Initial data are accepted as solenoidal up to this drift.
pub const SOLENOIDAL_TOL: f64 = 1e-8;

/// `a = a_ref + a_0` with `a_ref = e^{delta A} a`.
#[derive(Clone, Debug)]
pub struct Split {
    pub a_ref: SpectralField,
    pub a0: SpectralField,
    pub delta: f64,
    /// `||a_0||_{L^inf_H L^p_z}`.
    pub a0_norm: f64,
}

/// Output of [`Solver::full_solve`].
#[derive(Clone, Debug)]
pub struct Solution {
    /// `v = v_ref + V` on the Picard window, then the continued reference run.
    pub trajectory: Trajectory,
    pub reference: Trajectory,
    pub perturbation: Trajectory,
    pub report: IterationReport,
    pub split: Split,
    /// Mild-solution residual of `trajectory` per node.
    pub residual: Vec<f64>,
}

/// One grid, its Stokes operator and a nonlinear workspace.
pub struct Solver {
    cfg: SolverConfig,
    stokes: HydrostaticStokes,
    ws: NonlinearWorkspace,
}

impl Solver {
    pub fn new(cfg: SolverConfig) -> Result<Self> {
        let grid = cfg.grid()?;
        Ok(Self { stokes: HydrostaticStokes::new(&grid), ws: NonlinearWorkspace::new(&grid, cfg.dealias), cfg })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn grid(&self) -> &Grid {
        self.stokes.grid()
    }

    pub fn stokes(&self) -> &HydrostaticStokes {
        &self.stokes
    }

    pub fn workspace(&self) -> &NonlinearWorkspace {
        &self.ws
    }

    fn require_solenoidal(&self, a: &SpectralField, what: &str) -> Result<()> {
        a.require_ncomp(2, what)?;
        if a.grid != *self.grid() {
            return Err(Error::Contract(format!("{what}: field grid differs from solver grid")));
        }
        let drift = check_solenoidal(a);
        if drift > SOLENOIDAL_TOL {
            return Err(Error::Precondition(format!("{what}: data not solenoidal (drift {drift:.3e})")));
        }
        Ok(())
    }

    /// `P F(v) = -P (v . grad) v`.
    pub fn force(&self, v: &SpectralField) -> Result<SpectralField> {
        Ok(project_hydrostatic(&self.ws.advection(v)?)?.scaled(-1.0))
    }

    /// Right-hand side of the perturbation equation,
    /// `-P ((U . grad)(V + v_ref) + (u_ref . grad) V)`.
    fn perturbation_force(&self, big_v: &SpectralField, v_ref: &SpectralField) -> Result<SpectralField> {
        let mut adv = self.ws.advection_bilinear(big_v, &big_v.add(v_ref))?;
        adv.axpy(1.0, &self.ws.advection_bilinear(v_ref, big_v)?);
        Ok(project_hydrostatic(&adv)?.scaled(-1.0))
    }

    pub fn split_data(&self, a: &SpectralField, delta: f64) -> Result<Split> {
        self.require_solenoidal(a, "split_data")?;
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::Time(delta));
        }
        let a_ref = self.stokes.semigroup_apply(delta, a)?;
        let a0 = a.sub(&a_ref);
        let a0_norm = mixed_norms(&a0, self.cfg.p)?.0;
        Ok(Split { a_ref, a0, delta, a0_norm })
    }

    /// Exponential Euler from `v0` at `t0`, `steps` steps of size `dt`.
    fn integrate(&self, v0: &SpectralField, t0: f64, dt: f64, steps: usize, out: &mut Trajectory) -> Result<()> {
        let initial = v0.l2_norm();
        let guard = BLOW_UP_FACTOR * initial;
        let mut v = v0.clone();
        for step in 1..=steps {
            let f = self.force(&v)?;
            let mut next = self.stokes.semigroup_apply(dt, &v)?;
            next.axpy(dt, &self.stokes.phi1_apply(dt, &f)?);
            if self.cfg.reproject {
                next = project_hydrostatic(&next)?;
            }
            let norm = next.l2_norm();
            if !norm.is_finite() || (initial > 0.0 && norm > guard) {
                return Err(Error::BlowUp { step, norm, guard });
            }
            out.push(t0 + step as f64 * dt, next.clone())?;
            v = next;
        }
        Ok(())
    }

    /// `v_{n+1} = e^{dt A} v_n + dt phi_1(dt A) P F(v_n)` on `[0, horizon]`.
    pub fn reference_solve(&self, a_ref: &SpectralField, horizon: f64, dt: f64) -> Result<Trajectory> {
        self.require_solenoidal(a_ref, "reference_solve")?;
        if !(dt > 0.0 && dt <= horizon) {
            return Err(Error::Time(dt));
        }
        let steps = ((horizon / dt).round() as usize).max(1);
        let dt = horizon / steps as f64;
        let mut traj = Trajectory::new(self.cfg.p);
        traj.push(0.0, a_ref.clone())?;
        self.integrate(a_ref, 0.0, dt, steps, &mut traj)?;
        Ok(traj)
    }

    /// Trapezoidal Duhamel integrals `int_0^{t_n} e^{(t_n - s) A} f(s) ds` at
    /// every node of a uniform grid, by the recursion
    /// `J_n = e^{dt A} J_{n-1} + dt f_n`, `I_n = J_n - dt f_n / 2`.
    fn duhamel(&self, forces: &[SpectralField], dt: f64) -> Result<Vec<SpectralField>> {
        let mut out = Vec::with_capacity(forces.len());
        let Some(first) = forces.first() else { return Ok(out) };
        let mut j = first.scaled(dt / 2.0);
        out.push(SpectralField::zeros(&first.grid, 2));
        for f in &forces[1..] {
            j = self.stokes.semigroup_apply(dt, &j)?;
            j.axpy(dt, f);
            let mut i = j.clone();
            i.axpy(-dt / 2.0, f);
            out.push(i);
        }
        Ok(out)
    }

    fn free_evolution(&self, a: &SpectralField, nodes: usize, dt: f64) -> Result<Vec<SpectralField>> {
        let mut out = Vec::with_capacity(nodes);
        let mut cur = a.clone();
        for n in 0..nodes {
            if n > 0 {
                cur = self.stokes.semigroup_apply(dt, &cur)?;
            }
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// `(K(t_n), H(t_n))` running maxima of a sequence of states.
    fn s_series(&self, times: &[f64], states: &[SpectralField]) -> Result<(Vec<f64>, Vec<f64>)> {
        let (mut k, mut h) = (Vec::with_capacity(states.len()), Vec::with_capacity(states.len()));
        let (mut km, mut hm) = (0.0f64, 0.0f64);
        for (t, v) in times.iter().zip(states) {
            let (norm, grad) = mixed_norms(v, self.cfg.p)?;
            hm = hm.max(norm);
            if *t > 0.0 {
                km = km.max(t.sqrt() * grad);
            }
            k.push(km);
            h.push(hm);
        }
        Ok((k, h))
    }

    fn s_norm(&self, times: &[f64], states: &[SpectralField]) -> Result<f64> {
        let (k, h) = self.s_series(times, states)?;
        Ok(k.last().copied().unwrap_or(0.0).max(h.last().copied().unwrap_or(0.0)))
    }

    /// `V_{m+1} = e^{tA} a_0 + int_0^t e^{(t-s)A} F_m(s) ds` on the nodes of
    /// `v_ref` up to `horizon`.
    pub fn picard_iterate(
        &self,
        a0: &SpectralField,
        v_ref: &Trajectory,
        horizon: f64,
    ) -> Result<(Trajectory, IterationReport)> {
        self.require_solenoidal(a0, "picard_iterate")?;
        let dt = v_ref.uniform_step()?;
        let nodes = v_ref.times.iter().take_while(|t| **t <= horizon * (1.0 + 1e-12)).count();
        if nodes == 0 || v_ref.times[0] != 0.0 {
            return Err(Error::Precondition("reference trajectory must start at t = 0".into()));
        }
        if nodes < 2 || (v_ref.times[nodes - 1] - horizon).abs() > 1e-9 * horizon.max(dt) {
            return Err(Error::Precondition(format!("reference trajectory does not cover [0, {horizon}]")));
        }
        let times = &v_ref.times[..nodes];
        let refs = &v_ref.states[..nodes];

        let v0 = self.free_evolution(a0, nodes, dt)?;
        let s0 = self.s_norm(times, &v0)?;
        let mut report = IterationReport { times: times.to_vec(), p: self.cfg.p, ..Default::default() };
        let mut cur = v0.clone();
        let mut diffs: Vec<f64> = Vec::new();
        for m in 0..self.cfg.max_iter {
            let forces = cur
                .iter()
                .zip(refs)
                .map(|(v, r)| self.perturbation_force(v, r))
                .collect::<Result<Vec<_>>>()?;
            let duhamel = self.duhamel(&forces, dt)?;
            let next: Vec<SpectralField> = v0.iter().zip(&duhamel).map(|(a, b)| a.add(b)).collect();
            let diff_states: Vec<SpectralField> = next.iter().zip(&cur).map(|(a, b)| a.sub(b)).collect();
            let diff = self.s_norm(times, &diff_states)?;
            let (k_norm, h_norm) = self.s_series(times, &cur)?;
            let s_norm = k_norm.last().unwrap().max(*h_norm.last().unwrap());
            let ratio = (m >= 1).then(|| diff / diffs[m - 1]);
            report.iterations.push(IterationRecord { k_norm, h_norm, s_norm, diff_norm: Some(diff), ratio });
            diffs.push(diff);
            cur = next;
            if diff == 0.0 || diff <= self.cfg.tol * s0 {
                report.converged = true;
                break;
            }
            let d = &diffs;
            if d.len() >= 3 && d[m] > 2.0 * d[m - 1] && d[m - 1] > 2.0 * d[m - 2] {
                return Err(Error::Diverged(Box::new(report)));
            }
        }
        let (k_norm, h_norm) = self.s_series(times, &cur)?;
        let s_norm = k_norm.last().unwrap().max(*h_norm.last().unwrap());
        report.iterations.push(IterationRecord { k_norm, h_norm, s_norm, diff_norm: None, ratio: None });

        let mut traj = Trajectory::new(self.cfg.p);
        for (t, v) in times.iter().zip(cur) {
            traj.push(*t, v)?;
        }
        Ok((traj, report))
    }

    /// Shrink `delta` by halving until `||a_0|| <= eps0`.
    fn choose_split(&self, a: &SpectralField) -> Result<Split> {
        let eps0 = match self.cfg.eps0 {
            Some(e) => e,
            None => 0.05 * mixed_norms(a, self.cfg.p)?.0,
        };
        let mut delta = self.cfg.delta;
        loop {
            let split = self.split_data(a, delta)?;
            if split.a0_norm <= eps0 || delta == 0.0 {
                return Ok(split);
            }
            delta = if delta < 1e-12 { 0.0 } else { delta / 2.0 };
        }
    }

    /// Split, reference solve, Picard iteration on the initial window and
    /// reference stepping for the rest of the horizon.
    pub fn full_solve(&self, a: &SpectralField) -> Result<Solution> {
        self.require_solenoidal(a, "full_solve")?;
        let cfg = &self.cfg;
        let steps = cfg.steps_for(cfg.horizon);
        let dt = cfg.horizon / steps as f64;
        let window_steps = (((cfg.picard_window / dt).round() as usize).max(1)).min(steps);
        let window = window_steps as f64 * dt;

        let split = self.choose_split(a)?;
        let reference = self.reference_solve(&split.a_ref, window, dt)?;
        let (perturbation, report) = self.picard_iterate(&split.a0, &reference, window)?;

        let mut trajectory = Trajectory::new(cfg.p);
        for ((t, r), v) in reference.times.iter().zip(&reference.states).zip(&perturbation.states) {
            trajectory.push(*t, r.add(v))?;
        }
        if window_steps < steps {
            let start = trajectory.last().cloned().expect("nonempty");
            self.integrate(&start, window, dt, steps - window_steps, &mut trajectory)?;
        }
        let residual = self.mild_residual(&trajectory, false)?;
        Ok(Solution { trajectory, reference, perturbation, report, split, residual })
    }

    /// `||v(t_n) - e^{t_n A} v(0) - int_0^{t_n} e^{(t_n - s)A} P F(v(s)) ds||_{L2}`
    /// with the trapezoidal rule of the Picard iteration; `linear` drops `F`.
    pub fn mild_residual(&self, traj: &Trajectory, linear: bool) -> Result<Vec<f64>> {
        if traj.is_empty() {
            return Ok(Vec::new());
        }
        let dt = traj.uniform_step()?;
        let free = self.free_evolution(&traj.states[0], traj.len(), dt)?;
        let duhamel = if linear {
            vec![SpectralField::zeros(self.grid(), 2); traj.len()]
        } else {
            let forces = traj.states.iter().map(|v| self.force(v)).collect::<Result<Vec<_>>>()?;
            self.duhamel(&forces, dt)?
        };
        Ok(traj.states.iter().zip(free.iter().zip(&duhamel)).map(|(v, (e, i))| v.sub(e).sub(i).l2_norm()).collect())
    }
}
