use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use super::config::WorkbenchConfig;
use super::init::initial_data;
use super::output::write_text;
use super::snapshot::{read_snapshot, write_snapshot};
use crate::error::{Error, Result};
use crate::lab::{
    geometric_times, horizontal_multiplier_scan, interpolation_ratio, kernel_l1_norm, log_riesz_ratio,
    nonlinear_estimate_scan, q_growth, recursion_bound_check, resolvent_scan, semigroup_decay_doubling,
    small_time_trend, young_anisotropic_test, DecayCombo, Direction, MultiplierScan, ResolventScan, SampleSettings,
    ScanReport, TorusShape,
};
use crate::solver::{Solution, Solver};
use crate::spectral::{inverse_transform, l2_norm, norm_anisotropic};
use crate::stokes::{spectral_bound, HydrostaticStokes, Subspace};

/// Exit status for an error: 2 for bad input, 3 for solver divergence.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Snapshot(_) | Error::Exponent(_) | Error::Io(_) => 2,
        Error::Diverged(_) | Error::BlowUp { .. } => 3,
        _ => 1,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Contract(_) => "contract",
        Error::Reality { .. } => "reality",
        Error::Exponent(_) => "exponent",
        Error::Time(_) => "time",
        Error::Singular { .. } => "singular",
        Error::Precondition(_) => "precondition",
        Error::Config(_) => "config",
        Error::BlowUp { .. } => "blowup",
        Error::Diverged(_) => "diverged",
        Error::Snapshot(_) => "snapshot",
        Error::Io(_) => "io",
    }
}

/// One-line machine-readable error record for standard error.
pub fn error_line(command: &str, err: &Error) -> String {
    let msg = err.to_string().replace('\\', "\\\\").replace('"', "\\\"");
    format!("error command={command} kind={} code={} message=\"{msg}\"", error_kind(err), exit_code(err))
}

pub const SIMULATE_HEADER: &str = "t,energy,sol_drift,norm_inf_p,t_sqrt_grad_norm,residual";

pub fn simulate_csv(sol: &Solution) -> String {
    let mut s = format!("{SIMULATE_HEADER}\n");
    let traj = &sol.trajectory;
    for ((t, d), r) in traj.times.iter().zip(&traj.diagnostics).zip(&sol.residual) {
        let _ = writeln!(s, "{t:e},{:e},{:e},{:e},{:e},{r:e}", d.energy, d.sol_drift, d.norm_inf_p, d.t_sqrt_grad_norm);
    }
    s
}

#[derive(Clone, Debug)]
pub struct SimulateOutput {
    pub csv: PathBuf,
    pub snapshots: Vec<PathBuf>,
    pub solution: Solution,
}

/// Build the initial data, run the full solve and write the CSV and
/// snapshots under `output.dir`.
pub fn simulate(cfg: &WorkbenchConfig) -> Result<SimulateOutput> {
    let solver = Solver::new(cfg.solver.clone())?;
    let a = initial_data(solver.grid(), &cfg.init, cfg.seed, cfg.solver.p)?;
    let solution = solver.full_solve(&a)?;
    let dir = &cfg.output_dir;
    let csv = dir.join("simulate.csv");
    write_text(&csv, &simulate_csv(&solution))?;
    let traj = &solution.trajectory;
    let last = traj.len() - 1;
    let mut snapshots = Vec::new();
    for (i, (t, v)) in traj.times.iter().zip(&traj.states).enumerate() {
        let due = if cfg.snapshot_every == 0 { i == 0 || i == last } else { i % cfg.snapshot_every == 0 || i == last };
        if due {
            let path = dir.join("snapshots").join(format!("step_{i:06}.hstk"));
            write_snapshot(&path, v, *t)?;
            snapshots.push(path);
        }
    }
    Ok(SimulateOutput { csv, snapshots, solution })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Kernel,
    Young,
    Semigroup,
    Resolvent,
    Multiplier,
    Interpolation,
    Nonlinear,
    Recursion,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Kernel,
        Suite::Young,
        Suite::Semigroup,
        Suite::Resolvent,
        Suite::Multiplier,
        Suite::Interpolation,
        Suite::Nonlinear,
        Suite::Recursion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Young => "young",
            Suite::Semigroup => "semigroup",
            Suite::Resolvent => "resolvent",
            Suite::Multiplier => "multiplier",
            Suite::Interpolation => "interpolation",
            Suite::Nonlinear => "nonlinear",
            Suite::Recursion => "recursion",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

/// Result of `verify`: `passed` is false iff a hard check failed.
#[derive(Clone, Debug, Default)]
pub struct VerifyOutput {
    pub passed: bool,
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
}

struct Run<'a> {
    cfg: &'a WorkbenchConfig,
    out: VerifyOutput,
}

impl Run<'_> {
    fn hard(&mut self, suite: Suite, ok: bool, detail: String) {
        self.out.passed &= ok;
        self.out.lines.push(format!("{}: {} ({detail})", suite.name(), if ok { "pass" } else { "FAIL" }));
    }

    fn write(&mut self, suite: Suite, text: &str) -> Result<()> {
        let path = self.cfg.output_dir.join(format!("verify_{}.csv", suite.name()));
        write_text(&path, text)?;
        self.out.files.push(path);
        Ok(())
    }

    fn write_reports(&mut self, suite: Suite, reports: &[ScanReport]) -> Result<()> {
        let mut text = String::new();
        for (i, r) in reports.iter().enumerate() {
            let csv = r.to_csv();
            text.push_str(if i == 0 { &csv } else { csv.split_once('\n').map_or("", |x| x.1) });
            self.out.lines.push(format!("{}: {}", suite.name(), r.summary()));
            for note in &r.notes {
                self.out.lines.push(format!("{}: note: {note}", suite.name()));
            }
        }
        self.write(suite, &text)
    }

    fn settings(&self) -> SampleSettings {
        let s = &self.cfg.solver;
        SampleSettings::for_grid(s.n, s.k, self.cfg.samples, self.cfg.seed)
    }

    fn suite(&mut self, suite: Suite) -> Result<()> {
        let grid = self.cfg.solver.grid()?;
        let p = self.cfg.solver.p;
        match suite {
            Suite::Kernel => {
                let mut text = String::from("psi,modulus,numeric,exact,abs_error,grad_numeric,grad_bound\n");
                let mut worst: f64 = 0.0;
                let mut grad_ok = true;
                for psi in [0.0, PI / 4.0, -PI / 4.0, PI / 3.0, -PI / 3.0, 0.45 * PI, -0.45 * PI] {
                    for r in [0.1, 1.0, 10.0] {
                        let k = kernel_l1_norm(Complex64::from_polar(r, psi))?;
                        let err = (k.numeric - k.exact).abs();
                        worst = worst.max(err);
                        grad_ok &= k.grad_numeric <= k.grad_bound + 1e-6;
                        let _ = writeln!(
                            text,
                            "{psi:e},{r:e},{:e},{:e},{err:e},{:e},{:e}",
                            k.numeric, k.exact, k.grad_numeric, k.grad_bound
                        );
                    }
                }
                self.write(suite, &text)?;
                self.hard(suite, worst <= 1e-6 && grad_ok, format!("max |numeric - exact| = {worst:.3e}"));
            }
            Suite::Young => {
                let mut reports = Vec::new();
                for (q, pp) in [(f64::INFINITY, 4.0), (2.0, 2.0), (1.0, f64::INFINITY)] {
                    reports.push(young_anisotropic_test(200, q, pp, self.cfg.seed, TorusShape { n: 4, nz: 4 }));
                }
                let sup = reports.iter().map(|r| r.sup).fold(0.0, f64::max);
                self.write_reports(suite, &reports)?;
                self.hard(suite, sup <= 1.0 + 1e-10, format!("max ratio {sup:.12}"));
            }
            Suite::Semigroup => {
                let times = geometric_times(1e-3, 1.0, 7);
                let settings = self.settings();
                let reports = DecayCombo::all()
                    .into_iter()
                    .map(|c| semigroup_decay_doubling(&grid, c, &times, &settings, p))
                    .collect::<Result<Vec<_>>>()?;
                self.write_reports(suite, &reports)?;
                let stokes = HydrostaticStokes::new(&grid);
                let f = settings.smooth_solenoidal(&grid, 0);
                let trend = small_time_trend(&stokes, &f, &geometric_times(1e-6, 1e-3, 7), p)?;
                let decreasing = trend.windows(2).all(|w| w[0] < w[1]);
                self.out.lines.push(format!("semigroup: small-t trend decreasing toward 0: {decreasing}"));
            }
            Suite::Resolvent => {
                let scan = ResolventScan::new(0.75 * PI, vec![0.5, 5.0, 50.0, 500.0], f64::INFINITY, p)?;
                let settings = self.settings();
                let reports = [None, Some(Direction::X), Some(Direction::Z)]
                    .into_iter()
                    .map(|d| resolvent_scan(&grid, &scan, &settings, d, true))
                    .collect::<Result<Vec<_>>>()?;
                self.write_reports(suite, &reports)?;
            }
            Suite::Multiplier => {
                let scan = MultiplierScan::new(0.4 * PI, vec![1e-4, 1e-3, 1e-2, 1e-1])?;
                let r = horizontal_multiplier_scan(grid.n(), &scan, &self.settings(), true)?;
                self.write_reports(suite, &[r])?;
                let n = grid.n();
                let growth = q_growth(&[n, 2 * n, 4 * n, 8 * n])?;
                let mut text = String::from("resolution,q_ratio\n");
                for (res, ratio) in &growth {
                    let _ = writeln!(text, "{res},{ratio:e}");
                }
                let path = self.cfg.output_dir.join("verify_q_growth.csv");
                write_text(&path, &text)?;
                self.out.files.push(path);
                let desc: Vec<String> = growth.iter().map(|(r, q)| format!("{r}:{q:.4}")).collect();
                self.out.lines.push(format!("multiplier: ||Qf||_inf / ||f||_inf by N: {}", desc.join(" ")));
            }
            Suite::Interpolation => {
                let settings = self.settings();
                let a = interpolation_ratio(&grid, &settings, p, 2.0, &[0.15, 0.3], 4, true)?;
                let b = log_riesz_ratio(grid.n(), &[0.1, 0.2, 0.4], 4, &settings, p, true)?;
                self.write_reports(suite, &[a, b])?;
            }
            Suite::Nonlinear => {
                let mut settings = self.settings();
                settings.count = settings.count.min(4);
                let reports = nonlinear_estimate_scan(&grid, &geometric_times(1e-2, 1.0, 4), &settings, p, true)?;
                self.write_reports(suite, &reports)?;
            }
            Suite::Recursion => {
                let r = &self.cfg.recursion;
                match recursion_bound_check(r.a0, r.c1, r.c2, r.steps) {
                    Ok(check) => {
                        let mut text = String::from("m,a_m,bound\n");
                        for (m, a) in check.sequence.iter().enumerate() {
                            let _ = writeln!(text, "{m},{a:e},{:e}", check.bound);
                        }
                        self.write(suite, &text)?;
                        let last = check.sequence.last().copied().unwrap_or(0.0);
                        self.hard(suite, check.ok, format!("a_M = {last:.6e}, bound {:.6e}", check.bound));
                    }
                    Err(Error::Precondition(msg)) => self.hard(suite, false, msg),
                    Err(e) => return Err(e),
                }
            }
            Suite::All => {
                for s in Suite::EACH {
                    self.suite(s)?;
                }
            }
        }
        Ok(())
    }
}

pub fn verify(suite: Suite, cfg: &WorkbenchConfig) -> Result<VerifyOutput> {
    let mut run = Run { cfg, out: VerifyOutput { passed: true, ..Default::default() } };
    run.suite(suite)?;
    Ok(run.out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormValues {
    pub time: f64,
    /// `L^q_H L^p_z`.
    pub mixed: f64,
    pub l2: f64,
    /// Largest node modulus.
    pub sup: f64,
}

pub fn norms(path: &Path, q: f64, p: f64) -> Result<NormValues> {
    let (field, time) = read_snapshot(path)?;
    let phys = inverse_transform(&field)?;
    let mixed = norm_anisotropic(&phys, q, p)?;
    let sup = norm_anisotropic(&phys, f64::INFINITY, f64::INFINITY)?;
    Ok(NormValues { time, mixed, l2: l2_norm(&phys), sup })
}

#[derive(Clone, Debug)]
pub struct SpectrumOutput {
    pub csv: PathBuf,
    pub full_bound: f64,
    pub solenoidal_bound: f64,
}

/// Eigenvalues of every mode block for both subspaces, as
/// `m,n,index,re,im,subspace` with signed frequencies.
pub fn spectrum(cfg: &WorkbenchConfig) -> Result<SpectrumOutput> {
    let grid = cfg.solver.grid()?;
    let mut text = String::from("m,n,index,re,im,subspace\n");
    let mut bounds = [0.0; 2];
    for (slot, sub) in [Subspace::Full, Subspace::Solenoidal].into_iter().enumerate() {
        let report = spectral_bound(&grid, sub);
        bounds[slot] = report.bound;
        for mode in &report.modes {
            for (i, ev) in mode.eigenvalues.iter().enumerate() {
                let _ = writeln!(
                    text,
                    "{},{},{i},{:e},{:e},{sub}",
                    grid.freq(mode.m),
                    grid.freq(mode.n),
                    ev.re,
                    ev.im
                );
            }
        }
    }
    let csv = cfg.output_dir.join("spectrum.csv");
    write_text(&csv, &text)?;
    Ok(SpectrumOutput { csv, full_bound: bounds[0], solenoidal_bound: bounds[1] })
}
