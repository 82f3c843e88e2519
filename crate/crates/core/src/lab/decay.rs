//! Sector scans of the hydrostatic Stokes semigroup and resolvent.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::report::ScanReport;
use super::samples::{to_spectral, SampleSettings};
use crate::error::{Error, Result};
use crate::projection::project_hydrostatic;
use crate::spectral::{
    gradient, horizontal_derivative, inverse_transform, laplacian, norm_anisotropic, vertical_derivative, Grid,
    HorizontalAxis, PhysicalField, SpectralField,
};
use crate::stokes::{spectral_bound, HydrostaticStokes, Subspace};

/// Direction of a derivative applied to the datum or the output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    X,
    Y,
    Z,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::X, Direction::Y, Direction::Z];

    pub fn name(self) -> &'static str {
        match self {
            Direction::X => "x",
            Direction::Y => "y",
            Direction::Z => "z",
        }
    }
}

/// Which smoothing combination a decay scan measures.
///
/// The weight is `t^{1/2}` for one derivative and `t` for two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecayCombo {
    /// `grad e^{tA} f` for solenoidal `f`.
    Gradient,
    /// `grad e^{tA} P f` for general `f`.
    GradientProjected,
    /// `d_z e^{tA} P f` for general `f`.
    VerticalProjected,
    /// `e^{tA} P d_j f`.
    ProjectedDerivative(Direction),
    /// `grad e^{tA} P d_j f`.
    GradientProjectedDerivative(Direction),
}

impl DecayCombo {
    pub fn all() -> Vec<DecayCombo> {
        let mut v = vec![DecayCombo::Gradient, DecayCombo::GradientProjected, DecayCombo::VerticalProjected];
        v.extend(Direction::ALL.map(DecayCombo::ProjectedDerivative));
        v.extend(Direction::ALL.map(DecayCombo::GradientProjectedDerivative));
        v
    }

    pub fn name(&self) -> String {
        match self {
            DecayCombo::Gradient => "grad_etA".into(),
            DecayCombo::GradientProjected => "grad_etA_P".into(),
            DecayCombo::VerticalProjected => "dz_etA_P".into(),
            DecayCombo::ProjectedDerivative(d) => format!("etA_P_d{}", d.name()),
            DecayCombo::GradientProjectedDerivative(d) => format!("grad_etA_P_d{}", d.name()),
        }
    }

    /// Power of `t` in the weight.
    pub fn weight_exponent(&self) -> f64 {
        match self {
            DecayCombo::GradientProjectedDerivative(_) => 1.0,
            _ => 0.5,
        }
    }

    fn datum_derivative(&self) -> Option<Direction> {
        match self {
            DecayCombo::ProjectedDerivative(d) | DecayCombo::GradientProjectedDerivative(d) => Some(*d),
            _ => None,
        }
    }
}

/// Datum `f` (as node values, for the denominator) and the field the
/// semigroup is applied to.
struct Datum {
    f: PhysicalField,
    input: SpectralField,
}

fn horizontal(d: Direction) -> HorizontalAxis {
    if d == Direction::X {
        HorizontalAxis::X
    } else {
        HorizontalAxis::Y
    }
}

/// `P d_j f`. Vertical derivatives use a datum vanishing at top and bottom,
/// for which `P d_z f = d_z f`.
fn derivative_datum(grid: &Grid, settings: &SampleSettings, i: usize, d: Direction) -> Result<Datum> {
    if d == Direction::Z {
        let (f, dz) = settings.compact_in_z(grid, i)?;
        let input = project_hydrostatic(&to_spectral(&dz)?)?;
        return Ok(Datum { f, input });
    }
    let fs = settings.field(grid, i);
    let input = project_hydrostatic(&horizontal_derivative(&fs, horizontal(d)))?;
    Ok(Datum { f: inverse_transform(&fs)?, input })
}

fn datum(grid: &Grid, combo: DecayCombo, settings: &SampleSettings, i: usize) -> Result<Datum> {
    if let Some(d) = combo.datum_derivative() {
        return derivative_datum(grid, settings, i, d);
    }
    let fs = if combo == DecayCombo::Gradient { settings.smooth_solenoidal(grid, i) } else { settings.field(grid, i) };
    let input = if combo == DecayCombo::Gradient { fs.clone() } else { project_hydrostatic(&fs)? };
    Ok(Datum { f: inverse_transform(&fs)?, input })
}

/// `||out||_{L^inf_H L^p_z}` of the combination's output field.
fn output_norm(combo: DecayCombo, e: &SpectralField, p: f64) -> Result<f64> {
    let field = match combo {
        DecayCombo::VerticalProjected => vertical_derivative(e)?,
        DecayCombo::ProjectedDerivative(_) => inverse_transform(e)?,
        _ => gradient(e)?,
    };
    norm_anisotropic(&field, f64::INFINITY, p)
}

/// Weighted ratio `t^a ||out(t)|| / (e^{beta t} ||f||)` for one datum.
pub fn decay_ratio(
    stokes: &HydrostaticStokes,
    combo: DecayCombo,
    f: &PhysicalField,
    input: &SpectralField,
    t: f64,
    p: f64,
    beta: f64,
) -> Result<(f64, f64)> {
    let e = stokes.semigroup_apply(t, input)?;
    let num = t.powf(combo.weight_exponent()) * output_norm(combo, &e, p)?;
    let den = (beta * t).exp() * norm_anisotropic(f, f64::INFINITY, p)?;
    Ok((num, den))
}

fn check_p(p: f64) -> Result<()> {
    if p > 3.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("decay scans need p > 3, got {p}")))
    }
}

/// One decay scan on one grid.
pub fn semigroup_decay_scan(
    grid: &Grid,
    combo: DecayCombo,
    times: &[f64],
    settings: &SampleSettings,
    p: f64,
) -> Result<ScanReport> {
    check_p(p)?;
    let mut report = ScanReport::new(combo.name());
    append_decay_rows(&mut report, grid, combo, times, settings, p)?;
    report.finish(grid.n(), None);
    Ok(report)
}

fn append_decay_rows(
    report: &mut ScanReport,
    grid: &Grid,
    combo: DecayCombo,
    times: &[f64],
    settings: &SampleSettings,
    p: f64,
) -> Result<()> {
    let stokes = HydrostaticStokes::new(grid);
    let beta = spectral_bound(grid, Subspace::Solenoidal).bound;
    let rows: Vec<Vec<(usize, f64, f64, f64)>> = (0..settings.count)
        .into_par_iter()
        .map(|i| {
            let d = datum(grid, combo, settings, i)?;
            times
                .iter()
                .map(|&t| decay_ratio(&stokes, combo, &d.f, &d.input, t, p, beta).map(|(n, dd)| (i, t, n, dd)))
                .collect()
        })
        .collect::<Result<_>>()?;
    for (i, t, num, den) in rows.into_iter().flatten() {
        report.record(grid.n(), i, t, 0.0, num, den);
    }
    Ok(())
}

/// Decay scan on `grid` and on the grid with `N` and `K` doubled, using the
/// same sample functions.
pub fn semigroup_decay_doubling(
    grid: &Grid,
    combo: DecayCombo,
    times: &[f64],
    settings: &SampleSettings,
    p: f64,
) -> Result<ScanReport> {
    check_p(p)?;
    let fine = grid.refined(2)?;
    let mut report = ScanReport::new(combo.name());
    append_decay_rows(&mut report, grid, combo, times, settings, p)?;
    append_decay_rows(&mut report, &fine, combo, times, settings, p)?;
    report.finish(grid.n(), Some(fine.n()));
    Ok(report)
}

/// `t^{1/2} ||grad e^{tA} f||_{L^inf_H L^p_z}` along `times`.
pub fn small_time_trend(stokes: &HydrostaticStokes, f: &SpectralField, times: &[f64], p: f64) -> Result<Vec<f64>> {
    times
        .iter()
        .map(|&t| Ok(t.sqrt() * norm_anisotropic(&gradient(&stokes.semigroup_apply(t, f)?)?, f64::INFINITY, p)?))
        .collect()
}

/// Geometric grid `t_max r^{-j}`, `j = count-1, ..., 0` (increasing).
pub fn geometric_times(t_min: f64, t_max: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![t_max];
    }
    let r = (t_max / t_min).powf(1.0 / (count - 1) as f64);
    (0..count).map(|j| t_min * r.powi(j as i32)).collect()
}

/// Real and imaginary parts of the function a complex-valued coefficient
/// array represents, as two real spectral fields.
pub fn complex_parts(c: &SpectralField) -> (SpectralField, SpectralField) {
    let mut re = c.clone();
    let mut im = c.clone();
    let n = c.grid.n();
    for comp in 0..c.ncomp() {
        for m in 0..n {
            for l in 0..n {
                let (pm, pl) = c.partner(m, l);
                for k in 0..c.grid.k() {
                    let a = c.coeffs[[comp, m, l, k]];
                    let b = c.coeffs[[comp, pm, pl, k]].conj();
                    re.coeffs[[comp, m, l, k]] = 0.5 * (a + b);
                    im.coeffs[[comp, m, l, k]] = (a - b) / Complex64::new(0.0, 2.0);
                }
            }
        }
    }
    (re, im)
}

/// Mixed norm of the pointwise modulus of a complex field, given as
/// real and imaginary parts of `F(part)`.
fn complex_norm(
    c: &SpectralField,
    eval: impl Fn(&SpectralField) -> Result<PhysicalField>,
    q: f64,
    p: f64,
) -> Result<f64> {
    let (re, im) = complex_parts(c);
    let both = PhysicalField::stack(&[&eval(&re)?, &eval(&im)?])?;
    norm_anisotropic(&both, q, p)
}

/// Parameters of a resolvent scan over `lambda = r e^{i phi}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolventScan {
    /// Sector half-angle `theta < pi`.
    pub theta: f64,
    pub magnitudes: Vec<f64>,
    pub q: f64,
    pub p: f64,
}

impl ResolventScan {
    pub fn new(theta: f64, magnitudes: Vec<f64>, q: f64, p: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::Precondition(format!("sector angle {theta} must lie in (0, pi)")));
        }
        Ok(Self { theta, magnitudes, q, p })
    }

    /// Rays `-theta, -theta/2, 0, theta/2, theta`.
    pub fn angles(&self) -> [f64; 5] {
        let t = self.theta;
        [-t, -0.5 * t, 0.0, 0.5 * t, t]
    }

    fn lambdas(&self) -> Vec<(f64, f64, Complex64)> {
        let mut out = Vec::new();
        for &r in &self.magnitudes {
            for phi in self.angles() {
                out.push((r, phi, Complex64::from_polar(r, phi)));
            }
        }
        out
    }
}

/// `(|lambda| ||v|| + |lambda|^{1/2} ||grad v|| + ||Delta v||, ||f||)` for
/// `v = (lambda - A)^{-1} f`.
pub fn resolvent_ratio(
    stokes: &HydrostaticStokes,
    lambda: Complex64,
    f: &SpectralField,
    q: f64,
    p: f64,
) -> Result<(f64, f64)> {
    let v = stokes.resolvent_apply(lambda, f)?;
    let r = lambda.norm();
    let nv = complex_norm(&v, inverse_transform, q, p)?;
    let ng = complex_norm(&v, gradient, q, p)?;
    let nl = complex_norm(&laplacian(&v), inverse_transform, q, p)?;
    let den = norm_anisotropic(&inverse_transform(f)?, q, p)?;
    Ok((r * nv + r.sqrt() * ng + nl, den))
}

fn scan_resolvent_rows(
    report: &mut ScanReport,
    grid: &Grid,
    scan: &ResolventScan,
    settings: &SampleSettings,
    derivative: Option<Direction>,
) -> Result<()> {
    let stokes = HydrostaticStokes::new(grid);
    let lambdas = scan.lambdas();
    type Row = (usize, f64, f64, Result<(f64, f64)>);
    let rows: Vec<Vec<Row>> = (0..settings.count)
        .into_par_iter()
        .map(|i| {
            let (fphys, input) = match derivative {
                None => {
                    let f = settings.solenoidal(grid, i)?;
                    (None, f)
                }
                Some(d) => {
                    let dd = derivative_datum(grid, settings, i, d)?;
                    (Some(dd.f), dd.input)
                }
            };
            Ok(lambdas
                .iter()
                .map(|&(r, phi, lambda)| {
                    let value = match &fphys {
                        None => resolvent_ratio(&stokes, lambda, &input, scan.q, scan.p),
                        Some(f) => stokes.resolvent_apply(lambda, &input).and_then(|w| {
                            let nw = complex_norm(&w, inverse_transform, scan.q, scan.p)?;
                            Ok((r.sqrt() * nw, norm_anisotropic(f, scan.q, scan.p)?))
                        }),
                    };
                    (i, r, phi, value)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut singular = 0;
    for (i, r, phi, value) in rows.into_iter().flatten() {
        match value {
            Ok((num, den)) => report.record(grid.n(), i, r, phi, num, den),
            Err(Error::Singular { .. }) => {
                singular += 1;
                report.excluded += 1;
            }
            Err(e) => return Err(e),
        }
    }
    if singular > 0 {
        report.notes.push(format!("N={}: {singular} parameters too close to the spectrum, skipped", grid.n()));
    }
    Ok(())
}

fn resolvent_name(derivative: Option<Direction>) -> String {
    match derivative {
        None => "resolvent".into(),
        Some(d) => format!("resolvent_d{}", d.name()),
    }
}

/// Ratio scan of `|lambda| ||v|| + |lambda|^{1/2} ||grad v|| + ||Delta v||`
/// against `||f||` over the sector, or, with `derivative = Some(j)`, of
/// `|lambda|^{1/2} ||(lambda - A)^{-1} P d_j f||` against `||f||`.
pub fn resolvent_scan(
    grid: &Grid,
    scan: &ResolventScan,
    settings: &SampleSettings,
    derivative: Option<Direction>,
    doubling: bool,
) -> Result<ScanReport> {
    let mut report = ScanReport::new(resolvent_name(derivative));
    scan_resolvent_rows(&mut report, grid, scan, settings, derivative)?;
    if doubling {
        let fine = grid.refined(2)?;
        scan_resolvent_rows(&mut report, &fine, scan, settings, derivative)?;
        report.finish(grid.n(), Some(fine.n()));
    } else {
        report.finish(grid.n(), None);
    }
    Ok(report)
}
