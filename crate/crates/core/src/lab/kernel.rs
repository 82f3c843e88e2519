use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `|lambda| ||K_lambda||_1` and `|lambda|^{1/2} ||grad K_lambda||_1` for the
/// resolvent kernel `K_lambda(x) = e^{-lambda^{1/2}|x|} / (4 pi |x|)` on R^3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelNorms {
    pub numeric: f64,
    /// `sec(psi/2)^2`.
    pub exact: f64,
    pub grad_numeric: f64,
    /// `sec(psi/2) + sec(psi/2)^2`.
    pub grad_bound: f64,
}

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `int_0^inf g(r) dr` through `r = s / (1 - s)`.
fn half_line(g: impl Fn(f64) -> f64) -> f64 {
    let mapped = |s: f64| {
        if s >= 1.0 {
            0.0
        } else {
            let r = s / (1.0 - s);
            g(r) / ((1.0 - s) * (1.0 - s))
        }
    };
    adaptive_simpson(&mapped, 0.0, 1.0, 1e-12)
}

pub fn kernel_l1_norm(lambda: Complex64) -> Result<KernelNorms> {
    let psi = lambda.arg();
    let modulus = lambda.norm();
    if !(modulus > 0.0) || psi.abs() >= PI || !modulus.is_finite() {
        return Err(Error::Precondition(format!("lambda = {lambda} is outside every sector")));
    }
    let mu = lambda.sqrt();
    let decay = mu.re;
    // 4 pi r^2 |K| = r e^{-Re(mu) r}; 4 pi r^2 |K'| = |1 + mu r| e^{-Re(mu) r}
    let l1 = half_line(|r| r * (-decay * r).exp());
    let grad = half_line(|r| (1.0 + mu * r).norm() * (-decay * r).exp());
    let sec = 1.0 / (psi / 2.0).cos();
    Ok(KernelNorms {
        numeric: modulus * l1,
        exact: sec * sec,
        grad_numeric: modulus.sqrt() * grad,
        grad_bound: sec + sec * sec,
    })
}
