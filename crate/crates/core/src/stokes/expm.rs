//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants of degree 3, 5, 7, 9 or 13 (Higham 2005).

use nalgebra::DMatrix;

const THETA: [(usize, f64); 5] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
    (13, 5.371920351148152e0),
];

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn one_norm(a: &DMatrix<f64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(a)` for a square real matrix.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let norm = one_norm(a);
    if !norm.is_finite() {
        return DMatrix::from_element(n, n, f64::NAN);
    }
    for &(m, theta) in &THETA[..4] {
        if norm <= theta {
            let (u, v) = pade_low(a, m);
            return solve_pade(&u, &v);
        }
    }
    let s = if norm > THETA[4].1 { (norm / THETA[4].1).log2().ceil() as i32 } else { 0 };
    let scaled = a * 2f64.powi(-s);
    let (u, v) = pade13(&scaled);
    let mut r = solve_pade(&u, &v);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

fn pade_low(a: &DMatrix<f64>, m: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        _ => &B9,
    };
    let n = a.nrows();
    let a2 = a * a;
    let mut u = DMatrix::identity(n, n) * b[1];
    let mut v = DMatrix::identity(n, n) * b[0];
    let mut pow = DMatrix::identity(n, n);
    for j in 1..=m / 2 {
        pow = &pow * &a2;
        u += &pow * b[2 * j + 1];
        v += &pow * b[2 * j];
    }
    (a * u, v)
}

fn pade13(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let b = &B13;
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * b[13] + &a4 * b[11] + &a2 * b[9];
    let u = a * (&a6 * inner_u + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1]);
    let inner_v = &a6 * b[12] + &a4 * b[10] + &a2 * b[8];
    let v = &a6 * inner_v + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];
    (u, v)
}

fn solve_pade(u: &DMatrix<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
    let p = v + u;
    let q = v - u;
    q.lu().solve(&p).expect("Pade denominator is nonsingular for scaled arguments")
}

/// `phi_1(t m) = (t m)^{-1} (exp(t m) - I)` together with `exp(t m)`, from
/// the exponential of the augmented matrix `[[t m, t I], [0, 0]]`, whose
/// top-right block is `t phi_1(t m)`.
pub fn expm_and_phi1(m: &DMatrix<f64>, t: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let k = m.nrows();
    let mut aug = DMatrix::<f64>::zeros(2 * k, 2 * k);
    aug.view_mut((0, 0), (k, k)).copy_from(&(m * t));
    for i in 0..k {
        aug[(i, k + i)] = t;
    }
    let e = expm(&aug);
    let exp = e.view((0, 0), (k, k)).into_owned();
    let phi = e.view((0, k), (k, k)).into_owned() / t;
    (exp, phi)
}

/// Scalar `phi_1(x) = (e^x - 1)/x`, with `phi_1(0) = 1`.
pub fn phi1_scalar(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 + x / 2.0 + x * x / 6.0
    } else {
        x.exp_m1() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor_expm(a: &DMatrix<f64>) -> DMatrix<f64> {
        // plain series with repeated squaring, for small well-conditioned tests
        let n = a.nrows();
        let s = 10;
        let b = a / 2f64.powi(s);
        let mut term = DMatrix::identity(n, n);
        let mut sum = DMatrix::identity(n, n);
        for j in 1..30 {
            term = &term * &b / j as f64;
            sum += &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn diagonal_matches_scalar_exponentials() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, -40.0, 0.3, -1e3]));
        let e = expm(&d);
        // the -1e3 entry forces 8 squarings, each of which roughly doubles
        // the relative rounding error of the other entries
        for (i, x) in [-1.0f64, -40.0, 0.3, -1e3].iter().enumerate() {
            assert!((e[(i, i)] - x.exp()).abs() <= 256.0 * 4.0 * f64::EPSILON * x.exp() + 1e-300);
        }
    }

    #[test]
    fn nilpotent_exact() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e = expm(&a);
        assert!((e - DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0])).norm() < 1e-15);
    }

    #[test]
    fn agrees_with_taylor_at_every_degree() {
        for scale in [1e-3, 0.1, 0.5, 1.5, 4.0, 20.0] {
            let a = DMatrix::from_fn(5, 5, |i, j| ((i * 7 + j * 3) % 5) as f64 / 5.0 - 0.4) * scale;
            let (x, y) = (expm(&a), taylor_expm(&a));
            assert!((&x - &y).norm() <= 1e-12 * y.norm(), "scale {scale}");
        }
    }

    #[test]
    fn phi1_scalar_closed_form() {
        let (_, phi) = expm_and_phi1(&DMatrix::from_element(1, 1, -1.0), 1.0);
        assert!((phi[(0, 0)] - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((phi1_scalar(-1.0) - 0.6321205588285577).abs() < 1e-15);
        assert!((phi1_scalar(1e-12) - 1.0).abs() < 1e-12);
    }
}
