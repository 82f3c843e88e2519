use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct RecursionCheck {
    /// `a_0, a_1, ..., a_M` of the equality recursion.
    pub sequence: Vec<f64>,
    /// `2 a_0 / (1 - c_2)`.
    pub bound: f64,
    /// Smaller fixed point of `a = a_0 + c_1 a^2 + c_2 a`.
    pub fixed_point: f64,
    pub ok: bool,
}

/// Iterate `a_{m+1} = a_0 + c_1 a_m^2 + c_2 a_m` and compare with the
/// bound `2 a_0 / (1 - c_2)`, valid when `4 c_1 a_0 < (1 - c_2)^2`.
pub fn recursion_bound_check(a0: f64, c1: f64, c2: f64, steps: usize) -> Result<RecursionCheck> {
    if !(c1 > 0.0) || !(c2 > 0.0 && c2 < 1.0) || !(a0 >= 0.0) {
        return Err(Error::Precondition(format!("need c1 > 0, 0 < c2 < 1, a0 >= 0 (got {a0}, {c1}, {c2})")));
    }
    let gap = (1.0 - c2) * (1.0 - c2);
    if 4.0 * c1 * a0 >= gap {
        return Err(Error::Precondition(format!("4 c1 a0 = {} is not below (1 - c2)^2 = {gap}", 4.0 * c1 * a0)));
    }
    let bound = 2.0 * a0 / (1.0 - c2);
    let fixed_point = 2.0 * a0 / ((1.0 - c2) + (gap - 4.0 * c1 * a0).sqrt());
    let mut sequence = Vec::with_capacity(steps + 1);
    let mut a = a0;
    sequence.push(a);
    for _ in 0..steps {
        a = a0 + c1 * a * a + c2 * a;
        sequence.push(a);
    }
    let slack = 1e-12 * bound.max(1.0);
    let ok = sequence.iter().all(|x| *x < bound + slack);
    Ok(RecursionCheck { sequence, bound, fixed_point, ok })
}
