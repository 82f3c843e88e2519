/// Norms of one Picard iterate on the shared time grid.
#[derive(Clone, Debug, Default)]
pub struct IterationRecord {
    /// `K_m(t_n) = max_{0 < s <= t_n} s^{1/2} ||grad V_m(s)||`.
    pub k_norm: Vec<f64>,
    /// `H_m(t_n) = max_{s <= t_n} ||V_m(s)||`.
    pub h_norm: Vec<f64>,
    /// `||V_m||_{S(T)} = max(K_m(T), H_m(T))`.
    pub s_norm: f64,
    /// `||V_{m+1} - V_m||_{S(T)}`, once the next iterate exists.
    pub diff_norm: Option<f64>,
    /// `||V~_m||_S / ||V~_{m-1}||_S`, for `m >= 1`.
    pub ratio: Option<f64>,
}

/// Per-iteration diagnostics of the Picard scheme. All norms are
/// `L^inf_H L^p_z`.
#[derive(Clone, Debug, Default)]
pub struct IterationReport {
    pub times: Vec<f64>,
    pub p: f64,
    pub iterations: Vec<IterationRecord>,
    pub converged: bool,
}

impl IterationReport {
    pub fn ratios(&self) -> Vec<f64> {
        self.iterations.iter().filter_map(|r| r.ratio).collect()
    }

    pub fn diff_norms(&self) -> Vec<f64> {
        self.iterations.iter().filter_map(|r| r.diff_norm).collect()
    }
}
