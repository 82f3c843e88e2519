use std::fmt::Write as _;

/// Denominators below this floor exclude a sample from a scan.
pub const DENOMINATOR_FLOOR: f64 = 1e-14;

/// Relative change of the sup under resolution doubling accepted as stable.
pub const STABILITY_TOL: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    /// Horizontal resolution `N` of the run.
    pub resolution: usize,
    pub sample: usize,
    /// Scan parameter (time, `|lambda|`, `|tau|`, radius).
    pub param: f64,
    /// Secondary parameter (sector angle), zero when unused.
    pub angle: f64,
    pub ratio: f64,
}

/// Empirical left/right ratios of one estimate, without its constant.
#[derive(Clone, Debug, Default)]
pub struct ScanReport {
    pub estimate: String,
    pub rows: Vec<ScanRow>,
    /// Sup over the coarse run.
    pub sup: f64,
    /// `(coarse N, fine N)` when a doubling run was made.
    pub resolutions: Option<(usize, usize)>,
    pub sup_fine: Option<f64>,
    pub excluded: usize,
    pub notes: Vec<String>,
}

impl ScanReport {
    pub fn new(estimate: impl Into<String>) -> Self {
        Self { estimate: estimate.into(), ..Default::default() }
    }

    /// Record a ratio `num / den`, or count it as excluded.
    pub fn record(&mut self, resolution: usize, sample: usize, param: f64, angle: f64, num: f64, den: f64) {
        if !(den > DENOMINATOR_FLOOR) || !num.is_finite() {
            self.excluded += 1;
            return;
        }
        self.rows.push(ScanRow { resolution, sample, param, angle, ratio: num / den });
    }

    pub fn sup_at(&self, resolution: usize) -> f64 {
        self.rows.iter().filter(|r| r.resolution == resolution).map(|r| r.ratio).fold(0.0, f64::max)
    }

    /// Fill `sup`, and the fine sup if a second resolution is present.
    pub fn finish(&mut self, coarse: usize, fine: Option<usize>) {
        self.sup = self.sup_at(coarse);
        if let Some(f) = fine {
            self.resolutions = Some((coarse, f));
            self.sup_fine = Some(self.sup_at(f));
        }
    }

    /// Relative change of the sup under doubling.
    pub fn drift(&self) -> Option<f64> {
        let fine = self.sup_fine?;
        Some(if self.sup == 0.0 { fine.abs() } else { (fine - self.sup).abs() / self.sup })
    }

    pub fn stable(&self) -> Option<bool> {
        self.drift().map(|d| d < STABILITY_TOL)
    }

    pub fn all_finite(&self) -> bool {
        self.rows.iter().all(|r| r.ratio.is_finite() && r.ratio >= 0.0)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("estimate,resolution,sample,param,angle,ratio\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{:e},{:e},{:e}", self.estimate, r.resolution, r.sample, r.param, r.angle, r.ratio);
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{}: sup {:.6e}", self.estimate, self.sup);
        if let (Some((c, f)), Some(sf)) = (self.resolutions, self.sup_fine) {
            let _ = write!(s, " (N={c}), {sf:.6e} (N={f}), drift {:.2}%", 100.0 * self.drift().unwrap_or(0.0));
        }
        if self.excluded > 0 {
            let _ = write!(s, ", {} excluded", self.excluded);
        }
        s
    }
}
