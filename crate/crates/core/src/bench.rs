//! Wall-clock comparison of the quadratic direct path and the spectral path.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::kernels::OmegaParam;
use crate::quadrature::{Grid, PVConfig};
use crate::signals::gaussian;
use crate::transform::{apply_phi_direct, make_plan, VectorSignal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchStatus {
    Ok,
    /// Deviation above tolerance.
    Deviates,
    /// Direct path skipped or slower than the per-size budget.
    Timeout,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub spectral_seconds: f64,
    pub direct_seconds: Option<f64>,
    pub max_deviation: Option<f64>,
    pub status: BenchStatus,
}

impl BenchRow {
    pub fn spectral_faster(&self) -> Option<bool> {
        self.direct_seconds.map(|d| self.spectral_seconds < d)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub omega: f64,
    /// Half-width of the grid in units of `1/ω`.
    pub half_span: f64,
    pub sizes: Vec<usize>,
    pub timeout: Duration,
    pub tolerance: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { omega: 1.0, half_span: 20.0, sizes: vec![256, 1024, 4096], timeout: Duration::from_secs(60), tolerance: 1e-4 }
    }
}

/// Applies `Φ_ω` to `[g, g']` on `[−L/ω, L/ω]` at every size both ways.
///
/// Before each direct run the time is extrapolated quadratically from the
/// previous size; if that exceeds the budget the direct run is skipped.
pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let w = OmegaParam::new(cfg.omega)?;
    if cfg.sizes.windows(2).any(|p| p[1] < p[0]) {
        return Err(invalid("sizes", "must be ascending"));
    }
    let pv = PVConfig::default();
    let half = cfg.half_span / cfg.omega;
    let mut rows = Vec::with_capacity(cfg.sizes.len());
    let mut last_direct: Option<(usize, f64)> = None;
    for &n in &cfg.sizes {
        let grid = Grid::from_bounds(-half, half, n)?;
        let g = gaussian(grid, 0.3 / cfg.omega, 1.0 / cfg.omega)?;
        let gt = g.map(|t, z| z * (t * cfg.omega));
        let x = VectorSignal::new(g, gt)?;

        let start = Instant::now();
        let spectral = make_plan(w, grid).and_then(|p| p.apply_phi(&x));
        let spectral_seconds = start.elapsed().as_secs_f64();
        let Ok(spectral) = spectral else {
            rows.push(BenchRow { n, spectral_seconds, direct_seconds: None, max_deviation: None, status: BenchStatus::Failed });
            continue;
        };

        let predicted = last_direct.map(|(m, s)| s * (n as f64 / m as f64).powi(2)).unwrap_or(0.0);
        if predicted > cfg.timeout.as_secs_f64() {
            log::warn!("n = {n}: direct path predicted to take {predicted:.1}s, skipped");
            rows.push(BenchRow { n, spectral_seconds, direct_seconds: None, max_deviation: None, status: BenchStatus::Timeout });
            continue;
        }
        let start = Instant::now();
        let direct = apply_phi_direct(w, &x, &pv);
        let direct_seconds = start.elapsed().as_secs_f64();
        last_direct = Some((n, direct_seconds));
        let (max_deviation, status) = match direct.and_then(|d| spectral.max_abs_diff(&d)) {
            Ok(dev) if direct_seconds > cfg.timeout.as_secs_f64() => (Some(dev), BenchStatus::Timeout),
            Ok(dev) if dev <= cfg.tolerance => (Some(dev), BenchStatus::Ok),
            Ok(dev) => (Some(dev), BenchStatus::Deviates),
            Err(e) => {
                log::warn!("n = {n}: direct path failed: {e}");
                (None, BenchStatus::Failed)
            }
        };
        rows.push(BenchRow { n, spectral_seconds, direct_seconds: Some(direct_seconds), max_deviation, status });
    }
    Ok(rows)
}
