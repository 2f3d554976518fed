use std::time::{Duration, Instant};

use super::config::RunConfig;
use super::problem::{reference_values, run_config, RunOutcome};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub linf: f64,
}

/// `L1 = sum |e| * cell_volume` and `Linf = max |e|`.
pub fn error_norms(numeric: &[f64], reference: &[f64], cell_volume: f64) -> Result<ErrorNorms> {
    if numeric.len() != reference.len() {
        return Err(Error::InvalidArgument(format!(
            "numeric field has {} values, reference has {}",
            numeric.len(),
            reference.len()
        )));
    }
    let (mut sum, mut linf) = (0.0, 0.0f64);
    for (a, b) in numeric.iter().zip(reference) {
        let e = (a - b).abs();
        sum += e;
        linf = linf.max(e);
    }
    Ok(ErrorNorms { l1: sum * cell_volume, linf })
}

/// Error of one run against its preset's reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorEntry {
    pub cells: usize,
    pub norms: ErrorNorms,
    pub steps: usize,
    pub wall_time: Duration,
}

/// Observed order between two consecutive meshes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderEntry {
    pub coarse: usize,
    pub fine: usize,
    pub l1: f64,
    pub linf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub scheme: String,
    pub entries: Vec<ErrorEntry>,
    pub orders: Vec<OrderEntry>,
}

impl ErrorReport {
    /// Builds the report, computing `log2(e_h / e_{h/2})` for every pair of
    /// consecutive entries whose cell counts differ by exactly a factor 2.
    pub fn new(scheme: impl Into<String>, entries: Vec<ErrorEntry>) -> Self {
        let orders = entries
            .windows(2)
            .filter(|w| w[1].cells == 2 * w[0].cells)
            .map(|w| OrderEntry {
                coarse: w[0].cells,
                fine: w[1].cells,
                l1: (w[0].norms.l1 / w[1].norms.l1).log2(),
                linf: (w[0].norms.linf / w[1].norms.linf).log2(),
            })
            .collect();
        Self { scheme: scheme.into(), entries, orders }
    }

    /// Least-squares slope of `-log2 L1` against `log2 cells` over all entries.
    pub fn fitted_l1_order(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self.entries.iter().map(|e| ((e.cells as f64).log2(), -e.norms.l1.log2())).collect();
        fit_slope(&pts)
    }
}

pub(crate) fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Error of a finished run, or `None` if the preset has no reference.
pub fn error_entry(outcome: &RunOutcome) -> Result<Option<ErrorEntry>> {
    let Some(reference) = reference_values(&outcome.config, &outcome.solution)? else {
        return Ok(None);
    };
    let norms = error_norms(&outcome.solution.component(0), &reference, outcome.solution.cell_volume())?;
    Ok(Some(ErrorEntry {
        cells: outcome.config.cells,
        norms,
        steps: outcome.diagnostics.step_count(),
        wall_time: outcome.diagnostics.wall_time,
    }))
}

/// Runs `cfg` on each mesh and compares against the preset reference.
pub fn convergence_study(cfg: &RunConfig, meshes: &[usize]) -> Result<ErrorReport> {
    if meshes.is_empty() {
        return Err(Error::InvalidArgument("convergence study needs at least one mesh".into()));
    }
    let mut entries = Vec::with_capacity(meshes.len());
    for &cells in meshes {
        let mut run = cfg.clone().with_cells(cells);
        run.dump_psi = false;
        let outcome = run_config(&run)?;
        let entry = error_entry(&outcome)?
            .ok_or_else(|| Error::InvalidArgument(format!("preset {} has no reference solution", cfg.preset)))?;
        entries.push(entry);
    }
    Ok(ErrorReport::new(cfg.scheme.label(), entries))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub label: String,
    pub seconds: f64,
    /// Time relative to the baseline row.
    pub ratio: f64,
}

/// Normalizes wall times to the `FL-CAT2` (ACAT2) row, or the first row if absent.
pub fn normalize_timings(times: &[(String, f64)]) -> Vec<TimingRow> {
    let base = times.iter().find(|(l, _)| l == "FL-CAT2").or(times.first()).map(|t| t.1).unwrap_or(1.0);
    times.iter().map(|(l, s)| TimingRow { label: l.clone(), seconds: *s, ratio: s / base }).collect()
}

/// Runs every configuration `repeats` times and reports the best wall time,
/// normalized to ACAT2.
pub fn timing_table(configs: &[RunConfig], repeats: usize) -> Result<Vec<TimingRow>> {
    let mut times = Vec::with_capacity(configs.len());
    for cfg in configs {
        let mut best = f64::INFINITY;
        for _ in 0..repeats.max(1) {
            let start = Instant::now();
            run_config(cfg)?;
            best = best.min(start.elapsed().as_secs_f64());
        }
        times.push((cfg.scheme.label(), best));
    }
    Ok(normalize_timings(&times))
}
