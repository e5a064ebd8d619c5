//! Growth-rate fits of the energy hierarchy from `energies.csv`, compared with the bounds
//! of the bootstrap hierarchy: bounded levels for `k <= 1`, `tau^{k - 2 + gamma}` above.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::simulate::{write_summary, Summary, ENERGIES_FILE, SUMMARY_FILE};
use crate::diagnostics::fit::{fit_rate, RateFit};
use crate::error::RunError;

/// Slack added to every exponent bound.
pub const RATE_TOLERANCE: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelFit {
    pub level: String,
    pub fit: RateFit,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub window: (f64, f64),
    pub gamma: f64,
    pub levels: Vec<LevelFit>,
    /// Levels that could not be fitted, with the reason.
    pub skipped: Vec<(String, String)>,
    pub all_pass: bool,
}

/// Exponent allowed for level `k` of either family.
pub fn rate_bound(k: usize, gamma: f64) -> f64 {
    if k <= 1 {
        RATE_TOLERANCE
    } else {
        k as f64 - 2.0 + gamma + RATE_TOLERANCE
    }
}

/// Columns of `energies.csv` by header name; empty cells become `None`.
pub fn read_energies(path: &Path) -> Result<(Vec<String>, Vec<Vec<Option<f64>>>), RunError> {
    let text = fs::read_to_string(path)?;
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let bad = |e: String| RunError::Numerical(format!("{}: {e}", path.display()));
    let headers: Vec<String> = rd.headers().map_err(|e| bad(e.to_string()))?.iter().map(String::from).collect();
    let mut cols = vec![Vec::new(); headers.len()];
    for rec in rd.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        for (c, cell) in cols.iter_mut().zip(rec.iter()) {
            let cell = cell.trim();
            c.push(if cell.is_empty() { None } else { Some(cell.parse::<f64>().map_err(|e| bad(e.to_string()))?) });
        }
    }
    Ok((headers, cols))
}

/// Fits every `E_k`/`F_k` column of a run directory and records the report in `summary.json`.
pub fn fit_rates(dir: &Path, window: Option<(f64, f64)>, gamma: Option<f64>) -> Result<FitReport, RunError> {
    let summary_path = dir.join(SUMMARY_FILE);
    let mut summary: Option<Summary> = fs::read_to_string(&summary_path).ok().and_then(|t| serde_json::from_str(&t).ok());
    let gamma = gamma.or(summary.as_ref().map(|s| s.gamma)).unwrap_or(0.25);
    let (headers, cols) = read_energies(&dir.join(ENERGIES_FILE))?;
    let tau_col = headers.iter().position(|h| h == "tau").ok_or_else(|| RunError::Numerical("no tau column".into()))?;
    let taus: Vec<Option<f64>> = cols[tau_col].clone();
    let tau_max = taus.iter().flatten().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if !tau_max.is_finite() {
        return Err(RunError::Numerical("energies.csv has no rows".into()));
    }
    let window = window.unwrap_or((3.0, tau_max - 1.0));
    let mut levels = Vec::new();
    let mut skipped = Vec::new();
    for (name, col) in headers.iter().zip(&cols) {
        let k = match name.strip_prefix('E').or_else(|| name.strip_prefix('F')).and_then(|d| d.parse::<usize>().ok()) {
            Some(k) => k,
            None => continue,
        };
        let series: Vec<(f64, f64)> = taus.iter().zip(col).filter_map(|(t, v)| Some(((*t)?, (*v)?))).collect();
        if series.is_empty() {
            continue;
        }
        match fit_rate(&series, window) {
            Ok(fit) => {
                let bound = rate_bound(k, gamma);
                levels.push(LevelFit { level: name.clone(), fit, bound, pass: fit.p <= bound });
            }
            Err(e) => skipped.push((name.clone(), e.to_string())),
        }
    }
    if levels.is_empty() {
        return Err(RunError::Numerical(format!("no level could be fitted: {skipped:?}")));
    }
    let all_pass = levels.iter().all(|l| l.pass);
    let report = FitReport { window, gamma, levels, skipped, all_pass };
    if let Some(s) = summary.as_mut() {
        s.fits = Some(report.clone());
        write_summary(dir, s)?;
    }
    Ok(report)
}
