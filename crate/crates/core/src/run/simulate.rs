//! Run orchestration: evolution from `y0 = 2`, incremental hyperboloid diagnostics and
//! output files.

use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{DataShape, RunConfig, TAIL_STEPS};
use super::rates::FitReport;
use crate::diagnostics::sample::INITIAL_TIME;
use crate::diagnostics::{analyze_slice, EnergyRecord, HierarchyTracker, IncrementalSampler};
use crate::error::{DiagnosticsError, RunError};
use crate::grid::checkpoint::write_checkpoint;
use crate::grid::evolve::{cone_leak, support_condition, ActiveRegion, Guards, Stepper};
use crate::grid::spec::GridSpec;
use crate::grid::state::{FieldState, History};
use crate::models::{Model, ModelKind};

pub const SUMMARY_SCHEMA: u32 = 1;
pub const ENERGIES_FILE: &str = "energies.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CSV_COLUMNS: [&str; 15] = [
    "tau", "E0", "E1", "E2", "E3", "E4", "F0", "F1", "F2", "F3", "geomE0", "supPhiW", "supTphiW", "supL2W", "sobolevRatio",
];

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub config_hash: String,
    pub model: Option<ModelKind>,
    pub gamma: f64,
    pub status: String,
    pub exit_code: i32,
    pub steps: usize,
    pub final_time: f64,
    pub dt: f64,
    pub h: f64,
    pub taus: Vec<f64>,
    /// `sup |L^1 phi| (y0)^{1/2}` per sample.
    pub sup_l1_w: Vec<f64>,
    pub sup_phi_w: Vec<f64>,
    pub sup_tphi_w: Vec<f64>,
    /// `E[phi; g] / E[phi; m]` per sample.
    pub geom_mink_ratio: Vec<f64>,
    /// `max |g^{-1}(d tau, d tau) + 1|` per sample.
    pub dtau_deviation: Vec<f64>,
    pub det_min: f64,
    pub det_max: f64,
    /// Sampled points violating the support condition.
    pub support_violations: usize,
    /// Steps after which some grid value above the guard tolerance violates the support condition.
    pub support_violation_steps: usize,
    /// Largest such value, relative to the maximum.
    pub support_violation_max: f64,
    /// Largest field value found beyond the guard distance ahead of the cone, relative to the maximum.
    pub max_cone_leak: f64,
    pub wall_seconds: f64,
    pub fits: Option<FitReport>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub records: Vec<EnergyRecord>,
    pub summary: Summary,
    pub final_state: FieldState,
}

fn bump(shape: DataShape, s: f64) -> f64 {
    if s >= 1.0 {
        return 0.0;
    }
    match shape {
        DataShape::Polynomial => (1.0 - s * s).powi(8),
        DataShape::Smooth => (1.0 - 1.0 / (1.0 - s * s)).exp(),
    }
}

pub fn initial_state(cfg: &RunConfig, grid: &GridSpec) -> FieldState {
    let d = &cfg.data;
    let mut s = FieldState::zeros(grid.len(), INITIAL_TIME);
    for idx in 0..grid.len() {
        let p = grid.point(idx);
        let r = ((p[0] - d.center[0]).powi(2) + (p[1] - d.center[1]).powi(2) + (p[2] - d.center[2]).powi(2)).sqrt();
        let b = bump(d.shape, r / d.radius);
        s.phi[idx] = d.amplitude * b;
        s.pi[idx] = d.pi_amplitude * b;
    }
    s
}

struct Progress {
    tracker: HierarchyTracker,
    steps: usize,
    max_leak: f64,
    support_steps: usize,
    support_max: f64,
}

fn evolve(cfg: &RunConfig, grid: GridSpec, dir: Option<&Path>, state: &mut FieldState, pr: &mut Progress) -> Result<(), RunError> {
    let model = Model::new(cfg.model, cfg.profile());
    let cone = cfg.cone();
    let h = grid.h();
    let active = ActiveRegion::Cone { center: cone.center, radius: cone.radius, t0: INITIAL_TIME, pad: (Guards::default().cone_cells + 3.0) * h };
    let mut stepper = Stepper::new(grid, active);
    let mut history = History::new(cfg.run.history_depth);
    history.push(state);
    let mut sampler = IncrementalSampler::new(&grid, &cfg.taus(), cone);
    let dt = grid.dt(1.0);
    let end = sampler.y0_needed() + TAIL_STEPS * dt;
    let opts = cfg.diagnostics_options();
    let profile = cfg.profile();
    let tag = cfg.hash();
    let ckpt = |s: &FieldState, step: usize| -> Result<(), RunError> {
        if let Some(dir) = dir {
            let path = dir.join("checkpoints").join(format!("step_{step:06}.bin"));
            let f = fs::File::create(path)?;
            write_checkpoint(std::io::BufWriter::new(f), &grid, s, &tag)?;
        }
        Ok(())
    };
    while sampler.pending() > 0 {
        let flushing = state.t > end;
        let done = if flushing {
            sampler.advance(&history, true)?
        } else {
            stepper.step(&model, state, dt)?;
            pr.steps += 1;
            history.push(state);
            pr.max_leak = pr.max_leak.max(cone_leak(&grid, state, cone.center, cone.radius, INITIAL_TIME, stepper.guards.cone_cells));
            let (count, worst) = support_condition(&grid, state, cone.center, cone.radius, stepper.guards.escape_tol);
            if count > 0 {
                pr.support_steps += 1;
                pr.support_max = pr.support_max.max(worst);
            }
            if cfg.run.checkpoint_every > 0 && pr.steps % cfg.run.checkpoint_every == 0 {
                ckpt(state, pr.steps)?;
            }
            sampler.advance(&history, false)?
        };
        for sample in done {
            let rec = analyze_slice(&sample, &profile, &opts, cone)?;
            pr.tracker.push(rec);
        }
        if flushing && sampler.pending() > 0 {
            return Err(DiagnosticsError::WindowInsufficient { tau: cfg.run.tau_max }.into());
        }
    }
    ckpt(state, pr.steps)
}

/// Evolves the configured problem and writes outputs under `dir` when given.
pub fn simulate(cfg: &RunConfig, dir: Option<&Path>) -> Result<RunOutput, (RunError, Option<Summary>)> {
    let start = Instant::now();
    let grid = cfg.grid_spec().map_err(|e| (RunError::from(e), None))?;
    if let Some(dir) = dir {
        fs::create_dir_all(dir.join("checkpoints")).map_err(|e| (RunError::from(e), None))?;
    }
    let mut state = initial_state(cfg, &grid);
    let mut pr = Progress { tracker: HierarchyTracker::new(cfg.diagnostics.k_max), steps: 0, max_leak: 0.0, support_steps: 0, support_max: 0.0 };
    let result = evolve(cfg, grid, dir, &mut state, &mut pr);
    let mut summary = summarize(cfg, &grid, &pr, &state);
    summary.wall_seconds = start.elapsed().as_secs_f64();
    if let Err(e) = &result {
        summary.status = e.to_string();
        summary.exit_code = e.exit_code();
    }
    if let Some(dir) = dir {
        if let Err(e) = write_outputs(cfg, dir, &pr.tracker.records, &summary) {
            return Err((e, Some(summary)));
        }
    }
    match result {
        Ok(()) => Ok(RunOutput { records: pr.tracker.records, summary, final_state: state }),
        Err(e) => Err((e, Some(summary))),
    }
}

fn summarize(cfg: &RunConfig, grid: &GridSpec, pr: &Progress, state: &FieldState) -> Summary {
    let recs = &pr.tracker.records;
    let pick = |f: &dyn Fn(&EnergyRecord) -> f64| recs.iter().map(f).collect::<Vec<f64>>();
    Summary {
        schema_version: SUMMARY_SCHEMA,
        config_hash: cfg.hash_hex(),
        model: Some(cfg.model),
        gamma: cfg.diagnostics.gamma,
        status: "ok".into(),
        exit_code: 0,
        steps: pr.steps,
        final_time: state.t,
        dt: grid.dt(1.0),
        h: grid.h(),
        taus: pick(&|r| r.tau),
        sup_l1_w: pick(&|r| r.slice.sup_l1_w),
        sup_phi_w: pick(&|r| r.slice.sup_phi_w),
        sup_tphi_w: pick(&|r| r.slice.sup_tphi_w),
        geom_mink_ratio: pick(&|r| if r.slice.mink_e0 > 0.0 { r.slice.geom_e0 / r.slice.mink_e0 } else { 1.0 }),
        dtau_deviation: pick(&|r| r.slice.dtau_deviation),
        det_min: recs.iter().map(|r| r.slice.det_range.0).fold(f64::INFINITY, f64::min).min(1.0),
        det_max: recs.iter().map(|r| r.slice.det_range.1).fold(f64::NEG_INFINITY, f64::max).max(1.0),
        support_violations: recs.iter().map(|r| r.slice.support_violations).sum(),
        support_violation_steps: pr.support_steps,
        support_violation_max: pr.support_max,
        max_cone_leak: pr.max_leak,
        wall_seconds: 0.0,
        fits: None,
    }
}

/// CSV row of a record; levels beyond `k_max` are left empty.
pub fn csv_row(r: &EnergyRecord) -> Vec<String> {
    let opt = |v: Option<&f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_default();
    let mut row = vec![format!("{:.12}", r.tau)];
    row.extend((0..5).map(|k| opt(r.e.get(k))));
    row.extend((0..4).map(|k| opt(r.f.get(k))));
    let s = &r.slice;
    row.extend([s.geom_e0, s.sup_phi_w, s.sup_tphi_w, s.sup_l2_w, s.sobolev_ratio].iter().map(|v| format!("{v:.12e}")));
    row
}

pub fn write_outputs(cfg: &RunConfig, dir: &Path, records: &[EnergyRecord], summary: &Summary) -> Result<(), RunError> {
    if cfg.output.formats.iter().any(|f| f == "csv") {
        write_energies(dir, &cfg.hash_hex(), records)?;
    }
    if cfg.output.formats.iter().any(|f| f == "json") {
        write_summary(dir, summary)?;
    }
    Ok(())
}

pub fn write_energies(dir: &Path, hash: &str, records: &[EnergyRecord]) -> Result<(), RunError> {
    let mut out = format!("# config_sha256={hash}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        let csv_err = |e: csv::Error| RunError::Io(std::io::Error::other(e));
        w.write_record(CSV_COLUMNS).map_err(csv_err)?;
        for r in records {
            w.write_record(csv_row(r)).map_err(csv_err)?;
        }
        w.flush()?;
    }
    fs::write(dir.join(ENERGIES_FILE), out)?;
    Ok(())
}

pub fn write_summary(dir: &Path, summary: &Summary) -> Result<(), RunError> {
    let text = serde_json::to_string_pretty(summary).map_err(|e| RunError::Io(std::io::Error::other(e)))?;
    fs::write(dir.join(SUMMARY_FILE), text)?;
    Ok(())
}
