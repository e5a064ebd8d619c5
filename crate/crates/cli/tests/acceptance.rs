//! Acceptance criteria 1-9. Each test writes one `criterion N: PASS|FAIL` line to stderr
//! (bypassing output capture) and fails when its criterion is not met.

use std::io::Write;
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use membrane_core::diagnostics::inequalities::{check_stress_decomposition, cubic_gradient, hardy_family_worst, HARDY_CONSTANT};
use membrane_core::diagnostics::EnergyRecord;
use membrane_core::geometry::metric::invert4;
use membrane_core::geometry::*;
use membrane_core::grid::GridSpec;
use membrane_core::ledger::{
    close_bootstrap, emit_table, quasilinear_close, rat, BootstrapScheme, ExponentBound, GammaAffine, TermInventory,
};
use membrane_core::models::checks::background_residual;
use membrane_core::models::mms::{mms_convergence, Manufactured};
use membrane_core::models::{Model, ModelKind};
use membrane_core::run::rates::rate_bound;
use membrane_core::run::{fit_rates, simulate, FitReport, RunConfig, Summary};
use membrane_core::weight_algebra::{verify_algebra, BracketTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, pass: bool, detail: &str) {
    let line = format!("criterion {n}: {} {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn verdict(n: u32, failures: &[String], detail: String) {
    report(n, failures.is_empty(), &detail);
    assert!(failures.is_empty(), "criterion {n}: {}", failures.join("; "));
}

// ---------------------------------------------------------------------------------------
// shared acceptance runs

struct Run {
    name: &'static str,
    result: Result<(Vec<EnergyRecord>, Summary, Option<FitReport>), String>,
}

fn config(name: &str) -> RunConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.toml"));
    RunConfig::load(&path).unwrap()
}

const FIT_WINDOW: (f64, f64) = (3.0, 8.0);

fn run(name: &'static str) -> Run {
    let cfg = config(name);
    let dir = tempfile::tempdir().unwrap();
    let result = match simulate(&cfg, Some(dir.path())) {
        Ok(out) => {
            let fits = if cfg.model == ModelKind::Linear { None } else { fit_rates(dir.path(), Some(FIT_WINDOW), None).ok() };
            Ok((out.records, out.summary, fits))
        }
        Err((e, _)) => Err(format!("{name} run failed (exit {}): {e}", e.exit_code())),
    };
    Run { name, result }
}

fn runs() -> &'static [Run; 3] {
    static RUNS: OnceLock<[Run; 3]> = OnceLock::new();
    RUNS.get_or_init(|| [run("linear"), run("semilinear"), run("quasilinear")])
}

fn nonlinear_runs() -> &'static [Run] {
    &runs()[1..]
}

// ---------------------------------------------------------------------------------------

#[test]
fn criterion_1_symbolic_calculus() {
    let start = Instant::now();
    let rep = verify_algebra(3, &BracketTable::standard(3));
    let secs = start.elapsed().as_secs_f64();
    let mutated = verify_algebra(3, &BracketTable::mutated(3));
    let mut fail = Vec::new();
    if !rep.all_passed() {
        fail.push(format!("failed identities: {:?}", rep.failures().iter().map(|r| &r.name).collect::<Vec<_>>()));
    }
    if rep.identities.len() < 30 {
        fail.push(format!("only {} identities", rep.identities.len()));
    }
    if secs >= 10.0 {
        fail.push(format!("runtime {secs:.2} s"));
    }
    if mutated.all_passed() {
        fail.push("mutated bracket table not detected".into());
    }
    let detail = format!(
        "{} identities exact, runtime {secs:.3} s, mutated table caught by {} identities",
        rep.identities.len(),
        mutated.failures().len()
    );
    verdict(1, &fail, detail);
}

#[test]
fn criterion_2_ledger_golden_files() {
    let start = Instant::now();
    let g = rat(1, 4);
    let mut fail = Vec::new();
    let mut notes = Vec::new();
    for d in [3, 4, 5, 6] {
        let t = emit_table(d, g).unwrap();
        notes.push(format!("d={d}: {} rows, {} mismatches", t.rows.len(), t.mismatches()));
        if t.mismatches() > 0 {
            fail.push(format!("d={d} table has {} mismatching rows", t.mismatches()));
        }
        let c = close_bootstrap(&BootstrapScheme::semilinear(d, g).unwrap()).unwrap();
        if !c.closes {
            fail.push(format!("d={d} does not close"));
        }
    }
    let q = BootstrapScheme::quasilinear(rat(1, 5)).unwrap();
    let qr = quasilinear_close(&q, &TermInventory::builtin()).unwrap();
    for l in &qr.levels {
        let ok = if l.k <= 1 {
            l.growth.is_bounded(q.gamma)
        } else {
            l.closing_class == ExponentBound::new(rat(2, 1), GammaAffine::ints(2 * (l.k as i64 - 2), 2), 0)
        };
        if !ok {
            fail.push(format!("quasilinear {}: growth {}, closing class {}", l.label, l.growth, l.closing_class));
        }
    }
    if !qr.closes {
        fail.push("quasilinear scheme does not close".into());
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 5.0 {
        fail.push(format!("runtime {secs:.2} s"));
    }
    verdict(2, &fail, format!("{}; d=3..6 close; quasilinear classes checked; {secs:.2} s", notes.join(", ")));
}

#[test]
fn criterion_3_geometry_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut inv_err = 0.0f64;
    let mut jets = 0;
    while jets < 10_000 {
        let c = rng.gen_range(-0.3..0.3);
        let d: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-0.5..0.5));
        let Ok(m) = metric_from_c(c, &d) else { continue };
        let direct = invert4(&m.g).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                inv_err = inv_err.max((m.g_inv[i][j] - direct[i][j]).abs());
            }
        }
        jets += 1;
    }
    let mut trip = 0.0f64;
    for _ in 0..10_000 {
        let y: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-20.0..20.0));
        let back = from_null(to_null(y));
        for i in 0..4 {
            trip = trip.max((back[i] - y[i]).abs());
        }
        let p = PlaneWaveProfile::canonical();
        let (t, x1) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let (t2, x2) = reconstruct_txt(null_from_txt(t, x1, [y[2], y[3]], &p).unwrap(), &p).unwrap();
        trip = trip.max((t2 - t).abs()).max((x2 - x1).abs());
    }
    let points: Vec<[f64; 4]> = (0..200)
        .map(|_| {
            let tau: f64 = rng.gen_range(0.5..10.0);
            let yb: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-10.0..10.0));
            [(tau * tau + yb.iter().map(|v| v * v).sum::<f64>()).sqrt(), yb[0], yb[1], yb[2]]
        })
        .collect();
    let mut stress = 0.0f64;
    for _ in 0..100 {
        let c: [f64; 18] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        stress = stress.max(check_stress_decomposition(|y| (0.0, cubic_gradient(&c, y)), &points));
    }
    let mut fail = Vec::new();
    if inv_err > 1e-12 {
        fail.push(format!("rank-one inverse error {inv_err:.2e}"));
    }
    if trip > 1e-12 {
        fail.push(format!("round-trip error {trip:.2e}"));
    }
    if stress > 1e-10 {
        fail.push(format!("stress identity error {stress:.2e}"));
    }
    verdict(3, &fail, format!("inverse {inv_err:.1e} over 1e4 jets, round trips {trip:.1e}, stress {stress:.1e} over 100 fields"));
}

#[test]
fn criterion_4_hardy_constant() {
    let mut fail = Vec::new();
    let mut worst = Vec::new();
    for tau in [2.0, 4.0, 8.0] {
        let w = hardy_family_worst(tau, 97).unwrap();
        worst.push(format!("tau={tau}: {w:.4}"));
        if w > HARDY_CONSTANT * 1.05 {
            fail.push(format!("tau={tau}: ratio {w}"));
        }
    }
    verdict(4, &fail, format!("worst ratios {} (limit {})", worst.join(", "), HARDY_CONSTANT * 1.05));
}

#[test]
fn criterion_5_background_preserved() {
    let grid = GridSpec::new(6.0, 25, 0.01, 0.5).unwrap();
    let profiles = [PlaneWaveProfile::canonical(), PlaneWaveProfile::double_bump(), PlaneWaveProfile::single(1.0, 1.0, 40.0)];
    let mut fail = Vec::new();
    let mut worst = 0.0f64;
    for kind in [ModelKind::Semilinear, ModelKind::Quasilinear] {
        for (i, p) in profiles.iter().enumerate() {
            let r = background_residual(kind, p, grid).unwrap();
            worst = worst.max(r);
            if r > 1e-13 {
                fail.push(format!("{kind:?} profile {i}: {r:.2e}"));
            }
        }
    }
    verdict(5, &fail, format!("worst residual {worst:.1e} after 100 steps, 3 profiles x 2 models"));
}

#[test]
fn criterion_6_convergence_and_drift() {
    let mut fail = Vec::new();
    let mut notes = Vec::new();
    let m = Manufactured { amplitude: 0.1 };
    for kind in [ModelKind::Semilinear, ModelKind::Quasilinear] {
        let model = Model::new(kind, PlaneWaveProfile::canonical());
        match mms_convergence(&model, m, 5.0, &[49, 65, 97], 0.5) {
            Ok((_, orders)) => {
                notes.push(format!("{kind:?} orders {:.2}/{:.2}", orders[0], orders[1]));
                if orders.iter().any(|&o| o < 3.5) {
                    fail.push(format!("{kind:?} MMS orders {orders:?}"));
                }
            }
            Err(e) => fail.push(format!("{kind:?} MMS failed: {e}")),
        }
    }
    match &runs()[0].result {
        Ok((recs, _, _)) => {
            let e2 = recs[0].slice.mink_e0;
            let drift = recs.iter().filter(|r| r.tau <= 8.0).map(|r| (r.slice.mink_e0 - e2).abs() / e2).fold(0.0, f64::max);
            notes.push(format!("linear E0 drift {:.2}%", 100.0 * drift));
            if drift > 0.005 {
                fail.push(format!("linear E0 drift {:.3}% over [2, 8]", 100.0 * drift));
            }
        }
        Err(e) => fail.push(e.clone()),
    }
    verdict(6, &fail, notes.join(", "));
}

#[test]
fn criterion_7_energy_rates() {
    let mut fail = Vec::new();
    let mut notes = Vec::new();
    for r in nonlinear_runs() {
        let levels: &[&str] = if r.name == "semilinear" { &["E0", "E1", "E2", "E3"] } else { &["E0", "E1", "E2", "E3", "F0", "F1", "F2"] };
        match &r.result {
            Ok((_, _, Some(fits))) => {
                for name in levels {
                    let Some(l) = fits.levels.iter().find(|l| l.level == *name) else {
                        fail.push(format!("{} {name}: not fitted", r.name));
                        continue;
                    };
                    let k: usize = name[1..].parse().unwrap();
                    let bound = rate_bound(k, 0.25);
                    notes.push(format!("{} {name} p={:.3}", r.name, l.fit.p));
                    if l.fit.p > bound {
                        fail.push(format!("{} {name}: p = {:.3} > {bound}", r.name, l.fit.p));
                    }
                }
            }
            Ok((_, _, None)) => fail.push(format!("{}: rate fit failed", r.name)),
            Err(e) => fail.push(e.clone()),
        }
    }
    verdict(7, &fail, notes.join(", "));
}

/// Pairs `(i, j)` with `3 <= tau_i < tau_j` where `v_j > slack * v_i`.
fn increases(taus: &[f64], v: &[f64], slack: f64) -> Option<(f64, f64, f64, f64)> {
    for i in 0..taus.len() {
        if taus[i] < 3.0 - 1e-9 {
            continue;
        }
        for j in i + 1..taus.len() {
            if v[j] > slack * v[i] {
                return Some((taus[i], v[i], taus[j], v[j]));
            }
        }
    }
    None
}

#[test]
fn criterion_8_pointwise_monitors() {
    let mut fail = Vec::new();
    let mut notes = Vec::new();
    for r in nonlinear_runs() {
        let (_, s, _) = match &r.result {
            Ok(v) => v,
            Err(e) => {
                fail.push(e.clone());
                continue;
            }
        };
        for (name, series) in [("sup|phi|y0^1/2", &s.sup_phi_w), ("sup|L1 phi|y0^1/2", &s.sup_l1_w)] {
            if let Some((a, va, b, vb)) = increases(&s.taus, series, 1.1) {
                fail.push(format!("{} {name}: {vb:.3e} at tau={b} exceeds 1.1 x {va:.3e} at tau={a}", r.name));
            }
        }
        let i3 = s.taus.iter().position(|&t| (t - 3.0).abs() < 1e-9).expect("tau = 3 is sampled");
        let ref3 = s.sup_tphi_w[i3];
        let max_after = s.sup_tphi_w[i3..].iter().cloned().fold(0.0, f64::max);
        notes.push(format!("{} sup|T phi| weight ratio {:.2}", r.name, max_after / ref3));
        if max_after > 1.5 * ref3 {
            fail.push(format!("{} sup|T phi|y0^1/2 tau^(1-g): {max_after:.3e} > 1.5 x {ref3:.3e}", r.name));
        }
    }
    verdict(8, &fail, notes.join(", "));
}

#[test]
fn criterion_9_guards() {
    let mut fail = Vec::new();
    let mut notes = Vec::new();
    for r in runs() {
        let (_, s, _) = match &r.result {
            Ok(v) => v,
            Err(e) => {
                fail.push(e.clone());
                continue;
            }
        };
        if s.support_violations > 0 || s.support_violation_steps > 0 {
            fail.push(format!(
                "{}: support condition violated at {} of {} steps (largest relative value {:.2e}), {} sampled points",
                r.name, s.support_violation_steps, s.steps, s.support_violation_max, s.support_violations
            ));
        }
        if s.det_min < 0.5 || s.det_max > 2.0 {
            fail.push(format!("{}: |g| in [{}, {}]", r.name, s.det_min, s.det_max));
        }
        let (lo, hi) = s.geom_mink_ratio.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if lo < 0.5 || hi > 2.0 {
            fail.push(format!("{}: energy ratio in [{lo}, {hi}]", r.name));
        }
        notes.push(format!("{}: |g| in [{:.6}, {:.6}], ratio in [{lo:.6}, {hi:.6}], exit {}", r.name, s.det_min, s.det_max, s.exit_code));
    }
    verdict(9, &fail, notes.join("; "));
}
