//! `membrane`: runs, checks and ledgers for plane-wave perturbations of the membrane equation.
//!
//! Exit codes: 0 success, 1 a requested check failed, 2 configuration or argument error,
//! 3 guard trip during a run, 4 numerical or i/o failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use membrane_core::diagnostics::inequalities::inequality_suite;
use membrane_core::ledger::{
    close_bootstrap, emit_table, quasilinear_close, BootstrapScheme, ClosureReport, QuasilinearReport, Rat, TableReport,
    TermInventory,
};
use membrane_core::run::{fit_rates, simulate, FitReport, RunConfig};
use membrane_core::weight_algebra::{verify_algebra, AlgebraReport, BracketTable};
use membrane_core::LedgerError;
use serde::Serialize;

const CHECK_FAILED: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "membrane", version, about = "Plane-wave membrane perturbations: evolution, energy diagnostics and rate ledgers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a configured run and write energies.csv, summary.json and checkpoints.
    Simulate {
        config: PathBuf,
        /// Output directory; overrides `output.directory` of the config.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Fit growth rates after a clean run.
        #[arg(long)]
        fit: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the exact identity suite of the vector-field calculus.
    VerifyAlgebra {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Use a bracket table with a corrupted `[L1, T]` entry; the suite must fail.
        #[arg(long)]
        mutated: bool,
        #[arg(long)]
        json: bool,
    },
    /// Weight tables and closure verdicts of the bootstrap hierarchy.
    Ledger(LedgerArgs),
    /// Weight table of dimension `dim` compared with the transcribed table.
    EmitTable {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value = "1/4")]
        gamma: String,
        /// Exit with 1 on any mismatch.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        json: bool,
    },
    /// Fit energy growth rates of a run directory and update its summary.json.
    FitRates {
        dir: PathBuf,
        /// Fit window `a,b` in tau; default `3, tau_max - 1`.
        #[arg(long, value_parser = parse_window)]
        window: Option<(f64, f64)>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Stress identity, Hardy family and volume-element checks.
    CheckInequalities {
        /// Number of cubic test fields for the stress identity.
        #[arg(long, default_value_t = 100)]
        fields: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![2.0, 4.0, 8.0])]
        taus: Vec<f64>,
        /// Grid points per axis for the Hardy family.
        #[arg(long, default_value_t = 97)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct LedgerArgs {
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Rational in `(0, 1/3)`, or `(0, 1/4)` for the quasilinear scheme; default 1/4 or 1/5.
    #[arg(long)]
    gamma: Option<String>,
    /// `semilinear`, `quasilinear`, or a comma list of level exponents such as `0,0,γ,1+γ`.
    #[arg(long, default_value = "semilinear")]
    scheme: String,
    /// Quasilinear term inventory file replacing the bundled one.
    #[arg(long)]
    inventory: Option<PathBuf>,
    /// Print the closure verdict.
    #[arg(long)]
    close: bool,
    /// Print the weight table and its comparison with the transcription.
    #[arg(long)]
    emit_table: bool,
    /// Exit with 1 on table mismatches or a scheme that does not close.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    json: bool,
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected `a,b`")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if !(a < b) {
        return Err("window must satisfy a < b".into());
    }
    Ok((a, b))
}

/// Exact rational from `p/q`, an integer or a finite decimal.
fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        if digits > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("`{s}` is not a rational"));
        }
        let den = 10i64.pow(digits);
        let neg = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| format!("`{s}` is not a rational"))? };
        let f: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| format!("`{s}` is not a rational"))? };
        let num = whole * den + if neg { -f } else { f };
        return Ok(Rat::new(num, den));
    }
    Rat::from_str(s).map_err(|_| format!("`{s}` is not a rational"))
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn fail(msg: impl std::fmt::Display, code: u8) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn ledger_code(e: &LedgerError) -> u8 {
    match e {
        LedgerError::InventoryFormat(_) | LedgerError::MissingInventory(_) => 4,
        _ => USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate { config, output, fit, json } => cmd_simulate(&config, output, fit, json),
        Command::VerifyAlgebra { dim, mutated, json } => cmd_verify(dim, mutated, json),
        Command::Ledger(args) => cmd_ledger(args),
        Command::EmitTable { dim, gamma, check, json } => match parse_rat(&gamma) {
            Ok(g) => table_command(dim, g, check, json),
            Err(e) => fail(e, USAGE),
        },
        Command::FitRates { dir, window, gamma, json } => cmd_fit(&dir, window, gamma, json),
        Command::CheckInequalities { fields, taus, n, json } => cmd_inequalities(fields, &taus, n, json),
    }
}

fn cmd_simulate(config: &Path, output: Option<PathBuf>, fit: bool, json: bool) -> ExitCode {
    let cfg = match RunConfig::load(config) {
        Ok(c) => c,
        Err(e) => return fail(e, USAGE),
    };
    let dir = output.unwrap_or_else(|| PathBuf::from(&cfg.output.directory));
    match simulate(&cfg, Some(&dir)) {
        Ok(out) => {
            let mut summary = out.summary;
            if fit {
                match fit_rates(&dir, None, None) {
                    Ok(r) => summary.fits = Some(r),
                    Err(e) => return fail(&e, e.exit_code() as u8),
                }
            }
            if json {
                print_json(&summary);
            } else {
                println!("run {} ({:?}) finished: {} steps to y0 = {:.3}", summary.config_hash, cfg.model, summary.steps, summary.final_time);
                println!("samples: {}, output: {}", summary.taus.len(), dir.display());
                println!(
                    "support: {} sampled violations, {} grid steps in violation (max rel {:.2e}), cone leak {:.2e}",
                    summary.support_violations,
                    summary.support_violation_steps,
                    summary.support_violation_max,
                    summary.max_cone_leak
                );
                if let Some(f) = &summary.fits {
                    print_fits(f);
                }
            }
            ExitCode::SUCCESS
        }
        Err((e, _)) => fail(e.to_string(), e.exit_code() as u8),
    }
}

fn cmd_verify(dim: usize, mutated: bool, json: bool) -> ExitCode {
    if dim < 2 {
        return fail("the calculus needs dim >= 2", USAGE);
    }
    let table = if mutated { BracketTable::mutated(dim) } else { BracketTable::standard(dim) };
    let report: AlgebraReport = verify_algebra(dim, &table);
    let failed = report.failures().len();
    if json {
        print_json(&report);
    } else {
        for r in &report.identities {
            println!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.name);
            if !r.passed {
                println!("     {}", r.detail);
            }
        }
        println!("{} identities, {} failed (d = {dim})", report.identities.len(), failed);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(CHECK_FAILED)
    }
}

fn print_table(t: &TableReport) {
    print!("{}", t.to_text());
    println!("mismatches: {}, uncovered triples: {}", t.mismatches(), t.uncovered.len());
}

fn table_command(dim: usize, gamma: Rat, check: bool, json: bool) -> ExitCode {
    match emit_table(dim, gamma) {
        Ok(t) => {
            if json {
                print_json(&t);
            } else {
                print_table(&t);
            }
            if check && (t.mismatches() > 0 || !t.uncovered.is_empty()) {
                ExitCode::from(CHECK_FAILED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(&e, ledger_code(&e)),
    }
}

fn print_closure(r: &ClosureReport) {
    println!("{}", r.scheme);
    println!("{:<3} {:<14} {:<10} {:<22} {:<22} {:<6}", "k", "assumed", "triple", "integrand", "growth", "ok");
    for l in &r.levels {
        println!(
            "{:<3} {:<14} {:<10} {:<22} {:<22} {:<6}",
            l.k,
            l.assumed.to_string(),
            format!("{:?}", l.dominant_triple),
            l.integrand.to_string(),
            l.growth.to_string(),
            l.closes
        );
    }
}

fn print_quasilinear(r: &QuasilinearReport) {
    println!("quasilinear scheme, γ = {}, inventory v{}", r.gamma, r.inventory_version);
    println!("{:<4} {:<14} {:<22} {:<22} {:<6}", "lvl", "assumed", "growth", "closing class", "ok");
    for l in &r.levels {
        println!(
            "{:<4} {:<14} {:<22} {:<22} {:<6}",
            l.label,
            l.assumed.to_string(),
            l.growth.to_string(),
            l.closing_class.to_string(),
            l.closes
        );
    }
}

#[derive(Serialize)]
struct LedgerOutput {
    table: Option<TableReport>,
    closure: Option<ClosureReport>,
    quasilinear: Option<QuasilinearReport>,
    verdict: Option<&'static str>,
}

fn cmd_ledger(a: LedgerArgs) -> ExitCode {
    let quasi = a.scheme.trim() == "quasilinear";
    let gamma = match a.gamma.as_deref().map(parse_rat).unwrap_or(Ok(if quasi { Rat::new(1, 5) } else { Rat::new(1, 4) })) {
        Ok(g) => g,
        Err(e) => return fail(e, USAGE),
    };
    let (want_close, want_table) = if a.close || a.emit_table { (a.close, a.emit_table) } else { (true, !quasi) };
    let run = || -> Result<LedgerOutput, LedgerError> {
        let mut out = LedgerOutput { table: None, closure: None, quasilinear: None, verdict: None };
        let scheme = BootstrapScheme::parse(&a.scheme, a.dim, gamma)?;
        if want_table {
            out.table = Some(emit_table(a.dim, gamma)?);
        }
        if want_close {
            let closes = if quasi {
                let inv = match &a.inventory {
                    Some(p) => TermInventory::parse(
                        &std::fs::read_to_string(p).map_err(|e| LedgerError::InventoryFormat(format!("{}: {e}", p.display())))?,
                    )?,
                    None => TermInventory::builtin(),
                };
                let r = quasilinear_close(&scheme, &inv)?;
                let c = r.closes;
                out.quasilinear = Some(r);
                c
            } else {
                let r = close_bootstrap(&scheme)?;
                let c = r.closes;
                out.closure = Some(r);
                c
            };
            out.verdict = Some(if closes { "closes" } else { "does not close" });
        }
        Ok(out)
    };
    let out = match run() {
        Ok(o) => o,
        Err(e) => return fail(&e, ledger_code(&e)),
    };
    if a.json {
        print_json(&out);
    } else {
        if let Some(t) = &out.table {
            print_table(t);
        }
        if let Some(r) = &out.closure {
            print_closure(r);
        }
        if let Some(r) = &out.quasilinear {
            print_quasilinear(r);
        }
        if let Some(v) = out.verdict {
            println!("{v}");
        }
    }
    let table_bad = out.table.as_ref().is_some_and(|t| t.mismatches() > 0 || !t.uncovered.is_empty());
    if a.check && (table_bad || out.verdict == Some("does not close")) {
        ExitCode::from(CHECK_FAILED)
    } else {
        ExitCode::SUCCESS
    }
}

fn print_fits(r: &FitReport) {
    println!("window [{}, {}], γ = {}", r.window.0, r.window.1, r.gamma);
    for l in &r.levels {
        let flag = if l.fit.log_flag { format!(" (log fit p={:.3}, q={:.3})", l.fit.log_fit.0, l.fit.log_fit.1) } else { String::new() };
        println!(
            "{} {:<3} p = {:>8.4} bound {:.3} residual {:.2e}{}",
            if l.pass { "PASS" } else { "FAIL" },
            l.level,
            l.fit.p,
            l.bound,
            l.fit.residual,
            flag
        );
    }
    for (level, why) in &r.skipped {
        println!("SKIP {level}: {why}");
    }
}

fn cmd_fit(dir: &Path, window: Option<(f64, f64)>, gamma: Option<f64>, json: bool) -> ExitCode {
    match fit_rates(dir, window, gamma) {
        Ok(r) => {
            if json {
                print_json(&r);
            } else {
                print_fits(&r);
            }
            if r.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(CHECK_FAILED)
            }
        }
        Err(e) => fail(&e, e.exit_code() as u8),
    }
}

fn cmd_inequalities(fields: usize, taus: &[f64], n: usize, json: bool) -> ExitCode {
    if taus.iter().any(|&t| !(t > 0.0)) || n < 9 {
        return fail("taus must be positive and n at least 9", USAGE);
    }
    let r = match inequality_suite(fields, taus, n) {
        Ok(r) => r,
        Err(e) => return fail(e, 4),
    };
    let stress_ok = r.stress_worst <= 1e-10;
    let hardy_ok = r.hardy.iter().all(|&(_, w)| w <= r.hardy_constant * 1.05);
    let volume_ok = r.volumes.iter().all(|v| v.relative <= 1e-8);
    if json {
        print_json(&r);
    } else {
        let tag = |ok: bool| if ok { "PASS" } else { "FAIL" };
        println!("{} stress identity: worst relative mismatch {:.2e} over {} fields", tag(stress_ok), r.stress_worst, r.stress_fields);
        for &(tau, w) in &r.hardy {
            println!("{} Hardy tau = {tau}: worst ratio {w:.4} (constant {})", tag(w <= r.hardy_constant * 1.05), r.hardy_constant);
        }
        for v in &r.volumes {
            println!(
                "{} volume tau = {}, |ybar| <= {}: weight {:.12} induced {:.12} rel {:.1e}",
                tag(v.relative <= 1e-8),
                v.tau,
                v.radius,
                v.weighted,
                v.induced,
                v.relative
            );
        }
    }
    if stress_ok && hardy_ok && volume_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(CHECK_FAILED)
    }
}
