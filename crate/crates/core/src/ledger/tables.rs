//! Weight tables: admissible-triple patterns with their integrand bounds, computed from
//! the scheme and compared against the transcribed tables in `data/golden`.

use super::bound::{rat, ExponentBound, GammaAffine, Rat};
use super::expr::{Env, LinExpr};
use super::scheme::BootstrapScheme;
use super::semilinear::{admissible_triples, semilinear_weight};
use crate::error::LedgerError;
use num_traits::Zero;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeSet;

const GOLDEN_D3: &str = include_str!("../../data/golden/table_d3.txt");
const GOLDEN_D4: &str = include_str!("../../data/golden/table_d4.txt");
const GOLDEN_ODD: &str = include_str!("../../data/golden/table_odd.txt");
const GOLDEN_EVEN: &str = include_str!("../../data/golden/table_even.txt");

/// Transcribed table for dimension `d`.
pub fn golden_source(d: usize) -> Result<&'static str, LedgerError> {
    match d {
        3 => Ok(GOLDEN_D3),
        4 => Ok(GOLDEN_D4),
        d if d >= 5 && d % 2 == 1 => Ok(GOLDEN_ODD),
        d if d >= 6 => Ok(GOLDEN_EVEN),
        _ => Err(LedgerError::UnsupportedDimension(d)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Pattern {
    Any,
    Le(LinExpr),
    Lt(LinExpr),
    OneOf(Vec<LinExpr>),
}

impl Pattern {
    fn parse(s: &str) -> Result<Self, LedgerError> {
        let s = s.trim();
        if s == "---" {
            Ok(Pattern::Any)
        } else if let Some(r) = s.strip_prefix("<=") {
            Ok(Pattern::Le(LinExpr::parse(r)?))
        } else if let Some(r) = s.strip_prefix('<') {
            Ok(Pattern::Lt(LinExpr::parse(r)?))
        } else {
            Ok(Pattern::OneOf(s.split(',').map(LinExpr::parse).collect::<Result<_, _>>()?))
        }
    }

    pub fn matches(&self, v: usize, env: &Env) -> bool {
        let v = v as i64;
        match self {
            Pattern::Any => true,
            Pattern::Le(e) => v <= e.eval_int(env),
            Pattern::Lt(e) => v < e.eval_int(env),
            Pattern::OneOf(es) => es.iter().any(|e| e.eval_int(env) == v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    L0,
    L1,
    L2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
}

/// Constraint such as `l2<=m+1` attached to a row's comment column.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub var: Var,
    pub rel: Rel,
    pub rhs: LinExpr,
    pub text: String,
}

impl Constraint {
    fn parse(s: &str) -> Result<Self, LedgerError> {
        let s = s.trim();
        let (lhs, rel, rhs) = if let Some((a, b)) = s.split_once("<=") {
            (a, Rel::Le, b)
        } else if let Some((a, b)) = s.split_once('=') {
            (a, Rel::Eq, b)
        } else {
            return Err(LedgerError::GoldenFormat { line: 0, msg: format!("constraint `{s}`") });
        };
        let var = match lhs.trim() {
            "l0" => Var::L0,
            "l1" => Var::L1,
            "l2" => Var::L2,
            other => return Err(LedgerError::GoldenFormat { line: 0, msg: format!("variable `{other}`") }),
        };
        Ok(Self { var, rel, rhs: LinExpr::parse(rhs)?, text: s.to_string() })
    }

    fn holds(&self, t: (usize, usize, usize), env: &Env) -> bool {
        let v = match self.var {
            Var::L0 => t.0,
            Var::L1 => t.1,
            Var::L2 => t.2,
        } as i64;
        let r = self.rhs.eval_int(env);
        match self.rel {
            Rel::Le => v <= r,
            Rel::Eq => v == r,
        }
    }
}

/// Bound written as `s^(p) ln^q`, `p` linear in `d`, `m`, `γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundExpr {
    pub tau_pow: LinExpr,
    pub log_pow: u32,
}

impl BoundExpr {
    fn parse(s: &str) -> Result<Self, LedgerError> {
        let bad = || LedgerError::GoldenFormat { line: 0, msg: format!("bound `{s}`") };
        let mut tau_pow = LinExpr::constant(0);
        let mut log_pow = 0;
        for tok in s.split_whitespace() {
            if let Some(inner) = tok.strip_prefix("s^(").and_then(|r| r.strip_suffix(')')) {
                tau_pow = LinExpr::parse(inner)?;
            } else if tok == "ln" {
                log_pow = 1;
            } else if let Some(q) = tok.strip_prefix("ln^") {
                log_pow = q.parse().map_err(|_| bad())?;
            } else if tok != "1" {
                return Err(bad());
            }
        }
        Ok(Self { tau_pow, log_pow })
    }

    pub fn at(&self, env: &Env) -> ExponentBound {
        let (c, g) = self.tau_pow.eval(env);
        ExponentBound::new(rat(3, 1), GammaAffine::ints(c, g), self.log_pow)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoldenRow {
    pub line: usize,
    pub k: Pattern,
    pub l0: Pattern,
    pub l1: Pattern,
    pub l2: Pattern,
    pub bound: BoundExpr,
    pub shaded: bool,
    pub constraints: Vec<Constraint>,
    /// Original column text, for display.
    pub columns: [String; 4],
    pub bound_text: String,
}

pub fn parse_golden(src: &str) -> Result<Vec<GoldenRow>, LedgerError> {
    let mut rows = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let at = |e: LedgerError| match e {
            LedgerError::GoldenFormat { msg, .. } => LedgerError::GoldenFormat { line, msg },
            other => other,
        };
        let cols: Vec<&str> = text.split('|').map(str::trim).collect();
        if cols.len() != 7 {
            return Err(LedgerError::GoldenFormat { line, msg: format!("expected 7 columns, found {}", cols.len()) });
        }
        let shaded = match cols[5] {
            "yes" => true,
            "no" => false,
            other => return Err(LedgerError::GoldenFormat { line, msg: format!("shading `{other}`") }),
        };
        let constraints = if cols[6].is_empty() {
            Vec::new()
        } else {
            cols[6].split(';').map(Constraint::parse).collect::<Result<_, _>>().map_err(at)?
        };
        rows.push(GoldenRow {
            line,
            k: Pattern::parse(cols[0]).map_err(at)?,
            l0: Pattern::parse(cols[1]).map_err(at)?,
            l1: Pattern::parse(cols[2]).map_err(at)?,
            l2: Pattern::parse(cols[3]).map_err(at)?,
            bound: BoundExpr::parse(cols[4]).map_err(at)?,
            shaded,
            constraints,
            columns: [cols[0].into(), cols[1].into(), cols[2].into(), cols[3].into()],
            bound_text: cols[4].into(),
        });
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// The listed bound is attained by some matching triple.
    Exact,
    /// Every matching triple stays below the listed bound, which is never attained.
    Loose,
    /// Some matching triple exceeds the listed bound.
    Violated,
    /// No admissible triple matches the row.
    Empty,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub k: String,
    pub l0: String,
    pub l1: String,
    pub l2: String,
    pub listed: String,
    pub computed: Option<ExponentBound>,
    pub attained_at: Option<(usize, usize, usize, usize)>,
    pub integrable: bool,
    pub shaded: bool,
    pub relation: Relation,
    pub shading_matches: bool,
    pub pruned_by_comment: usize,
    pub comment: String,
}

impl TableRow {
    pub fn is_mismatch(&self) -> bool {
        self.relation != Relation::Exact || !self.shading_matches
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub dim: usize,
    pub gamma: String,
    pub rows: Vec<TableRow>,
    pub uncovered: Vec<(usize, usize, usize, usize)>,
}

impl TableReport {
    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| r.is_mismatch()).count()
    }

    pub fn comment_prunes(&self) -> usize {
        self.rows.iter().map(|r| r.pruned_by_comment).sum()
    }

    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut out = format!("d = {}, γ = {}\n", self.dim, self.gamma);
        out.push_str(&format!(
            "{:<8} {:<10} {:<8} {:<10} {:<16} {:<16} {:<6} {:<9}\n",
            "k", "l0", "l1", "l2", "listed", "computed", "shade", "relation"
        ));
        for r in &self.rows {
            let comp = r.computed.map(|b| b.rate_string()).unwrap_or_else(|| "-".into());
            let shade = match (r.shaded, r.shading_matches) {
                (true, true) => "yes",
                (false, true) => "no",
                (true, false) => "yes!",
                (false, false) => "no!",
            };
            out.push_str(&format!(
                "{:<8} {:<10} {:<8} {:<10} {:<16} {:<16} {:<6} {:<9}\n",
                r.k,
                r.l0,
                r.l1,
                r.l2,
                r.listed,
                comp,
                shade,
                format!("{:?}", r.relation).to_lowercase()
            ));
        }
        if !self.uncovered.is_empty() {
            out.push_str(&format!("uncovered (k,l0,l1,l2): {:?}\n", self.uncovered));
        }
        out
    }
}

fn all_triples(scheme: &BootstrapScheme) -> Vec<(usize, usize, usize, usize)> {
    (0..=scheme.k_max)
        .flat_map(|k| admissible_triples(scheme, k).into_iter().map(move |(a, b, c)| (k, a, b, c)))
        .collect()
}

/// Pointwise `a ≤ b` for every `γ` in `(0, γ_max)`, with logs breaking exact ties.
fn le_for_all_gamma(a: &ExponentBound, b: &ExponentBound, gamma_max: Rat) -> bool {
    let diff = b.tau_pow.sub(&a.tau_pow);
    if diff.c.is_zero() && diff.g.is_zero() {
        return a.log_pow <= b.log_pow;
    }
    diff.at(Rat::zero()) >= Rat::zero() && diff.at(gamma_max) >= Rat::zero()
}

/// Computes every row of the table for dimension `d` and compares it with the transcription.
pub fn emit_table(d: usize, gamma: Rat) -> Result<TableReport, LedgerError> {
    let scheme = BootstrapScheme::semilinear(d, gamma)?;
    let golden = parse_golden(golden_source(d)?)?;
    let gamma_max = super::scheme::semilinear_gamma_bound();
    let triples = all_triples(&scheme);
    let m = (d / 2) as i64;
    let mut covered = BTreeSet::new();
    let mut rows = Vec::with_capacity(golden.len());
    for g in &golden {
        let mut matched = Vec::new();
        let mut pruned = 0;
        for &(k, l0, l1, l2) in &triples {
            let env = Env { d: d as i64, m, k: k as i64 };
            if !(g.k.matches(k, &env) && g.l0.matches(l0, &env) && g.l1.matches(l1, &env) && g.l2.matches(l2, &env)) {
                continue;
            }
            covered.insert((k, l0, l1, l2));
            if g.constraints.iter().all(|c| c.holds((l0, l1, l2), &env)) {
                matched.push((k, l0, l1, l2, semilinear_weight(&scheme, k, l0, l1, l2)?));
            } else {
                pruned += 1;
            }
        }
        let listed = g.bound.at(&Env { d: d as i64, m, k: 0 });
        let mut computed: Option<(ExponentBound, (usize, usize, usize, usize))> = None;
        for &(k, l0, l1, l2, w) in &matched {
            if computed.as_ref().map_or(true, |(b, _)| w.cmp_growth(b, gamma) == Ordering::Greater) {
                computed = Some((w, (k, l0, l1, l2)));
            }
        }
        let relation = if matched.is_empty() {
            Relation::Empty
        } else if matched.iter().any(|t| !le_for_all_gamma(&t.4, &listed, gamma_max)) {
            Relation::Violated
        } else if matched.iter().any(|t| t.4 == listed) {
            Relation::Exact
        } else {
            Relation::Loose
        };
        let integrable = matched.iter().all(|t| t.4.is_integrable(gamma));
        rows.push(TableRow {
            k: g.columns[0].clone(),
            l0: g.columns[1].clone(),
            l1: g.columns[2].clone(),
            l2: g.columns[3].clone(),
            listed: listed.rate_string(),
            computed: computed.map(|c| c.0),
            attained_at: computed.map(|c| c.1),
            integrable,
            shaded: g.shaded,
            relation,
            shading_matches: g.shaded != integrable,
            pruned_by_comment: pruned,
            comment: g.constraints.iter().map(|c| c.text.clone()).collect::<Vec<_>>().join("; "),
        });
    }
    let uncovered = triples.into_iter().filter(|t| !covered.contains(t)).collect();
    Ok(TableReport { dim: d, gamma: gamma.to_string(), rows, uncovered })
}
