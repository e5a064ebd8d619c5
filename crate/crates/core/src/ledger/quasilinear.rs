//! Term inventory for the quasilinear equation and its closing integrals.

use super::bound::{int, integrate_bound, max_growth, scheme_principle_apply, ExponentBound, GammaAffine, Rat};
use super::scheme::{BootstrapScheme, SchemeKind};
use crate::error::LedgerError;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::str::FromStr;

pub const INVENTORY_V1: &str = include_str!("../../data/quasilinear_terms_v1.toml");

#[derive(Debug, Deserialize)]
struct RawAffine {
    c: String,
    g: String,
}

#[derive(Debug, Deserialize)]
struct RawTerm {
    name: String,
    group: String,
    source: String,
    factors: Vec<String>,
    delta_pow: String,
    tau_pow: RawAffine,
    #[serde(default = "one")]
    energy_power: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Deserialize)]
struct RawInventory {
    version: u32,
    term: Vec<RawTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InventoryTerm {
    pub name: String,
    pub group: String,
    pub source: String,
    pub factors: Vec<String>,
    pub rate: ExponentBound,
    pub energy_power: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermInventory {
    pub version: u32,
    pub terms: Vec<InventoryTerm>,
}

fn parse_rat(s: &str, what: &str) -> Result<Rat, LedgerError> {
    Rat::from_str(s.trim()).map_err(|_| LedgerError::InventoryFormat(format!("{what}: `{s}` is not a rational")))
}

impl TermInventory {
    pub fn parse(src: &str) -> Result<Self, LedgerError> {
        let raw: RawInventory = toml::from_str(src).map_err(|e| LedgerError::InventoryFormat(e.to_string()))?;
        let mut terms = Vec::with_capacity(raw.term.len());
        for t in raw.term {
            if t.source.trim().is_empty() {
                return Err(LedgerError::InventoryFormat(format!("term `{}` has no source", t.name)));
            }
            let rate = ExponentBound::new(
                parse_rat(&t.delta_pow, &t.name)?,
                GammaAffine::new(parse_rat(&t.tau_pow.c, &t.name)?, parse_rat(&t.tau_pow.g, &t.name)?),
                0,
            );
            terms.push(InventoryTerm {
                name: t.name,
                group: t.group,
                source: t.source,
                factors: t.factors,
                rate,
                energy_power: t.energy_power,
            });
        }
        Ok(Self { version: raw.version, terms })
    }

    pub fn builtin() -> Self {
        Self::parse(INVENTORY_V1).expect("bundled inventory parses")
    }

    pub fn group(&self, name: &str) -> Result<Vec<&InventoryTerm>, LedgerError> {
        let g: Vec<_> = self.terms.iter().filter(|t| t.group == name).collect();
        if g.is_empty() {
            return Err(LedgerError::MissingInventory(name.to_string()));
        }
        Ok(g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    E,
    F,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermContribution {
    pub term: String,
    pub group: String,
    pub extra_derivatives: u32,
    pub rate: ExponentBound,
    pub integrand: ExponentBound,
    pub integrated: ExponentBound,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasilinearLevel {
    pub family: Family,
    pub k: usize,
    pub label: String,
    pub assumed: ExponentBound,
    pub contributions: Vec<TermContribution>,
    /// Largest integrand of each group, in order of first appearance.
    pub group_integrands: Vec<(String, ExponentBound)>,
    pub growth: ExponentBound,
    /// Square of the assumed class: what the growth must not exceed.
    pub closing_class: ExponentBound,
    pub updated: ExponentBound,
    pub closes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasilinearReport {
    pub gamma: String,
    pub inventory_version: u32,
    pub levels: Vec<QuasilinearLevel>,
    pub closes: bool,
}

/// Groups feeding each level, with the number of extra derivatives taken on them.
fn recipe(family: Family, k: usize) -> Vec<(&'static str, u32)> {
    let sp = k.saturating_sub(1) as u32;
    match (family, k) {
        (Family::E, 0) => vec![("DEF", 0), ("QN0", 0)],
        (Family::F, 0) => vec![("DEF", 0), ("QN1", 0), ("HO1", 0)],
        (Family::E, 1) => vec![("DEF", 0), ("QN0", 0), ("QN1", 0), ("QNi", 0), ("HOi", 0)],
        (Family::F, 1) => vec![("DEF", 0), ("QN1", 1), ("COMM", 0)],
        (Family::E, _) => vec![("DEF", 0), ("QNi", sp), ("HOi", sp)],
        (Family::F, _) => vec![("DEF", 0), ("QNi", sp), ("COMM", sp)],
    }
}

/// Energy inequality for each level of the quasilinear scheme: every inventory term,
/// shifted by the scheme principle where derivatives are distributed, times the assumed
/// energy, integrated in `τ` and compared with the squared assumption.
pub fn quasilinear_close(scheme: &BootstrapScheme, inv: &TermInventory) -> Result<QuasilinearReport, LedgerError> {
    if scheme.kind != SchemeKind::Quasilinear {
        return Err(LedgerError::InvalidTriple("quasilinear closure needs the quasilinear scheme".into()));
    }
    let g = scheme.gamma;
    let mut levels = Vec::new();
    for (family, classes) in [(Family::E, &scheme.e), (Family::F, &scheme.f)] {
        for (k, assumed) in classes.iter().enumerate() {
            let mut contributions = Vec::new();
            let mut group_integrands = Vec::new();
            for (group, shift) in recipe(family, k) {
                let mut group_max: Option<ExponentBound> = None;
                for t in inv.group(group)? {
                    let rate = scheme_principle_apply(&t.rate, shift);
                    let integrand = rate.mul(&assumed.pow(t.energy_power));
                    let integrated = integrate_bound(&integrand, g);
                    if group_max.map_or(true, |m| integrand.cmp_growth(&m, g) == Ordering::Greater) {
                        group_max = Some(integrand);
                    }
                    contributions.push(TermContribution {
                        term: t.name.clone(),
                        group: group.to_string(),
                        extra_derivatives: shift,
                        rate,
                        integrand,
                        integrated,
                    });
                }
                if let Some(m) = group_max {
                    group_integrands.push((group.to_string(), m));
                }
            }
            let growth = max_growth(contributions.iter().map(|c| &c.integrated), g).expect("recipes are non-empty");
            let closing_class = assumed.pow(2);
            let closes = contributions.iter().all(|c| {
                c.integrated.cmp_growth(&closing_class, g) != Ordering::Greater && c.integrated.delta_pow > int(2)
            });
            let label = format!("{}{}", if family == Family::E { "E" } else { "F" }, k);
            levels.push(QuasilinearLevel {
                family,
                k,
                label,
                assumed: *assumed,
                contributions,
                group_integrands,
                growth,
                closing_class,
                updated: growth.sqrt(),
                closes,
            });
        }
    }
    let closes = levels.iter().all(|l| l.closes);
    Ok(QuasilinearReport { gamma: g.to_string(), inventory_version: inv.version, levels, closes })
}

#[cfg(test)]
mod tests {
    use super::super::bound::rat;
    use super::*;

    #[test]
    fn inventory_loads_with_sources() {
        let inv = TermInventory::builtin();
        assert_eq!(inv.version, 1);
        for g in ["DEF", "QN0", "QN1", "QNi", "HO1", "HOi", "COMM"] {
            assert!(!inv.group(g).unwrap().is_empty());
        }
        assert_eq!(inv.group("COMM").unwrap().len(), 6);
        assert!(inv.terms.iter().all(|t| !t.source.is_empty() && !t.factors.is_empty()));
    }

    #[test]
    fn missing_group_is_reported() {
        let src = "version = 1\n[[term]]\nname = \"x\"\ngroup = \"DEF\"\nsource = \"s\"\nfactors = [\"a\"]\ndelta_pow = \"1\"\ntau_pow = { c = \"-3/2\", g = \"0\" }\nenergy_power = 2\n";
        let inv = TermInventory::parse(src).unwrap();
        let s = BootstrapScheme::quasilinear(rat(1, 5)).unwrap();
        assert!(matches!(quasilinear_close(&s, &inv), Err(LedgerError::MissingInventory(_))));
        assert!(TermInventory::parse("version = 1\n[[term]]\nname = 3").is_err());
    }
}
