//! Bootstrap assumptions: assumed growth class of each energy level.

use super::bound::{int, rat, ExponentBound, GammaAffine, Rat};
use super::expr::{Env, LinExpr};
use crate::error::LedgerError;
use num_traits::Zero;
use serde::Serialize;
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Semilinear,
    Quasilinear,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BootstrapScheme {
    pub kind: SchemeKind,
    pub dim: usize,
    pub k_max: usize,
    /// Assumed class of `𝔈_k`, `k = 0..=k_max`, each with one power of `δ`.
    pub e: Vec<ExponentBound>,
    /// Assumed class of `𝔉_k` (quasilinear scheme only).
    pub f: Vec<ExponentBound>,
    pub gamma: Rat,
}

pub fn semilinear_gamma_bound() -> Rat {
    rat(1, 3)
}

pub fn quasilinear_gamma_bound() -> Rat {
    rat(1, 4)
}

fn delta_rate(c: i64, g: i64, log: u32) -> ExponentBound {
    ExponentBound::new(int(1), GammaAffine::ints(c, g), log)
}

fn check_gamma(gamma: Rat, bound: Rat) -> Result<(), LedgerError> {
    if gamma <= Rat::zero() || gamma >= bound {
        return Err(LedgerError::InvalidGamma { gamma: gamma.to_string(), bound: bound.to_string() });
    }
    Ok(())
}

impl BootstrapScheme {
    /// The semilinear scheme used for dimension `d`.
    pub fn semilinear(d: usize, gamma: Rat) -> Result<Self, LedgerError> {
        check_gamma(gamma, semilinear_gamma_bound())?;
        let di = d as i64;
        let (k_max, e): (usize, Vec<ExponentBound>) = match d {
            3 => (3, vec![delta_rate(0, 0, 0), delta_rate(0, 0, 0), delta_rate(0, 1, 0), delta_rate(1, 1, 0)]),
            4 => (5, (0..=5).map(|k| if k <= 2 { delta_rate(0, 0, 0) } else { delta_rate(k - 3, 1, 0) }).collect()),
            d if d >= 5 => {
                let k_max = if d % 2 == 1 { d } else { d + 1 };
                let e = (0..=k_max as i64)
                    .map(|k| if k <= di - 2 { delta_rate(0, 0, 0) } else { delta_rate(k - (di - 1), 0, 1) })
                    .collect();
                (k_max, e)
            }
            _ => return Err(LedgerError::UnsupportedDimension(d)),
        };
        Ok(Self { kind: SchemeKind::Semilinear, dim: d, k_max, e, f: Vec::new(), gamma })
    }

    /// Semilinear scheme with caller-supplied `(τ exponent, log power)` per level.
    pub fn custom(d: usize, exps: Vec<(GammaAffine, u32)>, gamma: Rat) -> Result<Self, LedgerError> {
        check_gamma(gamma, semilinear_gamma_bound())?;
        if d < 3 {
            return Err(LedgerError::UnsupportedDimension(d));
        }
        if exps.is_empty() {
            return Err(LedgerError::InvalidTriple("empty exponent list".into()));
        }
        let e: Vec<_> = exps.into_iter().map(|(p, l)| ExponentBound::new(int(1), p, l)).collect();
        let s = Self { kind: SchemeKind::Semilinear, dim: d, k_max: e.len() - 1, e, f: Vec::new(), gamma };
        s.check_monotone()?;
        Ok(s)
    }

    /// The quasilinear assumptions in three space dimensions: bounded for `k ≤ 1`, then
    /// `δτ^{γ+k−2}`; `𝔈` up to order 4 and `𝔉` up to order 3.
    pub fn quasilinear(gamma: Rat) -> Result<Self, LedgerError> {
        check_gamma(gamma, quasilinear_gamma_bound())?;
        let cls = |k: i64| if k <= 1 { delta_rate(0, 0, 0) } else { delta_rate(k - 2, 1, 0) };
        Ok(Self {
            kind: SchemeKind::Quasilinear,
            dim: 3,
            k_max: 4,
            e: (0..=4).map(cls).collect(),
            f: (0..=3).map(cls).collect(),
            gamma,
        })
    }

    /// Parses `semilinear`, `quasilinear`, or a comma list of level exponents such as
    /// `0,0,γ,1+γ` (a trailing ` ln` or ` ln^q` adds log powers).
    pub fn parse(spec: &str, d: usize, gamma: Rat) -> Result<Self, LedgerError> {
        match spec.trim() {
            "semilinear" => Self::semilinear(d, gamma),
            "quasilinear" => Self::quasilinear(gamma),
            list => {
                let env = Env { d: d as i64, m: (d / 2) as i64, k: 0 };
                let mut exps = Vec::new();
                for item in list.split(',') {
                    let item = item.trim();
                    let (p, log) = match item.find("ln") {
                        Some(pos) => {
                            let rest = &item[pos + 2..];
                            let q = if let Some(q) = rest.strip_prefix('^') {
                                q.parse::<u32>().map_err(|_| LedgerError::InvalidTriple(format!("log power in `{item}`")))?
                            } else {
                                1
                            };
                            (item[..pos].trim(), q)
                        }
                        None => (item, 0),
                    };
                    let p = if p.is_empty() { "0" } else { p };
                    let (c, g) = LinExpr::parse(p)?.eval(&env);
                    exps.push((GammaAffine::ints(c, g), log));
                }
                Self::custom(d, exps, gamma)
            }
        }
    }

    pub fn with_level(mut self, k: usize, tau_pow: GammaAffine, log_pow: u32) -> Self {
        self.e[k] = ExponentBound::new(int(1), tau_pow, log_pow);
        self
    }

    /// Assumed `𝔈_k` classes must be non-decreasing in `k`.
    pub fn check_monotone(&self) -> Result<(), LedgerError> {
        for k in 1..self.e.len() {
            if self.e[k].cmp_growth(&self.e[k - 1], self.gamma) == Ordering::Less {
                return Err(LedgerError::InvalidTriple(format!("assumed class of level {k} decreases")));
            }
        }
        Ok(())
    }

    pub fn middle_index(&self, l1: usize) -> usize {
        l1 + self.dim / 2 + 1
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.e.iter().map(|b| b.rate_string()).collect();
        format!("{:?} d={} k_max={} γ={} E=[{}]", self.kind, self.dim, self.k_max, self.gamma, parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_schemes_are_monotone() {
        for d in 3..=10 {
            let s = BootstrapScheme::semilinear(d, rat(1, 4)).unwrap();
            s.check_monotone().unwrap();
            let expected = if d <= 4 || d % 2 == 0 { if d == 3 { 3 } else { d + 1 } } else { d };
            assert_eq!(s.k_max, expected, "d={d}");
        }
    }

    #[test]
    fn gamma_range_enforced() {
        assert!(BootstrapScheme::semilinear(3, rat(1, 3)).is_err());
        assert!(BootstrapScheme::semilinear(3, Rat::zero()).is_err());
        assert!(BootstrapScheme::quasilinear(rat(1, 4)).is_err());
        assert!(BootstrapScheme::quasilinear(rat(1, 5)).is_ok());
    }

    #[test]
    fn parse_list() {
        let s = BootstrapScheme::parse("0,0,γ,1+γ", 3, rat(1, 4)).unwrap();
        assert_eq!(s, BootstrapScheme::semilinear(3, rat(1, 4)).unwrap());
        let s6 = BootstrapScheme::parse("0,0,0,0,0,ln,1 ln,2 ln", 6, rat(1, 4)).unwrap();
        assert_eq!(s6, BootstrapScheme::semilinear(6, rat(1, 4)).unwrap());
        assert!(BootstrapScheme::parse("1,0", 3, rat(1, 4)).is_err());
    }
}
