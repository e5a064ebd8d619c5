//! Integrands of the semilinear a-priori estimate and the closure check.

use super::bound::{int, integrate_bound, ExponentBound, GammaAffine};
use super::scheme::BootstrapScheme;
use crate::error::LedgerError;
use serde::Serialize;
use std::cmp::Ordering;

/// `s^{ℓ₀−d} 𝔈_k 𝔈_{ℓ₁+⌊d/2⌋+1} 𝔈_{ℓ₂}` under the assumed classes.
pub fn semilinear_weight(
    scheme: &BootstrapScheme,
    k: usize,
    l0: usize,
    l1: usize,
    l2: usize,
) -> Result<ExponentBound, LedgerError> {
    if l0 + l1 + l2 != k || k > scheme.k_max {
        return Err(LedgerError::InvalidTriple(format!("({l0},{l1},{l2}) at k={k}, k_max={}", scheme.k_max)));
    }
    if l1 > l2 {
        return Err(LedgerError::InvalidTriple(format!("l1={l1} > l2={l2}")));
    }
    let middle = scheme.middle_index(l1);
    if middle > scheme.k_max {
        return Err(LedgerError::ClosureViolation { middle, k_max: scheme.k_max });
    }
    let base = ExponentBound::rate(GammaAffine::int(l0 as i64 - scheme.dim as i64), 0);
    Ok(base.mul(&scheme.e[k]).mul(&scheme.e[middle]).mul(&scheme.e[l2]))
}

/// All `(ℓ₀, ℓ₁, ℓ₂)` with sum `k`, `ℓ₁ ≤ ℓ₂` and middle index within the scheme.
pub fn admissible_triples(scheme: &BootstrapScheme, k: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for l1 in 0..=k {
        for l2 in l1..=k - l1 {
            let l0 = k - l1 - l2;
            if scheme.middle_index(l1) <= scheme.k_max {
                out.push((l0, l1, l2));
            }
        }
    }
    out
}

/// Whether some triple of total order `k` needs an energy level above `k_max`.
pub fn has_closure_violation(scheme: &BootstrapScheme, k: usize) -> bool {
    (0..=k).any(|l1| 2 * l1 <= k && scheme.middle_index(l1) > scheme.k_max)
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub k: usize,
    pub assumed: ExponentBound,
    pub dominant_triple: (usize, usize, usize),
    pub integrand: ExponentBound,
    /// Growth of `𝔈_k(τ)² − 𝔈_k(2)²`.
    pub growth: ExponentBound,
    /// Square root of the growth: the improved class of `𝔈_k`.
    pub updated: ExponentBound,
    pub closes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub dim: usize,
    pub gamma: String,
    pub scheme: String,
    pub levels: Vec<LevelReport>,
    pub closes: bool,
}

/// Integrates every admissible integrand and compares the growth of each level with
/// the square of its assumed class.
pub fn close_bootstrap(scheme: &BootstrapScheme) -> Result<ClosureReport, LedgerError> {
    let g = scheme.gamma;
    let mut levels = Vec::with_capacity(scheme.k_max + 1);
    for k in 0..=scheme.k_max {
        if has_closure_violation(scheme, k) {
            let l1 = (0..=k).find(|&l1| 2 * l1 <= k && scheme.middle_index(l1) > scheme.k_max).unwrap_or(0);
            return Err(LedgerError::ClosureViolation { middle: scheme.middle_index(l1), k_max: scheme.k_max });
        }
        let mut best: Option<((usize, usize, usize), ExponentBound, ExponentBound)> = None;
        for (l0, l1, l2) in admissible_triples(scheme, k) {
            let w = semilinear_weight(scheme, k, l0, l1, l2)?;
            let grown = integrate_bound(&w, g);
            let better = match &best {
                None => true,
                Some((_, bw, bg)) => match grown.cmp_growth(bg, g) {
                    Ordering::Greater => true,
                    Ordering::Equal => w.cmp_growth(bw, g) == Ordering::Greater,
                    Ordering::Less => false,
                },
            };
            if better {
                best = Some(((l0, l1, l2), w, grown));
            }
        }
        let (triple, integrand, growth) = best.expect("k = 0 always admits (0,0,0)");
        let assumed = scheme.e[k];
        let closes = growth.cmp_growth(&assumed.pow(2), g) != Ordering::Greater && growth.delta_pow > int(2);
        levels.push(LevelReport { k, assumed, dominant_triple: triple, integrand, growth, updated: growth.sqrt(), closes });
    }
    let closes = levels.iter().all(|l| l.closes);
    Ok(ClosureReport { dim: scheme.dim, gamma: g.to_string(), scheme: scheme.describe(), levels, closes })
}

#[cfg(test)]
mod tests {
    use super::super::bound::rat;
    use super::*;

    fn d3() -> BootstrapScheme {
        BootstrapScheme::semilinear(3, rat(1, 4)).unwrap()
    }

    #[test]
    fn d3_table_examples() {
        let s = d3();
        let g = GammaAffine::ints;
        assert_eq!(semilinear_weight(&s, 1, 1, 0, 0).unwrap().tau_pow, g(-2, 1));
        let w = semilinear_weight(&s, 2, 2, 0, 0).unwrap();
        assert_eq!(w.tau_pow, g(-1, 2));
        assert!(!w.is_integrable(s.gamma));
        let w = semilinear_weight(&s, 3, 3, 0, 0).unwrap();
        assert_eq!(w.tau_pow, g(1, 2));
        assert_eq!(w.delta_pow, int(3));
    }

    #[test]
    fn preconditions() {
        let s = d3();
        assert!(matches!(semilinear_weight(&s, 2, 0, 2, 0), Err(LedgerError::InvalidTriple(_))));
        assert!(matches!(semilinear_weight(&s, 3, 1, 1, 0), Err(LedgerError::InvalidTriple(_))));
        assert!(semilinear_weight(&s, 2, 0, 1, 1).is_ok());
        let short = BootstrapScheme::parse("0,0,γ", 3, rat(1, 4)).unwrap();
        assert!(matches!(
            semilinear_weight(&short, 2, 0, 1, 1),
            Err(LedgerError::ClosureViolation { middle: 3, k_max: 2 })
        ));
        assert!(matches!(close_bootstrap(&short), Err(LedgerError::ClosureViolation { .. })));
    }

    #[test]
    fn d3_closes_with_standard_rates() {
        let r = close_bootstrap(&d3()).unwrap();
        assert!(r.closes);
        let up: Vec<_> = r.levels.iter().map(|l| l.updated.tau_pow).collect();
        assert_eq!(up, vec![GammaAffine::zero(), GammaAffine::zero(), GammaAffine::ints(0, 1), GammaAffine::ints(1, 1)]);
    }

    #[test]
    fn d3_without_gamma_loss_fails_at_level_two() {
        let s = d3().with_level(2, GammaAffine::zero(), 0);
        let r = close_bootstrap(&s).unwrap();
        assert!(!r.closes);
        assert!(!r.levels[2].closes);
        assert_eq!(r.levels[2].growth.log_pow, 1);
    }
}
