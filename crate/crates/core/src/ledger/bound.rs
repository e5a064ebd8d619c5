//! Rate classes `δ^a s^p ln(s)^q` with `p` affine in the loss parameter `γ`.

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

pub type Rat = Rational64;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Exponent `c + g·γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct GammaAffine {
    pub c: Rat,
    pub g: Rat,
}

impl GammaAffine {
    pub fn new(c: Rat, g: Rat) -> Self {
        Self { c, g }
    }

    pub fn constant(c: Rat) -> Self {
        Self { c, g: Rat::zero() }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(int(c))
    }

    /// `c + g·γ` with integer coefficients.
    pub fn ints(c: i64, g: i64) -> Self {
        Self { c: int(c), g: int(g) }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn at(&self, gamma: Rat) -> Rat {
        self.c + self.g * gamma
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { c: self.c + o.c, g: self.g + o.g }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { c: self.c - o.c, g: self.g - o.g }
    }

    pub fn scale(&self, s: Rat) -> Self {
        Self { c: self.c * s, g: self.g * s }
    }

    pub fn shift(&self, n: Rat) -> Self {
        Self { c: self.c + n, g: self.g }
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GammaAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        if !self.g.is_zero() {
            if self.g == -Rat::one() {
                s.push('-');
            } else if self.g != Rat::one() {
                s.push_str(&fmt_rat(&self.g));
            }
            s.push('γ');
        }
        if !self.c.is_zero() || s.is_empty() {
            if !s.is_empty() && self.c.is_positive() {
                s.push('+');
            }
            s.push_str(&fmt_rat(&self.c));
        }
        f.write_str(&s)
    }
}

/// Rate class `δ^delta_pow · s^tau_pow · ln(s)^log_pow`; constants are not tracked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExponentBound {
    pub delta_pow: Rat,
    pub tau_pow: GammaAffine,
    pub log_pow: u32,
}

impl ExponentBound {
    pub fn new(delta_pow: Rat, tau_pow: GammaAffine, log_pow: u32) -> Self {
        Self { delta_pow, tau_pow, log_pow }
    }

    /// `s^p ln^q` with no smallness factor.
    pub fn rate(tau_pow: GammaAffine, log_pow: u32) -> Self {
        Self::new(Rat::zero(), tau_pow, log_pow)
    }

    /// `δ^a` uniformly in time.
    pub fn bounded(delta_pow: Rat) -> Self {
        Self::new(delta_pow, GammaAffine::zero(), 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            delta_pow: self.delta_pow + o.delta_pow,
            tau_pow: self.tau_pow.add(&o.tau_pow),
            log_pow: self.log_pow + o.log_pow,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let s = int(n as i64);
        Self {
            delta_pow: self.delta_pow * s,
            tau_pow: self.tau_pow.scale(s),
            log_pow: self.log_pow * n,
        }
    }

    /// Halves every exponent; an odd log power rounds up.
    pub fn sqrt(&self) -> Self {
        let h = rat(1, 2);
        Self {
            delta_pow: self.delta_pow * h,
            tau_pow: self.tau_pow.scale(h),
            log_pow: self.log_pow.div_ceil(2),
        }
    }

    /// `(tau_pow, log_pow)` at a concrete `γ`.
    pub fn key(&self, gamma: Rat) -> (Rat, u32) {
        (self.tau_pow.at(gamma), self.log_pow)
    }

    /// Lexicographic growth comparison in `(tau_pow, log_pow)`; `δ` powers are ignored.
    pub fn cmp_growth(&self, o: &Self, gamma: Rat) -> Ordering {
        self.key(gamma).cmp(&o.key(gamma))
    }

    /// Integrable on `[2, ∞)` iff `p < −1`.
    pub fn is_integrable(&self, gamma: Rat) -> bool {
        self.tau_pow.at(gamma) < -Rat::one()
    }

    pub fn is_bounded(&self, gamma: Rat) -> bool {
        let p = self.tau_pow.at(gamma);
        p < Rat::zero() || (p.is_zero() && self.log_pow == 0)
    }

    /// The `s`-part only, e.g. `s^(2γ-1) ln^2`.
    pub fn rate_string(&self) -> String {
        let mut s = String::new();
        if self.tau_pow != GammaAffine::zero() {
            s.push_str(&format!("s^({})", self.tau_pow));
        }
        if self.log_pow > 0 {
            if !s.is_empty() {
                s.push(' ');
            }
            if self.log_pow == 1 {
                s.push_str("ln");
            } else {
                s.push_str(&format!("ln^{}", self.log_pow));
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

impl fmt::Display for ExponentBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.delta_pow.is_zero() {
            f.write_str(&self.rate_string())
        } else {
            write!(f, "δ^{} {}", fmt_rat(&self.delta_pow), self.rate_string())
        }
    }
}

impl Serialize for ExponentBound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for GammaAffine {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Growth class of `∫_2^τ b(s) ds`.
///
/// `p < −1` gives a bounded class, `p = −1` adds one log, and `p > −1` raises the
/// power by one; in the last case a present log gains one more power, following the
/// estimate `∫ s^p ln s ≲ s^{p+1} ln²`.
pub fn integrate_bound(b: &ExponentBound, gamma: Rat) -> ExponentBound {
    let p = b.tau_pow.at(gamma);
    let minus_one = -Rat::one();
    match p.cmp(&minus_one) {
        Ordering::Less => ExponentBound::bounded(b.delta_pow),
        Ordering::Equal => ExponentBound::new(b.delta_pow, GammaAffine::zero(), b.log_pow + 1),
        Ordering::Greater => ExponentBound::new(
            b.delta_pow,
            b.tau_pow.shift(Rat::one()),
            b.log_pow + u32::from(b.log_pow > 0),
        ),
    }
}

/// Each further derivative costs at most one power of `τ`.
pub fn scheme_principle_apply(b: &ExponentBound, n_extra_derivatives: u32) -> ExponentBound {
    ExponentBound { tau_pow: b.tau_pow.shift(int(n_extra_derivatives as i64)), ..*b }
}

/// Largest class by growth at `γ`; ties keep the first.
pub fn max_growth<'a, I: IntoIterator<Item = &'a ExponentBound>>(it: I, gamma: Rat) -> Option<ExponentBound> {
    let mut best: Option<ExponentBound> = None;
    for b in it {
        match &best {
            Some(cur) if b.cmp_growth(cur, gamma) != Ordering::Greater => {}
            _ => best = Some(*b),
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> Rat {
        rat(1, 4)
    }

    #[test]
    fn display_forms() {
        assert_eq!(GammaAffine::ints(-1, 2).to_string(), "2γ-1");
        assert_eq!(GammaAffine::ints(-2, 1).to_string(), "γ-2");
        assert_eq!(GammaAffine::ints(1, 1).to_string(), "γ+1");
        assert_eq!(GammaAffine::ints(0, 3).to_string(), "3γ");
        assert_eq!(GammaAffine::new(rat(-3, 2), Rat::zero()).to_string(), "-3/2");
        assert_eq!(ExponentBound::rate(GammaAffine::int(-1), 2).to_string(), "s^(-1) ln^2");
        assert_eq!(ExponentBound::bounded(int(3)).to_string(), "δ^3 1");
    }

    #[test]
    fn integration_rules() {
        let b = |c, l| ExponentBound::rate(GammaAffine::int(c), l);
        assert_eq!(integrate_bound(&b(-2, 0), g()), b(0, 0));
        assert_eq!(integrate_bound(&b(-1, 1), g()), b(0, 2));
        assert_eq!(integrate_bound(&b(-1, 0), g()), b(0, 1));
        let p = ExponentBound::rate(GammaAffine::ints(1, 2), 0);
        assert_eq!(integrate_bound(&p, g()), ExponentBound::rate(GammaAffine::ints(2, 2), 0));
        assert_eq!(integrate_bound(&b(3, 1), g()), b(4, 2));
    }

    #[test]
    fn scheme_principle_shifts_power() {
        let ho1 = ExponentBound::new(int(3), GammaAffine::ints(-4, 3), 0);
        let out = scheme_principle_apply(&ho1, 3);
        assert_eq!(out, ExponentBound::new(int(3), GammaAffine::ints(-1, 3), 0));
        assert_eq!(scheme_principle_apply(&ho1, 0), ho1);
    }

    #[test]
    fn sqrt_halves() {
        let b = ExponentBound::new(int(3), GammaAffine::ints(4, 2), 2);
        assert_eq!(b.sqrt(), ExponentBound::new(rat(3, 2), GammaAffine::ints(2, 1), 1));
    }
}
