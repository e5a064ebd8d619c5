//! Expansion of `L^alpha` applied to the background profile `F''(u)` as polynomials in
//! `u`, `s = u + ubar` and the transverse coordinates, times derivatives of `F''`.

use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

use super::weight::{q, Q};
use super::Letter;
use crate::geometry::PlaneWaveProfile;

/// `a + b sqrt(2)` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSqrt2 {
    pub a: Q,
    pub b: Q,
}

impl QSqrt2 {
    pub fn rational(a: Q) -> Self {
        QSqrt2 { a, b: Q::zero() }
    }
    pub fn zero() -> Self {
        Self::rational(Q::zero())
    }
    pub fn sqrt2() -> Self {
        QSqrt2 { a: Q::zero(), b: Q::one() }
    }
    pub fn inv_sqrt2() -> Self {
        QSqrt2 { a: Q::zero(), b: Q::new(1.into(), 2.into()) }
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    pub fn add(&self, o: &Self) -> Self {
        QSqrt2 { a: &self.a + &o.a, b: &self.b + &o.b }
    }
    pub fn mul(&self, o: &Self) -> Self {
        QSqrt2 {
            a: &self.a * &o.a + q(2) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
    pub fn scale(&self, c: &Q) -> Self {
        QSqrt2 { a: &self.a * c, b: &self.b * c }
    }
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap() + self.b.to_f64().unwrap() * std::f64::consts::SQRT_2
    }
}

/// Monomial `u^u s^s prod x_i^{x_i} F^{(2+n)}(u)`; `x[j]` is the power of `y^{j+2}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfileMonomial {
    pub u: u32,
    pub s: u32,
    pub x: Vec<u32>,
    pub n: u32,
}

#[derive(Clone, PartialEq, Eq)]
pub struct ProfileExpansion {
    dim: usize,
    terms: BTreeMap<ProfileMonomial, QSqrt2>,
}

impl ProfileExpansion {
    /// The bare profile `F''(u)`.
    pub fn base(dim: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(
            ProfileMonomial { u: 0, s: 0, x: vec![0; dim - 1], n: 0 },
            QSqrt2::rational(Q::one()),
        );
        ProfileExpansion { dim, terms }
    }

    pub fn terms(&self) -> &BTreeMap<ProfileMonomial, QSqrt2> {
        &self.terms
    }

    fn push(&mut self, m: ProfileMonomial, c: QSqrt2) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(QSqrt2::zero);
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Apply a boost `L^i` (the word is over boosts only).
    pub fn apply(&self, x: Letter) -> Self {
        let i = match x {
            Letter::L(i) => i,
            Letter::T => panic!("profile expansions are built from boost words"),
        };
        assert!(i >= 1 && i <= self.dim);
        let mut out = ProfileExpansion { dim: self.dim, terms: BTreeMap::new() };
        let r2 = QSqrt2::sqrt2();
        let ir2 = QSqrt2::inv_sqrt2();
        for (m, c) in &self.terms {
            if i == 1 {
                // L1 u = u, L1 s = 2u - s, L1 x = 0, L1 F(u) = u F'(u)
                if m.u > 0 {
                    out.push(m.clone(), c.scale(&q(m.u as i64)));
                }
                if m.s > 0 {
                    let mut a = m.clone();
                    a.s -= 1;
                    a.u += 1;
                    out.push(a, c.scale(&q(2 * m.s as i64)));
                    out.push(m.clone(), c.scale(&q(-(m.s as i64))));
                }
                let mut f = m.clone();
                f.u += 1;
                f.n += 1;
                out.push(f, c.clone());
            } else {
                let j = i - 2;
                // L^i u = x_i/sqrt2, L^i s = sqrt2 x_i, L^i x_i = s/sqrt2, L^i F(u) = (x_i/sqrt2) F'(u)
                if m.u > 0 {
                    let mut a = m.clone();
                    a.u -= 1;
                    a.x[j] += 1;
                    out.push(a, c.mul(&ir2).scale(&q(m.u as i64)));
                }
                if m.s > 0 {
                    let mut a = m.clone();
                    a.s -= 1;
                    a.x[j] += 1;
                    out.push(a, c.mul(&r2).scale(&q(m.s as i64)));
                }
                if m.x[j] > 0 {
                    let mut a = m.clone();
                    a.x[j] -= 1;
                    a.s += 1;
                    out.push(a, c.mul(&ir2).scale(&q(m.x[j] as i64)));
                }
                let mut f = m.clone();
                f.x[j] += 1;
                f.n += 1;
                out.push(f, c.mul(&ir2));
            }
        }
        out
    }

    /// Numeric value at `y`; `deriv(u, n)` must return `F^{(2+n)}(u)`.
    pub fn eval(&self, y: &[f64], deriv: impl Fn(f64, u32) -> f64) -> f64 {
        let u = (y[0] + y[1]) / std::f64::consts::SQRT_2;
        let s = std::f64::consts::SQRT_2 * y[0];
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64() * u.powi(m.u as i32) * s.powi(m.s as i32) * deriv(u, m.n);
            for (j, &p) in m.x.iter().enumerate() {
                t *= y[j + 2].powi(p as i32);
            }
            total += t;
        }
        total
    }
}

impl fmt::Debug for ProfileExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ProfileExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (c.a.is_zero(), c.b.is_zero()) {
                (false, true) => write!(f, "{}", c.a)?,
                (true, false) => write!(f, "{}*sqrt2", c.b)?,
                _ => write!(f, "({} + {}*sqrt2)", c.a, c.b)?,
            }
            if m.u > 0 {
                write!(f, "*u^{}", m.u)?;
            }
            if m.s > 0 {
                write!(f, "*(u+ubar)^{}", m.s)?;
            }
            for (j, &p) in m.x.iter().enumerate() {
                if p > 0 {
                    write!(f, "*y{}^{}", j + 2, p)?;
                }
            }
            write!(f, "*F^({})(u)", m.n + 2)?;
        }
        Ok(())
    }
}

/// Result of expanding `L^alpha F''`.
#[derive(Clone, Debug)]
pub struct ProfileBound {
    /// Guaranteed growth exponent of `|L^alpha F''|` in `(1 + ubar)`.
    pub exponent: Q,
    pub expansion: ProfileExpansion,
    pub support: (f64, f64),
}

pub fn lalpha_profile_bound(profile: &PlaneWaveProfile, dim: usize, alpha: &[Letter]) -> ProfileBound {
    let mut e = ProfileExpansion::base(dim);
    for &x in alpha.iter().rev() {
        e = e.apply(x);
    }
    let m = alpha.iter().filter(|x| matches!(x, Letter::L(i) if *i >= 2)).count();
    ProfileBound {
        exponent: Q::new((m as i64).into(), 2.into()),
        expansion: e,
        support: profile.support_interval(),
    }
}
