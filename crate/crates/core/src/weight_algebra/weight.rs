//! Weight ring: polynomials in `1/y0` and `y^i/y0`, graded by the power of `1/y0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use super::laurent::LaurentPoly;
use super::Letter;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector `[e0, e1, .., ed]`: `(1/y0)^e0 * prod (y^i/y0)^ei`.
pub type Exps = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightMonomial {
    pub coefficient: Q,
    pub exps: Exps,
}

impl WeightMonomial {
    pub fn grade(&self) -> u32 {
        self.exps[0]
    }
}

/// Element of the weight ring in canonical form (merged terms, no zero coefficients).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightPoly {
    dim: usize,
    terms: BTreeMap<Exps, Q>,
}

impl WeightPoly {
    pub fn zero(dim: usize) -> Self {
        WeightPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Q) -> Self {
        let mut w = Self::zero(dim);
        w.add_term(vec![0; dim + 1], c);
        w
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Q::one())
    }

    /// `1/y0`
    pub fn inv_y0(dim: usize) -> Self {
        let mut e = vec![0; dim + 1];
        e[0] = 1;
        Self::monomial(dim, Q::one(), e)
    }

    /// `y^i/y0`, `1 <= i <= dim`
    pub fn ratio(dim: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= dim, "ratio index {i} out of range for d={dim}");
        let mut e = vec![0; dim + 1];
        e[i] = 1;
        Self::monomial(dim, Q::one(), e)
    }

    pub fn monomial(dim: usize, c: Q, exps: Exps) -> Self {
        assert_eq!(exps.len(), dim + 1);
        let mut w = Self::zero(dim);
        w.add_term(exps, c);
        w
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = WeightMonomial> + '_ {
        self.terms
            .iter()
            .map(|(e, c)| WeightMonomial { coefficient: c.clone(), exps: e.clone() })
    }

    pub fn terms(&self) -> &BTreeMap<Exps, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, e: Exps, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Grades present, sorted ascending.
    pub fn grades(&self) -> Vec<u32> {
        let mut g: Vec<u32> = self.terms.keys().map(|e| e[0]).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// Homogeneous part of the given grade.
    pub fn homogeneous_part(&self, grade: u32) -> WeightPoly {
        WeightPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[0] == grade)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &WeightPoly) -> WeightPoly {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &WeightPoly) -> WeightPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> WeightPoly {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> WeightPoly {
        let mut out = Self::zero(self.dim);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &WeightPoly) -> WeightPoly {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> WeightPoly {
        let mut out = Self::one(self.dim);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Action of `T` or `L^i` via the derivative table and the Leibniz rule.
    pub fn apply(&self, x: Letter) -> WeightPoly {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let total: u32 = e.iter().sum();
            match x {
                Letter::T => {
                    // T(1/y0)^a = -a (1/y0)^{a+1}; T(y^i/y0)^b = -b (1/y0)(y^i/y0)^b
                    let mut f = e.clone();
                    f[0] += 1;
                    out.add_term(f, -(c * q(total as i64)));
                }
                Letter::L(i) => {
                    assert!(i >= 1 && i <= self.dim);
                    if e[i] > 0 {
                        let mut f = e.clone();
                        f[i] -= 1;
                        out.add_term(f, c * q(e[i] as i64));
                    }
                    let mut f = e.clone();
                    f[i] += 1;
                    out.add_term(f, -(c * q(total as i64)));
                }
            }
        }
        out
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.dim);
        for (e, c) in &self.terms {
            let total: u32 = e.iter().sum();
            let mut a: Vec<i32> = e.iter().map(|&v| v as i32).collect();
            a[0] = -(total as i32);
            out = out.add(&LaurentPoly::monomial(self.dim, c.clone(), a));
        }
        out
    }

    /// Exact evaluation at a point `y = (y0, .., yd)` with `y0 != 0`.
    pub fn eval(&self, y: &[Q]) -> Q {
        let inv = Q::one() / &y[0];
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            t *= pow_q(&inv, e[0]);
            for i in 1..=self.dim {
                t *= pow_q(&(&y[i] * &inv), e[i]);
            }
            s += t;
        }
        s
    }

    pub fn max_abs_coefficient(&self) -> Q {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }
}

pub(crate) fn pow_q(x: &Q, n: u32) -> Q {
    let mut r = Q::one();
    for _ in 0..n {
        r *= x;
    }
    r
}

impl fmt::Debug for WeightPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeightPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if e[0] > 0 {
                write!(f, "*(1/y0)^{}", e[0])?;
            }
            for (i, &p) in e.iter().enumerate().skip(1) {
                if p > 0 {
                    write!(f, "*(y{i}/y0)^{p}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_table_entries() {
        let d = 3;
        let inv = WeightPoly::inv_y0(d);
        assert_eq!(inv.apply(Letter::T), inv.mul(&inv).neg());
        for i in 1..=d {
            let r = WeightPoly::ratio(d, i);
            assert_eq!(r.apply(Letter::T), inv.mul(&r).neg());
            assert_eq!(inv.apply(Letter::L(i)), inv.mul(&r).neg());
            for j in 1..=d {
                let rj = WeightPoly::ratio(d, j);
                let delta = if i == j { WeightPoly::one(d) } else { WeightPoly::zero(d) };
                assert_eq!(rj.apply(Letter::L(i)), delta.sub(&r.mul(&rj)));
            }
        }
    }

    #[test]
    fn l2_of_y3_ratio() {
        let d = 3;
        let got = WeightPoly::ratio(d, 3).apply(Letter::L(2));
        let want = WeightPoly::ratio(d, 2).mul(&WeightPoly::ratio(d, 3)).neg();
        assert_eq!(got, want);
    }

    #[test]
    fn constants_are_killed() {
        let d = 3;
        assert!(WeightPoly::constant(d, q(7)).apply(Letter::L(1)).is_zero());
        assert!(WeightPoly::one(d).apply(Letter::T).is_zero());
    }

    #[test]
    fn remark_example_has_grade_five() {
        let d = 4;
        let w = WeightPoly::inv_y0(d)
            .pow(5)
            .mul(&WeightPoly::ratio(d, 2))
            .mul(&WeightPoly::ratio(d, 4));
        assert_eq!(w.grades(), vec![5]);
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let d = 2;
        let w = WeightPoly::ratio(d, 1).sub(&WeightPoly::ratio(d, 1));
        assert!(w.is_zero());
        assert_eq!(w.len(), 0);
    }

    #[test]
    fn to_laurent_matches_evaluation() {
        let d = 3;
        let w = WeightPoly::inv_y0(d).mul(&WeightPoly::ratio(d, 2)).add(&WeightPoly::constant(d, qf(3, 2)));
        let y = vec![q(3), q(1), qf(-2, 5), q(4)];
        assert_eq!(w.eval(&y), w.to_laurent().eval(&y));
    }
}
