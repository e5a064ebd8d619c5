//! Laurent polynomials in `y0` (polynomial in `y1..yd`), used as exact test functions
//! on which vector fields act by ordinary differentiation.

use num_traits::{One, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::weight::{pow_q, q, Q};
use super::Letter;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Vec<i32>, Q>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly { dim, terms: BTreeMap::new() }
    }

    pub fn monomial(dim: usize, c: Q, exps: Vec<i32>) -> Self {
        assert_eq!(exps.len(), dim + 1);
        assert!(exps[1..].iter().all(|&e| e >= 0), "only y0 may carry negative powers");
        let mut p = Self::zero(dim);
        p.add_term(exps, c);
        p
    }

    pub fn constant(dim: usize, c: Q) -> Self {
        Self::monomial(dim, c, vec![0; dim + 1])
    }

    /// The coordinate function `y^mu`.
    pub fn coord(dim: usize, mu: usize) -> Self {
        let mut e = vec![0; dim + 1];
        e[mu] = 1;
        Self::monomial(dim, Q::one(), e)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, Q> {
        &self.terms
    }

    fn add_term(&mut self, e: Vec<i32>, c: Q) {
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

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> LaurentPoly {
        let mut out = Self::zero(self.dim);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Coordinate partial derivative `d/dy^mu`.
    pub fn partial(&self, mu: usize) -> LaurentPoly {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[mu] != 0 {
                let mut f = e.clone();
                f[mu] -= 1;
                out.add_term(f, c * q(e[mu] as i64));
            }
        }
        out
    }

    /// `T = d/dy0`, `L^i = y0 d/dy^i + y^i d/dy0`.
    pub fn apply(&self, x: Letter) -> LaurentPoly {
        match x {
            Letter::T => self.partial(0),
            Letter::L(i) => {
                let a = Self::coord(self.dim, 0).mul(&self.partial(i));
                let b = Self::coord(self.dim, i).mul(&self.partial(0));
                a.add(&b)
            }
        }
    }

    pub fn eval(&self, y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (mu, &p) in e.iter().enumerate() {
                if p >= 0 {
                    t *= pow_q(&y[mu], p as u32);
                } else {
                    t /= pow_q(&y[mu], (-p) as u32);
                }
            }
            s += t;
        }
        s
    }

    pub fn eval_f64(&self, y: &[f64]) -> f64 {
        let mut s = 0.0;
        for (e, c) in &self.terms {
            let cf = num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
            let mut t = cf;
            for (mu, &p) in e.iter().enumerate() {
                t *= y[mu].powi(p);
            }
            s += t;
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight_algebra::weight::qf;

    #[test]
    fn boost_of_tau_squared_vanishes() {
        let d = 3;
        let mut tau2 = LaurentPoly::coord(d, 0).mul(&LaurentPoly::coord(d, 0));
        for i in 1..=d {
            let yi = LaurentPoly::coord(d, i);
            tau2 = tau2.sub(&yi.mul(&yi));
        }
        for i in 1..=d {
            assert!(tau2.apply(Letter::L(i)).is_zero());
        }
    }

    #[test]
    fn inverse_power_derivative() {
        let d = 1;
        let f = LaurentPoly::monomial(d, q(1), vec![-2, 0]);
        let df = f.partial(0);
        let y = vec![qf(3, 2), q(0)];
        assert_eq!(df.eval(&y), qf(-2, 1) / (qf(3, 2) * qf(3, 2) * qf(3, 2)));
    }
}
