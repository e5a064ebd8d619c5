//! Differential operators `sum w_beta X^{beta_1} .. X^{beta_k}` with weight prefixes,
//! normal ordering with respect to `L^1 < .. < L^d < T`, and grading.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use super::field::{BracketTable, FieldElement};
use super::laurent::LaurentPoly;
use super::weight::WeightPoly;
use super::Letter;

/// A single product `prefix * X_1 X_2 .. X_k` (`X_k` acts first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpWord {
    pub prefix: WeightPoly,
    pub letters: Vec<Letter>,
}

impl OpWord {
    pub fn new(prefix: WeightPoly, letters: Vec<Letter>) -> Self {
        OpWord { prefix, letters }
    }

    pub fn bare(dim: usize, letters: Vec<Letter>) -> Self {
        OpWord { prefix: WeightPoly::one(dim), letters }
    }

    pub fn t_degree(&self) -> usize {
        self.letters.iter().filter(|&&x| x == Letter::T).count()
    }

    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        let mut g = f.clone();
        for &x in self.letters.iter().rev() {
            g = g.apply(x);
        }
        self.prefix.to_laurent().mul(&g)
    }
}

/// Sum of words keyed by letter sequence. Canonical when every key is sorted.
#[derive(Clone, PartialEq, Eq)]
pub struct OpSum {
    dim: usize,
    terms: BTreeMap<Vec<Letter>, WeightPoly>,
}

/// `(weight range, degree, T-degree)` envelope of an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpGrade {
    pub weight_min: u32,
    pub weight_max: u32,
    pub degree: usize,
    pub t_degree: usize,
}

impl OpGrade {
    pub fn is_homogeneous(&self) -> bool {
        self.weight_min == self.weight_max
    }
}

impl OpSum {
    pub fn zero(dim: usize) -> Self {
        OpSum { dim, terms: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_word(&OpWord::bare(dim, vec![]))
    }

    pub fn from_word(w: &OpWord) -> Self {
        let mut s = Self::zero(w.prefix.dim());
        s.add_term(w.letters.clone(), w.prefix.clone());
        s
    }

    pub fn from_field(f: &FieldElement) -> Self {
        let mut s = Self::zero(f.dim());
        for x in f.letters() {
            s.add_term(vec![x], f.coeff(x).clone());
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Letter>, WeightPoly> {
        &self.terms
    }

    pub fn words(&self) -> Vec<OpWord> {
        self.terms
            .iter()
            .map(|(l, w)| OpWord { prefix: w.clone(), letters: l.clone() })
            .collect()
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.keys().all(|k| k.windows(2).all(|p| p[0] <= p[1]))
    }

    pub(crate) fn add_term(&mut self, letters: Vec<Letter>, w: WeightPoly) {
        if w.is_zero() {
            return;
        }
        match self.terms.entry(letters) {
            Entry::Vacant(v) => {
                v.insert(w);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&w);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &OpSum) -> OpSum {
        let mut out = self.clone();
        for (l, w) in &o.terms {
            out.add_term(l.clone(), w.clone());
        }
        out
    }

    pub fn sub(&self, o: &OpSum) -> OpSum {
        self.add(&o.left_weight(&WeightPoly::one(self.dim).neg()))
    }

    /// `w * self`
    pub fn left_weight(&self, w: &WeightPoly) -> OpSum {
        let mut out = OpSum::zero(self.dim);
        for (l, c) in &self.terms {
            out.add_term(l.clone(), w.mul(c));
        }
        out
    }

    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.dim);
        for w in self.words() {
            out = out.add(&w.apply(f));
        }
        out
    }

    pub fn grade(&self) -> Option<OpGrade> {
        let mut g: Option<OpGrade> = None;
        for (l, w) in &self.terms {
            let nt = l.iter().filter(|&&x| x == Letter::T).count();
            for gr in w.grades() {
                let wt = gr + nt as u32;
                let cur = OpGrade { weight_min: wt, weight_max: wt, degree: l.len(), t_degree: nt };
                g = Some(match g {
                    None => cur,
                    Some(p) => OpGrade {
                        weight_min: p.weight_min.min(wt),
                        weight_max: p.weight_max.max(wt),
                        degree: p.degree.max(cur.degree),
                        t_degree: p.t_degree.max(cur.t_degree),
                    },
                });
            }
        }
        g
    }
}

impl fmt::Debug for OpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for OpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (l, w) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({w})")?;
            for x in l {
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

/// Normal ordering by left multiplication into an already canonical operator.
pub struct NormalOrderer<'a> {
    table: &'a BracketTable,
}

impl<'a> NormalOrderer<'a> {
    pub fn new(table: &'a BracketTable) -> Self {
        NormalOrderer { table }
    }

    pub fn word(&self, w: &OpWord) -> OpSum {
        let dim = self.table.dim();
        let mut op = OpSum::identity(dim);
        for &x in w.letters.iter().rev() {
            op = self.left_mul(x, &op);
        }
        op.left_weight(&w.prefix)
    }

    pub fn sum(&self, s: &OpSum) -> OpSum {
        let mut out = OpSum::zero(s.dim());
        for w in s.words() {
            out = out.add(&self.word(&w));
        }
        out
    }

    /// Canonical form of the composition `a ∘ b`.
    pub fn compose(&self, a: &OpSum, b: &OpSum) -> OpSum {
        let b = self.sum(b);
        let mut out = OpSum::zero(a.dim());
        for w in a.words() {
            let mut op = b.clone();
            for &x in w.letters.iter().rev() {
                op = self.left_mul(x, &op);
            }
            out = out.add(&op.left_weight(&w.prefix));
        }
        out
    }

    /// Canonical form of `[a, b] = ab - ba`.
    pub fn commutator(&self, a: &OpSum, b: &OpSum) -> OpSum {
        self.compose(a, b).sub(&self.compose(b, a))
    }

    /// `x ∘ op` for canonical `op`.
    pub fn left_mul(&self, x: Letter, op: &OpSum) -> OpSum {
        let mut out = OpSum::zero(op.dim());
        for (beta, w) in op.terms() {
            out.add_term(beta.clone(), w.apply(x));
            out = out.add(&self.insert(x, beta).left_weight(w));
        }
        out
    }

    /// Canonical form of `x beta` with `beta` sorted.
    fn insert(&self, x: Letter, beta: &[Letter]) -> OpSum {
        let dim = self.table.dim();
        if beta.is_empty() || x <= beta[0] {
            let mut l = Vec::with_capacity(beta.len() + 1);
            l.push(x);
            l.extend_from_slice(beta);
            let mut s = OpSum::zero(dim);
            s.add_term(l, WeightPoly::one(dim));
            return s;
        }
        let b0 = beta[0];
        let rest = &beta[1..];
        // x b0 R = b0 (x R) + [x, b0] R
        let mut out = self.left_mul(b0, &self.insert(x, rest));
        let br = self.table.get(x, b0);
        let mut rest_op = OpSum::zero(dim);
        rest_op.add_term(rest.to_vec(), WeightPoly::one(dim));
        for z in br.letters() {
            let c = br.coeff(z);
            if c.is_zero() {
                continue;
            }
            out = out.add(&self.left_mul(z, &rest_op).left_weight(c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(i: usize) -> Letter {
        Letter::L(i)
    }

    #[test]
    fn swap_rule_is_consistent() {
        let d = 3;
        let tab = BracketTable::standard(d);
        let no = NormalOrderer::new(&tab);
        let a = no.word(&OpWord::bare(d, vec![l(2), l(1)]));
        let b = no
            .word(&OpWord::bare(d, vec![l(1), l(2)]))
            .add(&OpSum::from_field(&tab.get(l(2), l(1))));
        assert_eq!(a, b);
        assert!(a.is_canonical());
    }

    #[test]
    fn grade_of_boosts_then_t() {
        let d = 3;
        let tab = BracketTable::standard(d);
        let no = NormalOrderer::new(&tab);
        let op = no.word(&OpWord::bare(d, vec![l(1), l(2), Letter::T]));
        let g = op.grade().unwrap();
        assert_eq!((g.weight_min, g.weight_max, g.degree, g.t_degree), (1, 1, 3, 1));
    }

    #[test]
    fn t_moved_right_picks_up_lower_order_terms() {
        let d = 2;
        let tab = BracketTable::standard(d);
        let no = NormalOrderer::new(&tab);
        let op = no.word(&OpWord::bare(d, vec![Letter::T, l(1)]));
        // T L1 = L1 T - [L1, T] = L1 T + (1/y0) L1 - (y1/y0) T
        let mut want = OpSum::zero(d);
        want.add_term(vec![l(1), Letter::T], WeightPoly::one(d));
        want.add_term(vec![l(1)], WeightPoly::inv_y0(d));
        want.add_term(vec![Letter::T], WeightPoly::ratio(d, 1).neg());
        assert_eq!(op, want);
    }
}
