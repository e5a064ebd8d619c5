//! Vector fields `c0 T + sum c_i L^i` with weight-ring coefficients and their Lie bracket.

use std::collections::BTreeMap;
use std::fmt;

use super::laurent::LaurentPoly;
use super::weight::{Q, WeightPoly};
use super::Letter;

#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    dim: usize,
    /// index 0: coefficient of `T`; index i: coefficient of `L^i`
    coeffs: Vec<WeightPoly>,
}

impl FieldElement {
    pub fn zero(dim: usize) -> Self {
        FieldElement { dim, coeffs: vec![WeightPoly::zero(dim); dim + 1] }
    }

    pub fn letter(dim: usize, x: Letter) -> Self {
        let mut f = Self::zero(dim);
        f.coeffs[slot(x)] = WeightPoly::one(dim);
        f
    }

    pub fn from_coeffs(coeffs: Vec<WeightPoly>) -> Self {
        let dim = coeffs.len() - 1;
        assert!(coeffs.iter().all(|c| c.dim() == dim));
        FieldElement { dim, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, x: Letter) -> &WeightPoly {
        &self.coeffs[slot(x)]
    }

    pub fn coeffs(&self) -> &[WeightPoly] {
        &self.coeffs
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        letters(self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        FieldElement {
            dim: self.dim,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement { dim: self.dim, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale_weight(&self, w: &WeightPoly) -> FieldElement {
        FieldElement { dim: self.dim, coeffs: self.coeffs.iter().map(|c| w.mul(c)).collect() }
    }

    pub fn scale(&self, c: &Q) -> FieldElement {
        FieldElement { dim: self.dim, coeffs: self.coeffs.iter().map(|w| w.scale(c)).collect() }
    }

    /// Derivation action on the weight ring.
    pub fn apply_weight(&self, w: &WeightPoly) -> WeightPoly {
        let mut out = WeightPoly::zero(self.dim);
        for x in self.letters() {
            let c = self.coeff(x);
            if !c.is_zero() {
                out = out.add(&c.mul(&w.apply(x)));
            }
        }
        out
    }

    /// Action on an explicit test function.
    pub fn apply_laurent(&self, f: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.dim);
        for x in self.letters() {
            let c = self.coeff(x);
            if !c.is_zero() {
                out = out.add(&c.to_laurent().mul(&f.apply(x)));
            }
        }
        out
    }

    /// Weights carried by the element: `grade(c0) + 1` for the `T` part, `grade(c_i)` for `L^i`.
    pub fn grades(&self) -> Vec<u32> {
        let mut g = Vec::new();
        for x in self.letters() {
            let shift = u32::from(x == Letter::T);
            g.extend(self.coeff(x).grades().into_iter().map(|v| v + shift));
        }
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn bracket(&self, other: &FieldElement, table: &BracketTable) -> FieldElement {
        let mut out = FieldElement::zero(self.dim);
        for y in other.letters() {
            out.coeffs[slot(y)] = out.coeffs[slot(y)].add(&self.apply_weight(other.coeff(y)));
        }
        for x in self.letters() {
            out.coeffs[slot(x)] = out.coeffs[slot(x)].sub(&other.apply_weight(self.coeff(x)));
        }
        for x in self.letters() {
            let a = self.coeff(x);
            if a.is_zero() {
                continue;
            }
            for y in other.letters() {
                let b = other.coeff(y);
                if b.is_zero() || x == y {
                    continue;
                }
                out = out.add(&table.get(x, y).scale_weight(&a.mul(b)));
            }
        }
        out
    }
}

pub(crate) fn slot(x: Letter) -> usize {
    match x {
        Letter::T => 0,
        Letter::L(i) => i,
    }
}

pub fn letters(dim: usize) -> impl Iterator<Item = Letter> {
    (1..=dim).map(Letter::L).chain(std::iter::once(Letter::T))
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in self.letters() {
            let c = self.coeff(x);
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c}]{x}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Brackets of the basic fields. The standard table holds
/// `[L^i, T] = -(1/y0) L^i + (y^i/y0) T` and `[L^i, L^j] = (y^i/y0) L^j - (y^j/y0) L^i`.
#[derive(Clone, Debug)]
pub struct BracketTable {
    dim: usize,
    entries: BTreeMap<(Letter, Letter), FieldElement>,
}

impl BracketTable {
    pub fn standard(dim: usize) -> Self {
        let mut entries = BTreeMap::new();
        let inv = WeightPoly::inv_y0(dim);
        for i in 1..=dim {
            let ri = WeightPoly::ratio(dim, i);
            let li_t = FieldElement::letter(dim, Letter::L(i))
                .scale_weight(&inv.neg())
                .add(&FieldElement::letter(dim, Letter::T).scale_weight(&ri));
            entries.insert((Letter::L(i), Letter::T), li_t);
            for j in (i + 1)..=dim {
                let rj = WeightPoly::ratio(dim, j);
                let lij = FieldElement::letter(dim, Letter::L(j))
                    .scale_weight(&ri)
                    .sub(&FieldElement::letter(dim, Letter::L(i)).scale_weight(&rj));
                entries.insert((Letter::L(i), Letter::L(j)), lij);
            }
        }
        BracketTable { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Replace the entry for `[x, y]` (with `x < y`); used to build mutated tables.
    pub fn with_entry(mut self, x: Letter, y: Letter, value: FieldElement) -> Self {
        assert!(x < y, "entries are stored for x < y");
        self.entries.insert((x, y), value);
        self
    }

    /// Standard table with `[L^1, T]` replaced by `(1/y0) L^1`: a fixture that the identity
    /// suite must reject.
    pub fn mutated(dim: usize) -> Self {
        let wrong = FieldElement::letter(dim, Letter::L(1)).scale_weight(&WeightPoly::inv_y0(dim));
        Self::standard(dim).with_entry(Letter::L(1), Letter::T, wrong)
    }

    pub fn get(&self, x: Letter, y: Letter) -> FieldElement {
        use std::cmp::Ordering;
        match x.cmp(&y) {
            Ordering::Equal => FieldElement::zero(self.dim),
            Ordering::Less => self.entries[&(x, y)].clone(),
            Ordering::Greater => self.entries[&(y, x)].neg(),
        }
    }
}
