//! Graded weight ring, weighted vector fields and the differential-operator algebra
//! generated by `T = d/dy0` and the boosts `L^i = y0 d/dy^i + y^i d/dy0`.

pub mod field;
pub mod laurent;
pub mod opword;
pub mod profile_bound;
pub mod rewrite;
pub mod suite;
pub mod weight;

use serde::{Deserialize, Serialize};
use std::fmt;

pub use field::{BracketTable, FieldElement};
pub use laurent::LaurentPoly;
pub use opword::{NormalOrderer, OpGrade, OpSum, OpWord};
pub use profile_bound::{lalpha_profile_bound, ProfileBound, ProfileExpansion};
pub use suite::{verify_algebra, AlgebraReport};
pub use weight::{WeightMonomial, WeightPoly};

/// Alphabet of the operator algebra, ordered `L^1 < .. < L^d < T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    L(usize),
    T,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::L(i) => write!(f, "L{i}"),
            Letter::T => write!(f, "T"),
        }
    }
}

pub fn apply_field_to_weight(x: Letter, w: &WeightPoly) -> WeightPoly {
    w.apply(x)
}

pub fn bracket(a: &FieldElement, b: &FieldElement) -> FieldElement {
    a.bracket(b, &BracketTable::standard(a.dim()))
}

pub fn normal_order(w: &OpSum) -> OpSum {
    let table = BracketTable::standard(w.dim());
    NormalOrderer::new(&table).sum(w)
}

pub fn grade_of(op: &OpSum) -> Option<OpGrade> {
    op.grade()
}

/// `sqrt2 * d/dubar = (1 + y1/y0) T - (1/y0) L1`, i.e. `d/dubar = (sqrt2 u T - L1)/(u + ubar)`.
pub fn dubar_decomposition(d: usize) -> FieldElement {
    let one = WeightPoly::one(d);
    FieldElement::letter(d, Letter::T)
        .scale_weight(&one.add(&WeightPoly::ratio(d, 1)))
        .sub(&FieldElement::letter(d, Letter::L(1)).scale_weight(&WeightPoly::inv_y0(d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dubar_matches_coordinate_form() {
        let d = 3;
        let du = dubar_decomposition(d);
        // y2 * (y0 - y1) is sqrt2 * y2 * ubar
        let f = LaurentPoly::coord(d, 2).mul(&LaurentPoly::coord(d, 0).sub(&LaurentPoly::coord(d, 1)));
        let direct = f.partial(0).sub(&f.partial(1));
        assert_eq!(du.apply_laurent(&f), direct);
    }
}
