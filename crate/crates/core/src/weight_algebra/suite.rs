//! Exact identity suite for the weighted vector-field calculus.

use serde::Serialize;

use super::field::{letters, BracketTable, FieldElement};
use super::laurent::LaurentPoly;
use super::opword::{NormalOrderer, OpSum, OpWord};
use super::rewrite::{rewrite_normal_form, Strategy};
use super::weight::{q, qf, WeightPoly};
use super::{dubar_decomposition, Letter};

#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraReport {
    pub dim: usize,
    pub identities: Vec<IdentityResult>,
}

impl AlgebraReport {
    pub fn all_passed(&self) -> bool {
        self.identities.iter().all(|r| r.passed)
    }
    pub fn failures(&self) -> Vec<&IdentityResult> {
        self.identities.iter().filter(|r| !r.passed).collect()
    }
}

/// Test functions in `{y0, .., yd, 1/y0}` used as the differential-operator oracle.
pub fn test_functions(d: usize) -> Vec<LaurentPoly> {
    let y = |mu: usize| LaurentPoly::coord(d, mu);
    let inv = LaurentPoly::monomial(d, q(1), {
        let mut e = vec![0; d + 1];
        e[0] = -1;
        e
    });
    let last = d.min(3);
    let mid = 2.min(d);
    vec![
        y(mid).mul(&y(last)).mul(&inv),
        y(0).mul(&y(0)).mul(&y(1)).add(&y(last).scale(&q(3))),
        y(1).mul(&y(mid)).mul(&inv).mul(&inv).add(&inv),
        y(1).mul(&y(1)).mul(&y(1)).sub(&y(0).mul(&y(mid)).scale(&qf(5, 7))),
    ]
}

struct Suite {
    results: Vec<IdentityResult>,
}

impl Suite {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.results.push(IdentityResult { name: name.into(), passed, detail: detail.into() });
    }
}

fn letter_name(x: Letter) -> String {
    x.to_string()
}

/// Runs every identity against the given bracket table. The derivative table and the
/// operator oracle are fixed; only the bracket table is injectable.
pub fn verify_algebra(d: usize, table: &BracketTable) -> AlgebraReport {
    assert!(d >= 2, "the calculus needs at least two boosts");
    let mut s = Suite { results: Vec::new() };
    let inv = WeightPoly::inv_y0(d);
    let fields: Vec<Letter> = letters(d).collect();
    let tfs = test_functions(d);

    // derivative table, both against the closed form and against plain differentiation
    let mut basis = vec![("1/y0".to_string(), inv.clone())];
    for j in 1..=d {
        basis.push((format!("y{j}/y0"), WeightPoly::ratio(d, j)));
    }
    for &x in &fields {
        for (bi, (bname, w)) in basis.iter().enumerate() {
            let got = w.apply(x);
            let closed = match (x, bi) {
                (Letter::T, 0) => inv.mul(&inv).neg(),
                (Letter::T, j) => inv.mul(&WeightPoly::ratio(d, j)).neg(),
                (Letter::L(i), 0) => inv.mul(&WeightPoly::ratio(d, i)).neg(),
                (Letter::L(i), j) => {
                    let delta = if i == j { WeightPoly::one(d) } else { WeightPoly::zero(d) };
                    delta.sub(&WeightPoly::ratio(d, i).mul(&WeightPoly::ratio(d, j)))
                }
            };
            let oracle = w.to_laurent().apply(x);
            s.check(
                format!("derivative {}({})", letter_name(x), bname),
                got == closed && got.to_laurent() == oracle,
                format!("{got}"),
            );
        }
    }

    // bracket entries against commutators of differential operators
    for (a, &x) in fields.iter().enumerate() {
        for &y in &fields[a + 1..] {
            let br = table.get(x, y);
            let ok = tfs.iter().all(|f| {
                let lhs = f.apply(y).apply(x).sub(&f.apply(x).apply(y));
                lhs == br.apply_laurent(f)
            });
            s.check(format!("bracket [{x},{y}] as operators"), ok, format!("{br}"));
        }
    }

    // antisymmetry on basis fields
    let antisym = fields.iter().all(|&x| {
        fields.iter().all(|&y| {
            let a = FieldElement::letter(d, x).bracket(&FieldElement::letter(d, y), table);
            let b = FieldElement::letter(d, y).bracket(&FieldElement::letter(d, x), table);
            a.add(&b).is_zero()
        })
    });
    s.check("bracket antisymmetry on basis", antisym, "");

    // [L^i, [L^j, T]] = delta_ij T
    let t = FieldElement::letter(d, Letter::T);
    for i in 1..=d {
        for j in 1..=d {
            let li = FieldElement::letter(d, Letter::L(i));
            let lj = FieldElement::letter(d, Letter::L(j));
            let got = li.bracket(&lj.bracket(&t, table), table);
            let want = if i == j { t.clone() } else { FieldElement::zero(d) };
            s.check(format!("[L{i},[L{j},T]] = delta T"), got == want, format!("{got}"));
        }
    }

    // Jacobi identity on weighted fields
    let samples = sample_fields(d);
    for (n, (a, b, c)) in [(0, 1, 2), (1, 2, 3), (0, 2, 3), (3, 4, 0)].iter().enumerate() {
        let (a, b, c) = (&samples[*a], &samples[*b], &samples[*c]);
        let jac = a
            .bracket(&b.bracket(c, table), table)
            .add(&b.bracket(&c.bracket(a, table), table))
            .add(&c.bracket(&a.bracket(b, table), table));
        s.check(format!("Jacobi identity #{n}"), jac.is_zero(), format!("{jac}"));
    }

    // brackets of weighted fields match operator commutators
    for (n, (a, b)) in [(0, 1), (2, 4), (3, 1)].iter().enumerate() {
        let (a, b) = (&samples[*a], &samples[*b]);
        let br = a.bracket(b, table);
        let ok = tfs.iter().all(|f| {
            let lhs = a.apply_laurent(&b.apply_laurent(f)).sub(&b.apply_laurent(&a.apply_laurent(f)));
            lhs == br.apply_laurent(f)
        });
        s.check(format!("weighted bracket as operators #{n}"), ok, "");
    }

    // grading of the commutator algebra: [A_a, B_b] lies in weight a + b
    for (n, (a, b)) in [(0, 1), (1, 2), (2, 4), (0, 3)].iter().enumerate() {
        let (a, b) = (&samples[*a], &samples[*b]);
        let ga = a.grades();
        let gb = b.grades();
        let br = a.bracket(b, table);
        let ok = ga.len() == 1 && gb.len() == 1 && br.grades().iter().all(|&g| g == ga[0] + gb[0]);
        s.check(format!("bracket grading #{n}"), ok, format!("{:?}+{:?} -> {:?}", ga, gb, br.grades()));
    }

    // operator algebra: composition adds gradings, commutator drops one degree
    let no = NormalOrderer::new(table);
    let ops = sample_ops(d);
    for (n, (a, b)) in [(0, 1), (1, 2), (2, 0), (1, 1)].iter().enumerate() {
        let (a, b) = (&ops[*a], &ops[*b]);
        let ga = no.sum(a).grade().unwrap();
        let gb = no.sum(b).grade().unwrap();
        let ab = no.compose(a, b);
        let ok = match ab.grade() {
            Some(g) => {
                g.is_homogeneous()
                    && g.weight_min == ga.weight_min + gb.weight_min
                    && g.degree <= ga.degree + gb.degree
                    && g.t_degree <= ga.t_degree + gb.t_degree
            }
            None => true,
        };
        s.check(format!("composition grading #{n}"), ok, format!("{:?}", ab.grade()));
        let cm = no.commutator(a, b);
        let ok = match cm.grade() {
            Some(g) => g.weight_min == ga.weight_min + gb.weight_min && g.is_homogeneous() && g.degree < ga.degree + gb.degree,
            None => true,
        };
        s.check(format!("commutator lowers degree #{n}"), ok, format!("{:?}", cm.grade()));
    }

    // normal ordering preserves the operator and is confluent
    let words = sample_words(d);
    for (n, w) in words.iter().enumerate() {
        let nf = no.word(w);
        let same = tfs.iter().all(|f| nf.apply(f) == w.apply(f));
        s.check(format!("normal order preserves operator #{n}"), same && nf.is_canonical(), format!("{nf}"));
        let l = rewrite_normal_form(w, table, Strategy::Leftmost);
        let r = rewrite_normal_form(w, table, Strategy::Rightmost);
        s.check(format!("rewrite confluence #{n}"), l == r && l == nf, "");
    }

    // transversal derivative in terms of T and L1
    let du = dubar_decomposition(d);
    let u2 = LaurentPoly::coord(d, 0).add(&LaurentPoly::coord(d, 1));
    let ub2 = LaurentPoly::coord(d, 0).sub(&LaurentPoly::coord(d, 1));
    s.check("dubar annihilates u", du.apply_laurent(&u2).is_zero(), "");
    s.check(
        "dubar of ubar is one",
        du.apply_laurent(&ub2) == LaurentPoly::constant(d, q(2)),
        "scaled by 2 = sqrt2 * sqrt2",
    );

    AlgebraReport { dim: d, identities: s.results }
}

/// Homogeneous weighted fields used by the Jacobi and grading checks.
pub fn sample_fields(d: usize) -> Vec<FieldElement> {
    let inv = WeightPoly::inv_y0(d);
    let r = |i: usize| WeightPoly::ratio(d, i.min(d));
    let f = |x: Letter| FieldElement::letter(d, x);
    vec![
        f(Letter::L(1)).add(&f(Letter::L(2)).scale_weight(&r(1).mul(&r(2)))),
        f(Letter::T).scale_weight(&r(2)).add(&f(Letter::L(1)).scale_weight(&inv)),
        f(Letter::L(d)).scale_weight(&inv.mul(&inv).mul(&r(3))).add(&f(Letter::T).scale_weight(&inv.mul(&r(1)).scale(&q(2)))),
        f(Letter::T).add(&f(Letter::L(2)).scale_weight(&inv)),
        f(Letter::L(2)).scale_weight(&r(1).scale(&qf(-3, 2))).add(&f(Letter::L(1))),
    ]
}

fn sample_ops(d: usize) -> Vec<OpSum> {
    let inv = WeightPoly::inv_y0(d);
    vec![
        OpSum::from_word(&OpWord::new(WeightPoly::ratio(d, 1), vec![Letter::L(2), Letter::T])),
        OpSum::from_word(&OpWord::new(inv.clone(), vec![Letter::L(1)])),
        OpSum::from_word(&OpWord::bare(d, vec![Letter::T, Letter::L(d), Letter::L(1)])),
    ]
}

fn sample_words(d: usize) -> Vec<OpWord> {
    vec![
        OpWord::bare(d, vec![Letter::L(2), Letter::L(1)]),
        OpWord::bare(d, vec![Letter::T, Letter::L(1), Letter::L(d)]),
        OpWord::new(WeightPoly::inv_y0(d), vec![Letter::T, Letter::T, Letter::L(2), Letter::L(1)]),
        OpWord::new(WeightPoly::ratio(d, 1), vec![Letter::L(d), Letter::T, Letter::L(2), Letter::L(1)]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stock_table_passes_everything() {
        let rep = verify_algebra(3, &BracketTable::standard(3));
        assert!(rep.all_passed(), "{:?}", rep.failures());
        assert!(rep.identities.len() >= 30);
    }

    #[test]
    fn mutated_table_is_caught() {
        let rep = verify_algebra(3, &BracketTable::mutated(3));
        assert!(!rep.all_passed());
    }
}
