//! Item-level rewriting of operator products. Independent of [`NormalOrderer`]; two
//! redex-selection strategies are provided to test confluence.
//!
//! [`NormalOrderer`]: super::opword::NormalOrderer

use super::field::BracketTable;
use super::opword::{OpSum, OpWord};
use super::weight::WeightPoly;
use super::Letter;

#[derive(Clone, Debug)]
enum Item {
    W(WeightPoly),
    X(Letter),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

fn is_redex(a: &Item, b: &Item) -> bool {
    match (a, b) {
        (Item::X(_), Item::W(_)) => true,
        (Item::X(x), Item::X(y)) => x > y,
        (Item::W(_), Item::W(_)) => true,
        (Item::W(_), Item::X(_)) => false,
    }
}

fn rewrite_at(term: &[Item], p: usize, table: &BracketTable) -> Vec<Vec<Item>> {
    let head = &term[..p];
    let tail = &term[p + 2..];
    let build = |mid: Vec<Item>| -> Vec<Item> {
        let mut v = head.to_vec();
        v.extend(mid);
        v.extend_from_slice(tail);
        v
    };
    match (&term[p], &term[p + 1]) {
        (Item::X(x), Item::W(w)) => {
            let mut out = vec![build(vec![Item::W(w.clone()), Item::X(*x)])];
            let dw = w.apply(*x);
            if !dw.is_zero() {
                out.push(build(vec![Item::W(dw)]));
            }
            out
        }
        (Item::X(x), Item::X(y)) => {
            let mut out = vec![build(vec![Item::X(*y), Item::X(*x)])];
            let br = table.get(*x, *y);
            for z in br.letters() {
                let c = br.coeff(z);
                if !c.is_zero() {
                    out.push(build(vec![Item::W(c.clone()), Item::X(z)]));
                }
            }
            out
        }
        (Item::W(a), Item::W(b)) => {
            let prod = a.mul(b);
            if prod.is_zero() {
                vec![]
            } else {
                vec![build(vec![Item::W(prod)])]
            }
        }
        _ => unreachable!("not a redex"),
    }
}

/// Normal form of a word by exhaustive rewriting with the chosen redex strategy.
pub fn rewrite_normal_form(w: &OpWord, table: &BracketTable, strategy: Strategy) -> OpSum {
    let dim = table.dim();
    let mut start = vec![Item::W(w.prefix.clone())];
    start.extend(w.letters.iter().map(|&x| Item::X(x)));
    let mut stack = vec![start];
    let mut out = OpSum::zero(dim);
    while let Some(term) = stack.pop() {
        let positions = (0..term.len().saturating_sub(1)).filter(|&p| is_redex(&term[p], &term[p + 1]));
        let p = match strategy {
            Strategy::Leftmost => positions.min(),
            Strategy::Rightmost => positions.max(),
        };
        match p {
            Some(p) => stack.extend(rewrite_at(&term, p, table)),
            None => {
                let (coef, letters): (WeightPoly, Vec<Letter>) = match term.first() {
                    Some(Item::W(c)) => (
                        c.clone(),
                        term[1..]
                            .iter()
                            .map(|it| match it {
                                Item::X(x) => *x,
                                Item::W(_) => unreachable!(),
                            })
                            .collect(),
                    ),
                    _ => (
                        WeightPoly::one(dim),
                        term.iter()
                            .map(|it| match it {
                                Item::X(x) => *x,
                                Item::W(_) => unreachable!(),
                            })
                            .collect(),
                    ),
                };
                out.add_term(letters, coef);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight_algebra::opword::NormalOrderer;

    #[test]
    fn strategies_agree_on_short_words() {
        let d = 3;
        let tab = BracketTable::standard(d);
        let no = NormalOrderer::new(&tab);
        let w = OpWord::bare(d, vec![Letter::T, Letter::L(3), Letter::L(1), Letter::L(2)]);
        let a = rewrite_normal_form(&w, &tab, Strategy::Leftmost);
        let b = rewrite_normal_form(&w, &tab, Strategy::Rightmost);
        assert_eq!(a, b);
        assert_eq!(a, no.word(&w));
    }
}
