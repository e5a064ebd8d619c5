//! Integer-linear expressions in `d`, `m`, `k` and `γ`, as written in table transcriptions.

use crate::error::LedgerError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct LinExpr {
    pub c: i64,
    pub d: i64,
    pub m: i64,
    pub k: i64,
    pub gamma: i64,
}

/// Values of the symbolic parameters at which an expression is evaluated.
#[derive(Clone, Copy, Debug)]
pub struct Env {
    pub d: i64,
    pub m: i64,
    pub k: i64,
}

impl LinExpr {
    pub fn constant(c: i64) -> Self {
        Self { c, ..Self::default() }
    }

    /// Value with `γ` left symbolic: returns `(constant, γ coefficient)`.
    pub fn eval(&self, env: &Env) -> (i64, i64) {
        (self.c + self.d * env.d + self.m * env.m + self.k * env.k, self.gamma)
    }

    pub fn eval_int(&self, env: &Env) -> i64 {
        self.eval(env).0
    }

    pub fn parse(src: &str) -> Result<Self, LedgerError> {
        let bad = |msg: &str| LedgerError::GoldenFormat { line: 0, msg: format!("expression `{src}`: {msg}") };
        let s: String = src.split_whitespace().collect();
        let s = s.replace("gamma", "γ");
        if s.is_empty() {
            return Err(bad("empty"));
        }
        let mut out = Self::default();
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let mut sign = 1;
            if chars[i] == '+' || chars[i] == '-' {
                if chars[i] == '-' {
                    sign = -1;
                }
                i += 1;
            } else if i > 0 {
                return Err(bad("expected + or -"));
            }
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: Option<i64> = if i > start {
                Some(chars[start..i].iter().collect::<String>().parse().map_err(|_| bad("number"))?)
            } else {
                None
            };
            let var = if i < chars.len() && matches!(chars[i], 'd' | 'm' | 'k' | 'γ' | 'g') {
                i += 1;
                Some(chars[i - 1])
            } else {
                None
            };
            let n = sign * coeff.unwrap_or(1);
            match var {
                None if coeff.is_none() => return Err(bad("dangling sign")),
                None => out.c += n,
                Some('d') => out.d += n,
                Some('m') => out.m += n,
                Some('k') => out.k += n,
                Some(_) => out.gamma += n,
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_expressions() {
        let env = Env { d: 6, m: 3, k: 4 };
        assert_eq!(LinExpr::parse("d-1").unwrap().eval_int(&env), 5);
        assert_eq!(LinExpr::parse("m-3").unwrap().eval_int(&env), 0);
        assert_eq!(LinExpr::parse("2-d").unwrap().eval_int(&env), -4);
        assert_eq!(LinExpr::parse("k").unwrap().eval_int(&env), 4);
        assert_eq!(LinExpr::parse("2γ-1").unwrap().eval(&env), (-1, 2));
        assert_eq!(LinExpr::parse("1+gamma").unwrap().eval(&env), (1, 1));
        assert_eq!(LinExpr::parse("-2").unwrap().eval(&env), (-2, 0));
        assert!(LinExpr::parse("d--").is_err());
        assert!(LinExpr::parse("2x").is_err());
    }
}
