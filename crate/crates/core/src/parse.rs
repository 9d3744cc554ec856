//! Text syntax for polynomials: `-3/2*s^2*t*u*v^3 + u*v^4`.
//!
//! Terms are separated by `+`/`-`; `*` between factors is optional and
//! whitespace is ignored. Positions in errors are 1-based character columns.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bipoly::{BiDeg, BiPoly, XPoly, Q};
use crate::error::{Error, Result};

const BI_VARS: [&str; 4] = ["s", "t", "u", "v"];
const X_VARS: [&str; 4] = ["x0", "x1", "x2", "x3"];

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    vars: &'a [&'a str; 4],
}

fn err(column: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column,
        reason: reason.into(),
    }
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn number(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    fn variable(&mut self) -> Option<usize> {
        self.skip_ws();
        for (idx, name) in self.vars.iter().enumerate() {
            let n: Vec<char> = name.chars().collect();
            if self.chars[self.pos..].starts_with(&n) {
                // `x1` must not be read as a prefix of `x12`.
                let next = self.chars.get(self.pos + n.len());
                if n.len() > 1 && next.is_some_and(|c| c.is_ascii_digit()) {
                    continue;
                }
                self.pos += n.len();
                return Some(idx);
            }
        }
        None
    }

    fn term(&mut self, sign: bool) -> Result<([u32; 4], Q)> {
        let start_col = self.column();
        let mut coeff = Q::one();
        let mut seen_factor = false;
        if let Some(num) = self.number() {
            let mut c = Q::from_integer(num);
            if self.peek() == Some('/') {
                self.pos += 1;
                let col = self.column();
                let den = self.number().ok_or_else(|| err(col, "expected denominator"))?;
                if den.is_zero() {
                    return Err(err(col, "zero denominator"));
                }
                c /= Q::from_integer(den);
            }
            coeff = c;
            seen_factor = true;
        }
        let mut exps = [0u32; 4];
        loop {
            let before = self.pos;
            let had_star = self.peek() == Some('*');
            if had_star {
                self.pos += 1;
            }
            let col = self.column();
            match self.variable() {
                Some(idx) => {
                    let mut e = 1u32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        let ecol = self.column();
                        e = self
                            .number()
                            .and_then(|n| u32::try_from(n).ok())
                            .ok_or_else(|| err(ecol, "expected exponent"))?;
                    }
                    exps[idx] += e;
                    seen_factor = true;
                }
                None if had_star => {
                    return Err(err(col, format!("expected one of {}", self.vars.join(", "))))
                }
                None => {
                    self.pos = before;
                    break;
                }
            }
        }
        if !seen_factor {
            return Err(err(start_col, "expected coefficient or variable"));
        }
        if sign {
            coeff = -coeff;
        }
        Ok((exps, coeff))
    }

    fn terms(&mut self) -> Result<Vec<([u32; 4], Q)>> {
        let mut out = Vec::new();
        let mut first = true;
        loop {
            let c = self.peek();
            let neg = match c {
                None if first => return Err(err(self.column(), "empty polynomial")),
                None => break,
                Some('+') => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                Some(_) if first => false,
                Some(ch) => return Err(err(self.column(), format!("unexpected character '{ch}'"))),
            };
            first = false;
            out.push(self.term(neg)?);
        }
        Ok(out)
    }
}

fn lex(src: &str, vars: &[&str; 4]) -> Result<Vec<([u32; 4], Q)>> {
    let mut lx = Lexer {
        chars: src.chars().collect(),
        pos: 0,
        vars,
    };
    lx.terms()
}

impl BiPoly {
    /// Parses with a prescribed bidegree, which also fixes the degree of `0`.
    pub fn parse_with_deg(src: &str, deg: BiDeg) -> Result<BiPoly> {
        let terms = lex(src, &BI_VARS)?;
        BiPoly::from_exponents(&terms, Some(deg)).map_err(|e| err(1, e.to_string()))
    }
}

impl FromStr for BiPoly {
    type Err = Error;
    fn from_str(src: &str) -> Result<BiPoly> {
        let terms = lex(src, &BI_VARS)?;
        BiPoly::from_exponents(&terms, None).map_err(|e| err(1, e.to_string()))
    }
}

impl FromStr for XPoly {
    type Err = Error;
    fn from_str(src: &str) -> Result<XPoly> {
        let terms = lex(src, &X_VARS)?;
        XPoly::from_terms(terms, None).map_err(|e| err(1, format!("not homogeneous: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_rational_terms() {
        let p: BiPoly = "-3/2*s^2*t*u*v^3 + s^3 u^4".parse().unwrap();
        assert_eq!(p.deg(), BiDeg::new(3, 4));
        assert_eq!(p.coeff(1, 3), Q::new((-3).into(), 2.into()));
        assert_eq!(p.coeff(0, 0), Q::one());
        let x: XPoly = "x0^3x2 + x1^3*x3 - x0^2*x1^2".parse().unwrap();
        assert_eq!(x.deg(), 4);
        assert_eq!(x.num_terms(), 3);
    }

    #[test]
    fn reports_columns() {
        match "s*u + t*".parse::<BiPoly>() {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 9),
            other => panic!("{other:?}"),
        }
        match "s*u +".parse::<BiPoly>() {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!("s*u + t".parse::<BiPoly>(), Err(Error::Parse { .. })));
        assert!(matches!("x0 + x1^2".parse::<XPoly>(), Err(Error::Parse { .. })));
        assert!(matches!("x0 + y".parse::<XPoly>(), Err(Error::Parse { .. })));
        assert!(matches!("1/0*s".parse::<BiPoly>(), Err(Error::Parse { .. })));
    }

    #[test]
    fn zero_with_degree() {
        let z = BiPoly::parse_with_deg("0", BiDeg::new(2, 2)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.deg(), BiDeg::new(2, 2));
    }

    fn arb_bipoly() -> impl Strategy<Value = BiPoly> {
        (0u32..4, 0u32..4)
            .prop_flat_map(|(m, n)| {
                let d = BiDeg::new(m, n);
                (Just(d), prop::collection::vec((-9i64..10, 1i64..5), d.dim()))
            })
            .prop_map(|(d, cs)| {
                BiPoly::from_terms(
                    d,
                    d.monomials()
                        .zip(cs)
                        .map(|(k, (a, b))| (k, Q::new(a.into(), b.into()))),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn bipoly_round_trip(p in arb_bipoly()) {
            let back = BiPoly::parse_with_deg(&p.to_string(), p.deg()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn xpoly_round_trip(cs in prop::collection::vec((-9i64..10, 1i64..4), 10)) {
            let monos = [[2,0,0,0],[1,1,0,0],[1,0,1,0],[1,0,0,1],[0,2,0,0],[0,1,1,0],[0,1,0,1],[0,0,2,0],[0,0,1,1],[0,0,0,2]];
            let x = XPoly::from_terms(monos.iter().zip(cs).map(|(e, (a, b))| (*e, Q::new(a.into(), b.into()))), Some(2)).unwrap();
            if !x.is_zero() {
                let back: XPoly = x.to_string().parse().unwrap();
                prop_assert_eq!(back, x);
            }
        }
    }
}
