//! Text syntax for Laurent polynomials.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/")? unary)*
//! unary  := ("+" | "-") unary | power
//! power  := atom ("^" exponent)?
//! atom   := integer | "t" | "i" | "z" integer | "z{" integer "}" | "(" expr ")"
//! ```
//!
//! `z{k}` is `zeta_N^k`, `i` is `z{N/4}`. Division and negative powers are
//! only allowed for units (nonzero monomials). Whitespace is ignored.

use num_bigint::BigInt;

use super::{Field, LaurentPoly, Rational};
use crate::error::{Error, Result};

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    field: &'a Field,
}

pub fn parse_laurent(field: &Field, src: &str) -> Result<LaurentPoly> {
    let chars = src
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (i + 1, c))
        .collect();
    let mut p = Parser {
        chars,
        pos: 0,
        field,
    };
    if p.chars.is_empty() {
        return Err(p.error("empty polynomial"));
    }
    let v = p.expr()?;
    if p.pos < p.chars.len() {
        return Err(p.error(&format!("unexpected '{}'", p.chars[p.pos].1)));
    }
    Ok(v)
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        match self.chars.get(self.pos) {
            Some(&(col, _)) => col,
            None => self.chars.last().map_or(1, |&(c, _)| c + 1),
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            column: self.column(),
            message: msg.to_string(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || matches!(c, 't' | 'i' | 'z' | '('))
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.peek() == Some('/') {
                self.pos += 1;
                let col = self.column();
                let d = self.unary()?;
                acc = divide(&acc, &d).ok_or(Error::Parse {
                    column: col,
                    message: "division by a non-unit".into(),
                })?;
            } else if self.starts_factor() {
                acc = acc * self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentPoly> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let col = self.column();
        let paren = self.eat('(');
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let e = self.integer()?;
        if paren && !self.eat(')') {
            return Err(self.error("expected ')'"));
        }
        let e: u32 = e.try_into().map_err(|_| Error::Parse {
            column: col,
            message: "exponent too large".into(),
        })?;
        if !neg {
            return Ok(base.pow(e));
        }
        let inv = divide(&LaurentPoly::one(self.field), &base).ok_or(Error::Parse {
            column: col,
            message: "negative power of a non-unit".into(),
        })?;
        Ok(inv.pow(e))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos]
            .iter()
            .map(|&(_, c)| c)
            .collect();
        Ok(s.parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        let f = self.field;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(LaurentPoly::constant(f.rational(Rational::from_integer(n))))
            }
            Some('t') => {
                self.pos += 1;
                Ok(LaurentPoly::t(f))
            }
            Some('i') => {
                self.pos += 1;
                Ok(LaurentPoly::constant(f.i()))
            }
            Some('z') => {
                self.pos += 1;
                let braced = self.eat('{');
                let neg = braced && self.eat('-');
                let k = self.integer()?;
                if braced && !self.eat('}') {
                    return Err(self.error("expected '}'"));
                }
                let n = BigInt::from(f.conductor());
                let k = ((if neg { -k } else { k }) % &n + &n) % &n;
                let k: i64 = k.try_into().expect("reduced exponent");
                Ok(LaurentPoly::constant(f.zeta(k)))
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(v)
            }
            Some(c) => Err(self.error(&format!("unexpected '{}'", c))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn divide(num: &LaurentPoly, den: &LaurentPoly) -> Option<LaurentPoly> {
    if !den.is_unit() {
        return None;
    }
    let (e, c) = den.terms().next().map(|(e, c)| (e, c.clone()))?;
    Some(num.scale(&c.inv()?).shift(-e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Field {
        Field::new(12).unwrap()
    }

    #[test]
    fn round_trips_display() {
        let f = k();
        for s in [
            "t - 1",
            "1/2 + 1/2*t^-1",
            "-1/2*t - 1/2",
            "-1 + t^-1",
            "3/2*t^-2",
        ] {
            assert_eq!(parse_laurent(&f, s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn named_roots() {
        let f = k();
        assert_eq!(
            parse_laurent(&f, "i").unwrap(),
            parse_laurent(&f, "z{3}").unwrap()
        );
        assert_eq!(
            parse_laurent(&f, "z3").unwrap(),
            LaurentPoly::constant(f.i())
        );
        let p = parse_laurent(&f, "(t - z{2})^2 * t^-1").unwrap();
        assert_eq!(p.low_degree(), -1);
        assert_eq!(p.valuation_at(&f.zeta(2)), Some(2));
        assert_eq!(
            parse_laurent(&f, "z{-1}").unwrap(),
            LaurentPoly::constant(f.zeta(11))
        );
    }

    #[test]
    fn whitespace_and_implicit_products() {
        let f = k();
        assert_eq!(
            parse_laurent(&f, " 2 t ^ - 1 ").unwrap(),
            parse_laurent(&f, "2*t^-1").unwrap()
        );
        assert_eq!(
            parse_laurent(&f, "(1+t)/t").unwrap(),
            parse_laurent(&f, "t^-1 + 1").unwrap()
        );
    }

    #[test]
    fn errors_carry_columns() {
        let f = k();
        match parse_laurent(&f, "t + * 2") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{:?}", other),
        }
        assert!(parse_laurent(&f, "1/(t-1)").is_err());
        assert!(parse_laurent(&f, "(t-1)^-1").is_err());
        assert!(parse_laurent(&f, "").is_err());
        assert!(parse_laurent(&f, "t)").is_err());
        assert!(parse_laurent(&f, "x").is_err());
    }
}
