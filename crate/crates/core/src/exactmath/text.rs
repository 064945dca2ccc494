//! Text form of rationals, polynomials and rational functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Whitespace is insignificant. `λ` is read as `lambda`.

use num_bigint::BigInt;
use thiserror::Error;

use super::{ExactError, MultiPoly, RatFunc, Rational, Ring, Var};

/// Syntax error with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

pub(crate) struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn error(&mut self, expected: &[&str]) -> ParseError {
        let found = match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        };
        ParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{c}`")]))
        }
    }

    pub(crate) fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error(&["operator", "end of input"])),
        }
    }

    pub(crate) fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let digits: usize = self
            .rest()
            .bytes()
            .take_while(|b| b.is_ascii_digit())
            .count();
        if digits == 0 {
            return None;
        }
        let text = &self.rest()[..digits];
        self.pos += digits;
        Some(text.parse().expect("ascii digits"))
    }

    pub(crate) fn identifier(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            let ok = if i == 0 {
                c.is_ascii_alphabetic() || c == '_' || c == 'λ'
            } else {
                c.is_ascii_alphanumeric() || c == '_'
            };
            if !ok {
                break;
            }
            end = i + c.len_utf8();
        }
        if end == 0 {
            return None;
        }
        self.pos += end;
        Some(&rest[..end])
    }

    pub(crate) fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some('/') {
                let at = self.pos;
                self.bump();
                let rhs = self.unary()?;
                acc = acc.div(&rhs).map_err(|_| ParseError {
                    offset: at,
                    expected: vec!["nonzero divisor".into()],
                    found: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, ParseError> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RatFunc, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self
            .integer()
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| self.error(&["exponent"]))?;
        let mut acc = <RatFunc as Ring>::one();
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<RatFunc, ParseError> {
        if self.eat('(') {
            let inner = self.expr()?;
            self.expect(')')?;
            return Ok(inner);
        }
        if let Some(n) = self.integer() {
            return Ok(RatFunc::constant(Rational::from_integer(n)));
        }
        if let Some(name) = self.identifier() {
            return Ok(RatFunc::var(Var::new(name)));
        }
        Err(self.error(&["number", "variable", "`(`"]))
    }
}

/// Parses the text form into a rational function.
pub fn parse_ratfunc(src: &str) -> Result<RatFunc, ParseError> {
    let mut p = Parser::new(src);
    let value = p.expr()?;
    p.finish()?;
    Ok(value)
}

/// Parses the text form, rejecting anything with a non-constant denominator.
pub fn parse_poly(src: &str) -> Result<MultiPoly, ExactError> {
    let r = parse_ratfunc(src)?;
    match r.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(ExactError::NotPolynomial(src.trim().to_string())),
    }
}

/// Parses a rational constant such as `-3`, `1/2` or `(3/2)`.
pub fn parse_rational(src: &str) -> Result<Rational, ExactError> {
    let p = parse_poly(src)?;
    p.as_constant()
        .ok_or_else(|| ExactError::NotPolynomial(format!("{} is not a constant", src.trim())))
}
