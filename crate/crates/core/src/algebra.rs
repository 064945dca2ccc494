//! The split semi-quaternion algebra: 4-dimensional over the coefficient ring with
//! basis e0 = 1, e1, e2, e3 and
//!
//! ```text
//! e1^2 = 1, e2^2 = e3^2 = 0, e1 e2 = e3 = -e2 e1, e2 e3 = e3 e2 = 0, e3 e1 = -e2 = -e1 e3.
//! ```

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::Serialize;

use crate::exactmath::{
    format_rational, is_negative, ExactError, ParseError, RatFunc, Rational, Ring,
};
use crate::exactmath::text::Parser;
use crate::sampling;

/// Element `c0*e0 + c1*e1 + c2*e2 + c3*e3` with coordinates in `R`.
#[derive(Clone, PartialEq)]
pub struct SsqElement<R> {
    coords: [R; 4],
}

impl<R: Ring> SsqElement<R> {
    pub fn new(coords: [R; 4]) -> Self {
        SsqElement { coords }
    }

    pub fn zero() -> Self {
        SsqElement::new([R::zero(), R::zero(), R::zero(), R::zero()])
    }

    pub fn unit() -> Self {
        SsqElement::basis(0)
    }

    /// Basis element e_i.
    pub fn basis(i: usize) -> Self {
        let mut e = SsqElement::zero();
        e.coords[i] = R::one();
        e
    }

    pub fn coords(&self) -> &[R; 4] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &R {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(R::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        SsqElement::new(std::array::from_fn(|k| self.coords[k].add_ref(&rhs.coords[k])))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        SsqElement::new(std::array::from_fn(|k| self.coords[k].sub_ref(&rhs.coords[k])))
    }

    pub fn neg(&self) -> Self {
        SsqElement::new(std::array::from_fn(|k| self.coords[k].neg_ref()))
    }

    pub fn scale(&self, s: &R) -> Self {
        SsqElement::new(std::array::from_fn(|k| s.mul_ref(&self.coords[k])))
    }

    /// `self + s * q`.
    pub fn add_scale(&self, q: &Self, s: &R) -> Self {
        SsqElement::new(std::array::from_fn(|k| {
            self.coords[k].add_ref(&s.mul_ref(&q.coords[k]))
        }))
    }

    /// Product by bilinear expansion over the structure constants.
    pub fn multiply(&self, rhs: &Self) -> Self {
        let table = StructureConstants::get();
        let mut out = Self::zero();
        for i in 0..4 {
            if self.coords[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if rhs.coords[j].is_zero() {
                    continue;
                }
                let prod = self.coords[i].mul_ref(&rhs.coords[j]);
                for (k, c) in table.signs[i][j].iter().enumerate() {
                    match c {
                        0 => {}
                        1 => out.coords[k] = out.coords[k].add_ref(&prod),
                        -1 => out.coords[k] = out.coords[k].sub_ref(&prod),
                        _ => unreachable!("structure constants are 0 or ±1"),
                    }
                }
            }
        }
        out
    }

    /// Product from the closed-form component formulas. Kept independent of
    /// [`SsqElement::multiply`] so each guards the other.
    pub fn multiply_closed_form(&self, rhs: &Self) -> Self {
        let [a0, a1, a2, a3] = &self.coords;
        let [b0, b1, b2, b3] = &rhs.coords;
        let m = |x: &R, y: &R| x.mul_ref(y);
        SsqElement::new([
            m(a0, b0).add_ref(&m(a1, b1)),
            m(a1, b0).add_ref(&m(a0, b1)),
            m(a2, b0)
                .sub_ref(&m(a3, b1))
                .add_ref(&m(a0, b2))
                .add_ref(&m(a1, b3)),
            m(a3, b0)
                .sub_ref(&m(a2, b1))
                .add_ref(&m(a1, b2))
                .add_ref(&m(a0, b3)),
        ])
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> SsqElement<S> {
        SsqElement::new(std::array::from_fn(|k| f(&self.coords[k])))
    }

    /// JSON form: the four coordinates as text-form strings.
    pub fn to_strings(&self) -> [String; 4] {
        std::array::from_fn(|k| self.coords[k].to_string())
    }
}

impl SsqElement<RatFunc> {
    /// Coordinates as rationals when every coordinate is constant.
    pub fn to_rational(&self) -> Option<SsqElement<Rational>> {
        let mut out: [Rational; 4] = std::array::from_fn(|_| Rational::from_integer(0.into()));
        for (k, c) in self.coords.iter().enumerate() {
            out[k] = c.as_poly()?.as_constant()?;
        }
        Some(SsqElement::new(out))
    }
}

impl<R: Ring> fmt::Display for SsqElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_element(f, &self.coords)
    }
}

impl<R: Ring> fmt::Debug for SsqElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SsqElement({self})")
    }
}

/// Canonical literal: `1/2+2*e2-e3`, with non-constant coefficients parenthesized.
fn write_element<R: Ring>(f: &mut fmt::Formatter<'_>, coords: &[R; 4]) -> fmt::Result {
    let mut first = true;
    for (k, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let text = c.to_string();
        let constant: Option<Rational> = crate::exactmath::parse_rational(&text).ok();
        match constant {
            Some(r) => {
                let neg = is_negative(&r);
                let abs = if neg { -r } else { r };
                if neg {
                    f.write_str("-")?;
                } else if !first {
                    f.write_str("+")?;
                }
                let one = abs == Rational::from_integer(1.into());
                match (k, one) {
                    (0, _) => f.write_str(&format_rational(&abs))?,
                    (_, true) => write!(f, "e{k}")?,
                    (_, false) => write!(f, "{}*e{k}", format_rational(&abs))?,
                }
            }
            None => {
                if !first {
                    f.write_str("+")?;
                }
                if k == 0 {
                    write!(f, "({text})")?;
                } else {
                    write!(f, "({text})*e{k}")?;
                }
            }
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Multiplication table: `table[i][j]` holds the coordinates of e_i e_j.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    table: [[SsqElement<Rational>; 4]; 4],
    signs: [[[i8; 4]; 4]; 4],
}

impl StructureConstants {
    pub fn get() -> &'static StructureConstants {
        static TABLE: OnceLock<StructureConstants> = OnceLock::new();
        TABLE.get_or_init(StructureConstants::build)
    }

    fn build() -> Self {
        // (i, j) -> signed basis index of e_i e_j, or None for zero.
        let product = |i: usize, j: usize| -> Option<(i8, usize)> {
            match (i, j) {
                (0, j) => Some((1, j)),
                (i, 0) => Some((1, i)),
                (1, 1) => Some((1, 0)),
                (2, 2) | (3, 3) | (2, 3) | (3, 2) => None,
                (1, 2) => Some((1, 3)),
                (2, 1) => Some((-1, 3)),
                (3, 1) => Some((-1, 2)),
                (1, 3) => Some((1, 2)),
                _ => unreachable!(),
            }
        };
        let mut signs = [[[0i8; 4]; 4]; 4];
        for (i, row) in signs.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                if let Some((s, k)) = product(i, j) {
                    cell[k] = s;
                }
            }
        }
        let table = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                SsqElement::new(std::array::from_fn(|k| {
                    Rational::from_integer(BigInt::from(signs[i][j][k]))
                }))
            })
        });
        StructureConstants { table, signs }
    }

    /// e_i e_j.
    pub fn product(&self, i: usize, j: usize) -> &SsqElement<Rational> {
        &self.table[i][j]
    }
}

/// Parses an element literal such as `1/2 + 2*e2 - e3` or `(b*c/a)*e2`.
///
/// A term is a coefficient, a basis symbol (`1`, `e0`..`e3`), or `coefficient*basis`;
/// coefficients are rational literals or parenthesized text-form expressions.
pub fn parse_element(text: &str) -> Result<SsqElement<RatFunc>, ParseError> {
    let mut p = Parser::new(text);
    let mut out = SsqElement::<RatFunc>::zero();
    let mut first = true;
    loop {
        let negative = if p.eat('-') {
            true
        } else if p.eat('+') || first {
            false
        } else {
            return match p.peek() {
                None if !first => Ok(out),
                _ => Err(p.error(&["`+`", "`-`", "end of input"])),
            };
        };
        let (coeff, slot) = element_term(&mut p)?;
        let coeff = if negative { coeff.neg() } else { coeff };
        out.coords[slot] = out.coords[slot].add(&coeff);
        first = false;
    }
}

fn element_term(p: &mut Parser<'_>) -> Result<(RatFunc, usize), ParseError> {
    let start = p.pos();
    let coeff = match p.peek() {
        Some('(') => {
            p.bump();
            let c = p.expr()?;
            p.expect(')')?;
            Some(c)
        }
        Some(c) if c.is_ascii_digit() => {
            let n = p.integer().expect("digit present");
            let value = if p.peek() == Some('/') {
                p.bump();
                let d = p.integer().ok_or_else(|| p.error(&["denominator"]))?;
                if d == BigInt::from(0) {
                    return Err(ParseError {
                        offset: start,
                        expected: vec!["nonzero denominator".into()],
                        found: "zero".into(),
                    });
                }
                Rational::new(n, d)
            } else {
                Rational::from_integer(n)
            };
            Some(RatFunc::constant(value))
        }
        _ => None,
    };
    match coeff {
        Some(c) => {
            if p.eat('*') {
                Ok((c, basis_symbol(p)?))
            } else {
                Ok((c, 0))
            }
        }
        None => Ok((<RatFunc as Ring>::one(), basis_symbol(p)?)),
    }
}

fn basis_symbol(p: &mut Parser<'_>) -> Result<usize, ParseError> {
    const EXPECTED: [&str; 5] = ["`1`", "`e0`", "`e1`", "`e2`", "`e3`"];
    let at = p.pos();
    if p.peek() == Some('1') {
        if let Some(n) = p.integer() {
            if n == BigInt::from(1) {
                return Ok(0);
            }
        }
    } else if let Some(id) = p.identifier() {
        if let Some(k) = ["e0", "e1", "e2", "e3"].iter().position(|b| *b == id) {
            return Ok(k);
        }
    }
    let mut err = p.error(&EXPECTED);
    err.offset = at;
    Err(err)
}

/// Element literal with rational coordinates.
pub fn parse_rational_element(text: &str) -> Result<SsqElement<Rational>, ExactError> {
    let e = parse_element(text)?;
    e.to_rational()
        .ok_or_else(|| ExactError::NotPolynomial(format!("{text} has non-constant coordinates")))
}

#[derive(Debug, Clone, Serialize)]
pub struct AssociativityViolation {
    pub x: String,
    pub y: String,
    pub z: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssociativityReport {
    pub basis_triples: usize,
    pub random_triples: usize,
    pub violations: Vec<AssociativityViolation>,
}

impl AssociativityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `(xy)z = x(yz)` on all 64 basis triples and on `random_triples` seeded
/// random rational triples.
pub fn associativity_oracle(random_triples: usize, seed: u64) -> AssociativityReport {
    let mut violations = Vec::new();
    let mut check = |x: &SsqElement<Rational>, y: &SsqElement<Rational>, z: &SsqElement<Rational>| {
        let left = x.multiply(y).multiply(z);
        let right = x.multiply(&y.multiply(z));
        if left != right {
            violations.push(AssociativityViolation {
                x: x.to_string(),
                y: y.to_string(),
                z: z.to_string(),
                left: left.to_string(),
                right: right.to_string(),
            });
        }
    };
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                check(&SsqElement::basis(i), &SsqElement::basis(j), &SsqElement::basis(k));
            }
        }
    }
    let mut rng = sampling::rng(seed);
    for _ in 0..random_triples {
        let mut draw = || SsqElement::new(std::array::from_fn(|_| sampling::rational(&mut rng, 9)));
        let (x, y, z) = (draw(), draw(), draw());
        check(&x, &y, &z);
    }
    AssociativityReport {
        basis_triples: 64,
        random_triples,
        violations,
    }
}
