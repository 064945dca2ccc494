//! Integer evaluation of a homogeneous quadratic system.
//!
//! Every generated polynomial has total degree 2 in (entries, lambda), so with
//! all values written over a common denominator D the polynomial vanishes at
//! the rationals iff it vanishes at their numerators.

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::exactmath::{MultiPoly, Rational, Var};
use crate::operator::PolySystem;

/// Slot of lambda in the value array; slots 0..16 hold entry (r, c) at 4r + c.
pub const LAMBDA_SLOT: usize = 16;

#[derive(Debug, Clone)]
struct Term {
    coef: i64,
    x: u8,
    y: u8,
}

#[derive(Debug, Clone)]
pub struct CompiledSystem {
    polys: Vec<Vec<Term>>,
    /// Largest sum of |coefficients| over one polynomial.
    coef_mass: i64,
}

fn slot(v: &Var) -> Option<u8> {
    match v.matrix_position() {
        Some((r, c)) => Some((4 * r + c) as u8),
        None if *v == Var::lambda() => Some(LAMBDA_SLOT as u8),
        None => None,
    }
}

fn compile_poly(p: &MultiPoly) -> Option<Vec<Term>> {
    let mut out = Vec::with_capacity(p.term_count());
    for (m, c) in p.terms() {
        if !c.is_integer() {
            return None;
        }
        let coef = c.to_integer().to_i64()?;
        let f = m.factors();
        let (x, y) = match f {
            [(v, 2)] => (slot(v)?, slot(v)?),
            [(v, 1), (w, 1)] => (slot(v)?, slot(w)?),
            _ => return None,
        };
        out.push(Term { coef, x, y });
    }
    Some(out)
}

impl CompiledSystem {
    /// `None` when some polynomial is not a homogeneous quadratic with integer coefficients.
    pub fn compile(system: &PolySystem) -> Option<CompiledSystem> {
        let polys = system
            .polys()
            .iter()
            .map(|p| compile_poly(&p.poly))
            .collect::<Option<Vec<_>>>()?;
        let coef_mass = polys
            .iter()
            .map(|t| t.iter().map(|t| t.coef.abs()).sum::<i64>())
            .max()
            .unwrap_or(0);
        Some(CompiledSystem { polys, coef_mass })
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// True when no intermediate value can overflow for numerators bounded by `max_abs`.
    pub fn fits(&self, max_abs: i64) -> bool {
        max_abs
            .checked_mul(max_abs)
            .and_then(|sq| sq.checked_mul(self.coef_mass.max(1)))
            .is_some()
    }

    #[inline]
    fn value(terms: &[Term], v: &[i64; 17]) -> i64 {
        terms
            .iter()
            .map(|t| t.coef * v[t.x as usize] * v[t.y as usize])
            .sum()
    }

    /// Index of the first polynomial not vanishing, stopping there.
    #[inline]
    pub fn first_nonvanishing(&self, v: &[i64; 17]) -> Option<usize> {
        self.polys.iter().position(|t| Self::value(t, v) != 0)
    }

    /// Evaluates every polynomial without early exit.
    pub fn all_vanish_full(&self, v: &[i64; 17]) -> bool {
        self.polys
            .iter()
            .map(|t| Self::value(t, v))
            .fold(true, |acc, x| acc & (x == 0))
    }
}

/// Numerators over the least common denominator of `values` and `lambda`.
pub fn scale_to_integers(values: &[Rational], lambda: &Rational) -> Option<(Vec<i64>, i64)> {
    let den = values
        .iter()
        .chain(std::iter::once(lambda))
        .fold(num_bigint::BigInt::from(1), |acc, r| acc.lcm(r.denom()));
    let scale = |r: &Rational| -> Option<i64> { (r.numer() * (&den / r.denom())).to_i64() };
    let nums = values.iter().map(scale).collect::<Option<Vec<_>>>()?;
    Some((nums, scale(lambda)?))
}
