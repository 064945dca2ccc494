use std::fmt;

use num_traits::One;

use super::{ExactError, Field, Monomial, MultiPoly, Rational, Ring, Var};

/// Quotient of two polynomials with the denominator kept in factored form.
///
/// Each denominator factor is a non-constant polynomial with coprime integer
/// coefficients and a positive leading coefficient; all scalar content lives in
/// the numerator. Factors come from construction (division by a polynomial, split
/// into its monomial part and the remaining primitive part), so sums only need the
/// least common multiple of two factor lists rather than a polynomial gcd.
///
/// A zero numerator keeps its denominator: the factors still record where the
/// expression is undefined.
#[derive(Clone)]
pub struct RatFunc {
    num: MultiPoly,
    den: Vec<(MultiPoly, u32)>,
}

impl RatFunc {
    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc::from_poly(MultiPoly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        RatFunc::from_poly(MultiPoly::var(v))
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(MultiPoly, u32)] {
        &self.den
    }

    pub fn denominator(&self) -> MultiPoly {
        self.den
            .iter()
            .fold(MultiPoly::one(), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    /// Numerator plus the distinct denominator factors that must not vanish.
    /// The function is identically zero on its domain iff the numerator is the
    /// zero polynomial.
    pub fn clear(&self) -> (MultiPoly, Vec<MultiPoly>) {
        (
            self.num.clone(),
            self.den.iter().map(|(f, _)| f.clone()).collect(),
        )
    }

    fn build(num: MultiPoly, mut den: Vec<(MultiPoly, u32)>) -> Self {
        den.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(MultiPoly, u32)> = Vec::with_capacity(den.len());
        for (f, e) in den {
            match merged.last_mut() {
                Some((g, k)) if *g == f => *k += e,
                _ if e > 0 => merged.push((f, e)),
                _ => {}
            }
        }
        let mut num = num;
        if !num.is_zero() {
            for (f, e) in merged.iter_mut() {
                while *e > 0 {
                    match num.div_exact(f) {
                        Some(q) => {
                            num = q;
                            *e -= 1;
                        }
                        None => break,
                    }
                }
            }
            merged.retain(|(_, e)| *e > 0);
        }
        RatFunc { num, den: merged }
    }

    /// Splits a nonzero polynomial into `scalar * product of factors`.
    fn factor_for_denominator(p: &MultiPoly) -> (Rational, Vec<(MultiPoly, u32)>) {
        let (scalar, prim) = p.primitive_part();
        let mut factors = Vec::new();
        // Pull out the monomial gcd so `a*b` or `lambda*(lambda+a)` yield simple factors.
        let mut content: Option<Vec<(Var, u32)>> = None;
        for (m, _) in prim.terms() {
            let here: Vec<(Var, u32)> = m.factors().to_vec();
            content = Some(match content {
                None => here,
                Some(prev) => prev
                    .into_iter()
                    .filter_map(|(v, e)| {
                        let k = m.exponent(&v).min(e);
                        (k > 0).then_some((v, k))
                    })
                    .collect(),
            });
        }
        let content = Monomial::from_factors(content.unwrap_or_default());
        let rest = if content.is_one() {
            prim
        } else {
            let mut rest = MultiPoly::zero();
            for (m, c) in prim.terms() {
                let q = m.div(&content).expect("monomial content divides every term");
                rest = rest.add(&MultiPoly::term(c.clone(), q));
            }
            for (v, e) in content.factors() {
                factors.push((MultiPoly::var(v.clone()), *e));
            }
            rest
        };
        if rest.as_constant().is_none() {
            factors.push((rest, 1));
        }
        (scalar, factors)
    }

    pub fn add(&self, rhs: &RatFunc) -> RatFunc {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &RatFunc) -> RatFunc {
        self.combine(rhs, true)
    }

    fn combine(&self, rhs: &RatFunc, subtract: bool) -> RatFunc {
        let rhs_num = if subtract { rhs.num.neg() } else { rhs.num.clone() };
        if self.den == rhs.den {
            return RatFunc::build(self.num.add(&rhs_num), self.den.clone());
        }
        let mut lcm: Vec<(MultiPoly, u32)> = self.den.clone();
        for (f, e) in &rhs.den {
            match lcm.iter_mut().find(|(g, _)| g == f) {
                Some((_, k)) => *k = (*k).max(*e),
                None => lcm.push((f.clone(), *e)),
            }
        }
        let cofactor = |den: &[(MultiPoly, u32)]| {
            lcm.iter().fold(MultiPoly::one(), |acc, (f, e)| {
                let have = den.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                acc.mul(&f.pow(e - have))
            })
        };
        let num = self
            .num
            .mul(&cofactor(&self.den))
            .add(&rhs_num.mul(&cofactor(&rhs.den)));
        RatFunc::build(num, lcm)
    }

    pub fn mul(&self, rhs: &RatFunc) -> RatFunc {
        let mut den = self.den.clone();
        den.extend(rhs.den.iter().cloned());
        RatFunc::build(self.num.mul(&rhs.num), den)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc, ExactError> {
        if rhs.num.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let (scalar, factors) = RatFunc::factor_for_denominator(&rhs.num);
        let mut den = self.den.clone();
        den.extend(factors);
        let num = self
            .num
            .mul(&rhs.denominator())
            .scale(&scalar.recip());
        Ok(RatFunc::build(num, den))
    }

    /// Evaluates numerator and denominator in a field and divides.
    pub fn eval_with<F: Field>(
        &self,
        mut value_of: impl FnMut(&Var) -> Option<F>,
    ) -> Result<F, ExactError> {
        let n = self.num.eval_with(&mut value_of)?;
        let mut d = F::one();
        for (f, e) in &self.den {
            let v = f.eval_with(&mut value_of)?;
            for _ in 0..*e {
                d = d.mul_ref(&v);
            }
        }
        n.checked_div(&d).ok_or(ExactError::DivisionByZero)
    }

    pub fn eval(
        &self,
        assignment: &std::collections::HashMap<Var, Rational>,
    ) -> Result<Rational, ExactError> {
        self.eval_with(|v| assignment.get(v).cloned())
    }

    pub fn variables(&self) -> std::collections::BTreeSet<Var> {
        let mut vars = self.num.variables();
        for (f, _) in &self.den {
            vars.extend(f.variables());
        }
        vars
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.denominator()) == other.num.mul(&self.denominator())
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(MultiPoly::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(MultiPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn from_rational(r: &Rational) -> Self {
        RatFunc::constant(r.clone())
    }
}

impl Field for RatFunc {
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        self.div(rhs).ok()
    }
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

fn needs_parens(p: &MultiPoly) -> bool {
    p.term_count() > 1
        || p
            .terms()
            .next()
            .is_some_and(|(m, c)| !m.is_one() && !(c.is_one() || (-c).is_one()))
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if needs_parens(&self.num) {
            write!(f, "({})/", self.num)?;
        } else {
            write!(f, "{}/", self.num)?;
        }
        let single = self.den.len() == 1 && self.den[0].1 == 1;
        if !single {
            f.write_str("(")?;
        }
        for (k, (g, e)) in self.den.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if g.term_count() > 1 {
                write!(f, "({g})")?;
            } else {
                write!(f, "{g}")?;
            }
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if !single {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        <RatFunc as Ring>::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{parse_poly, parse_ratfunc, rat};

    fn r(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap()
    }
    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn clear_single_fraction() {
        assert_eq!(r("b*c/a").clear(), (p("b*c"), vec![p("a")]));
    }

    #[test]
    fn clear_negated_sum_over_a() {
        let (num, dens) = r("-(a^2+b*c)/a").clear();
        assert_eq!(num, p("-a^2-b*c"));
        assert_eq!(dens, vec![p("a")]);
    }

    #[test]
    fn clear_zero_keeps_constraint() {
        let z = RatFunc::from_poly(MultiPoly::zero())
            .div(&r("b+lambda"))
            .unwrap();
        assert_eq!(z.clear(), (MultiPoly::zero(), vec![p("b+lambda")]));
    }

    #[test]
    fn sums_cancel_and_share_denominators() {
        // b*c/a - a - (b*c/a - a) == 0
        let x = r("b*c/a-a");
        assert!(x.sub(&x).is_zero());
        // a/b + a/(b+lambda) keeps both factors
        let s = r("a/b").add(&r("a/(b+lambda)"));
        let (_, dens) = s.clear();
        assert_eq!(dens.len(), 2);
        assert_eq!(s, r("a*(2*b+lambda)/(b*(b+lambda))"));
    }

    #[test]
    fn multiplication_cancels_factors() {
        let x = r("(a^2+b*c)/a").mul(&r("a"));
        assert!(x.is_polynomial());
        assert_eq!(x.numerator(), &p("a^2+b*c"));
    }

    #[test]
    fn sign_normalized_factor() {
        // lambda - b is stored as -(b - lambda)
        let x = r("a*b/(lambda-b)");
        assert_eq!(x.denominator_factors()[0].0, p("b-lambda"));
        assert_eq!(x.numerator(), &p("-a*b"));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(r("a").div(&r("0")).unwrap_err(), ExactError::DivisionByZero);
        let at: std::collections::HashMap<Var, Rational> =
            [(Var::new("a"), rat(0)), (Var::new("b"), rat(1))].into_iter().collect();
        assert_eq!(r("b/a").eval(&at), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn display_round_trips() {
        for s in ["b*c/a", "(a^2+b*c)/a", "-a*b/(b-lambda)", "lambda*(a+lambda)/b", "1/2*a"] {
            let x = r(s);
            assert_eq!(r(&x.to_string()), x, "{s} printed as {x}");
        }
    }
}
