use std::fmt;

use serde_json::{json, Value};

use super::MultiPoly;
use crate::algebra::{Field, Ring};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// A quotient `num / base^exp` of polynomials.
///
/// The denominator is kept as a power of one polynomial so that repeated
/// quotient-rule differentiation of `p / det^k` keeps a single determinant
/// in the denominator instead of multiplying copies of it together. Values
/// are not reduced to lowest terms; only the leading coefficient of `base`
/// and surplus powers of `base` dividing `num` are normalised away, never
/// the last one. The domain is syntactic: `(x^2 - 1) / (x - 1)` is
/// undefined at `x = 1`.
#[derive(Clone, PartialEq)]
pub struct RatFunc {
    num: MultiPoly,
    base: MultiPoly,
    exp: u32,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp {
            0 => write!(f, "{:?}", self.num),
            1 => write!(f, "({:?}) / ({:?})", self.num, self.base),
            e => write!(f, "({:?}) / ({:?})^{e}", self.num, self.base),
        }
    }
}

impl From<MultiPoly> for RatFunc {
    fn from(num: MultiPoly) -> Self {
        let base = MultiPoly::one(num.ctx(), num.nvars());
        RatFunc { num, base, exp: 0 }
    }
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc {
            num,
            base: den,
            exp: 1,
        }
        .normalized())
    }

    /// `num / base^exp` for a nonzero `base`.
    pub fn with_power(num: MultiPoly, base: MultiPoly, exp: u32) -> Result<Self> {
        if base.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc { num, base, exp }.normalized())
    }

    pub fn zero(ctx: &FieldCtx, nvars: usize) -> Self {
        MultiPoly::zero(ctx, nvars).into()
    }

    pub fn one(ctx: &FieldCtx, nvars: usize) -> Self {
        MultiPoly::one(ctx, nvars).into()
    }

    pub fn constant(ctx: &FieldCtx, nvars: usize, c: FieldElement) -> Self {
        MultiPoly::constant(ctx, nvars, c).into()
    }

    pub fn var(ctx: &FieldCtx, nvars: usize, j: usize) -> Self {
        MultiPoly::var(ctx, nvars, j).into()
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.num.ctx()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den_base(&self) -> &MultiPoly {
        &self.base
    }

    pub fn den_exp(&self) -> u32 {
        self.exp
    }

    /// The expanded denominator `base^exp`.
    pub fn den(&self) -> MultiPoly {
        self.base.pow(self.exp)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.exp == 0
    }

    pub fn as_constant(&self) -> Option<FieldElement> {
        if self.exp == 0 {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn degree(&self) -> u32 {
        self.num.degree().max(self.exp * self.base.degree())
    }

    fn normalized(mut self) -> Self {
        let ctx = self.num.ctx().clone();
        let n = self.num.nvars();
        if self.num.is_zero() {
            if self.exp == 0 || self.base.as_constant().is_some() {
                return RatFunc::zero(&ctx, n);
            }
            // 0 / b still carries the domain of b
            let (_, lc) = self.base.leading_term().unwrap();
            self.base = self.base.scale(ctx.inv(lc).expect("nonzero"));
            self.exp = 1;
            return self;
        }
        if self.exp == 0 {
            self.base = MultiPoly::one(&ctx, n);
            return self;
        }
        if let Some(c) = self.base.as_constant() {
            let s = ctx.inv(ctx.pow(c, self.exp as u64)).expect("nonzero denominator");
            return self.num.scale(s).into();
        }
        // leading coefficient of the base becomes 1
        let (_, lc) = self.base.leading_term().unwrap();
        if lc != ctx.one() {
            let inv = ctx.inv(lc).expect("nonzero");
            self.base = self.base.scale(inv);
            self.num = self.num.scale(ctx.pow(inv, self.exp as u64));
        }
        // whole powers of the base dividing the numerator; one power always
        // stays so the zero set of the denominator is unchanged
        while self.exp > 1 && self.num.degree() >= self.base.degree() {
            match self.num.div_exact(&self.base) {
                Some(q) => {
                    self.num = q;
                    self.exp -= 1;
                }
                None => break,
            }
        }
        self
    }

    /// The sum is defined where both summands are.
    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if other.is_zero() && other.exp == 0 {
            return self.clone();
        }
        if self.is_zero() && self.exp == 0 {
            return other.clone();
        }
        if self.exp == 0 && other.exp == 0 {
            return self.num.add(&other.num).into();
        }
        if self.exp == 0 || other.exp == 0 || self.base == other.base {
            let base = if self.exp == 0 { &other.base } else { &self.base };
            let e = self.exp.max(other.exp);
            let a = self.num.mul(&base.pow(e - self.exp));
            let b = other.num.mul(&base.pow(e - other.exp));
            return RatFunc {
                num: a.add(&b),
                base: base.clone(),
                exp: e,
            }
            .normalized();
        }
        let (da, db) = (self.den(), other.den());
        RatFunc {
            num: self.num.mul(&db).add(&other.num.mul(&da)),
            base: da.mul(&db),
            exp: 1,
        }
        .normalized()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            base: self.base.clone(),
            exp: self.exp,
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.ctx(), self.nvars());
        }
        if self.exp == 0 && other.exp == 0 {
            return self.num.mul(&other.num).into();
        }
        let num = self.num.mul(&other.num);
        if self.exp == 0 || other.exp == 0 || self.base == other.base {
            let base = if self.exp == 0 { &other.base } else { &self.base };
            return RatFunc {
                num,
                base: base.clone(),
                exp: self.exp + other.exp,
            }
            .normalized();
        }
        RatFunc {
            num,
            base: self.den().mul(&other.den()),
            exp: 1,
        }
        .normalized()
    }

    pub fn scale(&self, c: FieldElement) -> RatFunc {
        RatFunc {
            num: self.num.scale(c),
            base: self.base.clone(),
            exp: self.exp,
        }
        .normalized()
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc {
            num: self.den(),
            base: self.num.clone(),
            exp: 1,
        }
        .normalized())
    }

    /// Formal partial derivative with respect to `x_j`: for `n / b^e` this is
    /// `(b dn - e n db) / b^(e+1)`, the quotient rule with the power kept.
    pub fn partial(&self, j: usize) -> RatFunc {
        let dn = self.num.partial(j);
        if self.exp == 0 {
            return dn.into();
        }
        let db = self.base.partial(j);
        if db.is_zero() {
            return RatFunc {
                num: dn,
                base: self.base.clone(),
                exp: self.exp,
            }
            .normalized();
        }
        let ctx = self.ctx();
        let e = ctx.from_int(self.exp as i64);
        let num = self.base.mul(&dn).sub(&self.num.mul(&db).scale(e));
        RatFunc {
            num,
            base: self.base.clone(),
            exp: self.exp + 1,
        }
        .normalized()
    }

    pub fn in_domain(&self, x: &[FieldElement]) -> bool {
        self.exp == 0 || !self.ctx().is_zero(self.base.eval(x))
    }

    pub fn eval(&self, x: &[FieldElement]) -> Result<FieldElement> {
        if x.len() != self.nvars() {
            return Err(Error::ShapeMismatch(format!(
                "point of length {} for arity {}",
                x.len(),
                self.nvars()
            )));
        }
        let ctx = self.ctx();
        let n = self.num.eval(x);
        if self.exp == 0 {
            return Ok(n);
        }
        let b = self.base.eval(x);
        if ctx.is_zero(b) {
            return Err(Error::OutsideDomain);
        }
        Ok(ctx.mul(n, ctx.inv(ctx.pow(b, self.exp as u64))?))
    }

    /// Substitutes rational functions for the variables of a polynomial.
    pub fn substitute(p: &MultiPoly, subs: &[RatFunc]) -> Result<RatFunc> {
        if subs.len() != p.nvars() {
            return Err(Error::ShapeMismatch(format!(
                "{} substitutions for a polynomial in {} variables",
                subs.len(),
                p.nvars()
            )));
        }
        let (ctx, n) = match subs.first() {
            Some(s) => (s.ctx().clone(), s.nvars()),
            None => {
                let c = p.as_constant().unwrap_or_default();
                return Ok(RatFunc::constant(p.ctx(), 0, c));
            }
        };
        let mut powers: Vec<Vec<RatFunc>> = vec![vec![RatFunc::one(&ctx, n)]; subs.len()];
        let mut acc = RatFunc::zero(&ctx, n);
        for (m, c) in p.terms() {
            let mut term = RatFunc::constant(&ctx, n, *c);
            for (j, &e) in m.exponents().iter().enumerate() {
                while powers[j].len() <= e as usize {
                    let next = powers[j].last().unwrap().mul(&subs[j]);
                    powers[j].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[j][e as usize]);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        json!({"num": self.num.to_json(), "den": self.den().to_json()})
    }

    pub fn from_json(ctx: &FieldCtx, nvars: usize, v: &Value) -> Result<Self> {
        let num = MultiPoly::from_json(ctx, nvars, &v["num"])?;
        let den = MultiPoly::from_json(ctx, nvars, &v["den"])?;
        RatFunc::new(num, den)
    }
}

/// Rational functions in a fixed number of variables, as a field context.
#[derive(Clone, Debug)]
pub struct RatFuncField {
    pub ctx: FieldCtx,
    pub nvars: usize,
}

impl RatFuncField {
    pub fn new(ctx: &FieldCtx, nvars: usize) -> Self {
        RatFuncField {
            ctx: ctx.clone(),
            nvars,
        }
    }
}

impl Ring for RatFuncField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::zero(&self.ctx, self.nvars)
    }
    fn one(&self) -> RatFunc {
        RatFunc::one(&self.ctx, self.nvars)
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
}

impl Field for RatFuncField {
    fn inv(&self, a: &RatFunc) -> Result<RatFunc> {
        a.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldCtx {
        FieldCtx::prime(5).unwrap()
    }

    #[test]
    fn reciprocal_domain() {
        let f = f5();
        let x = MultiPoly::var(&f, 1, 0);
        let r = RatFunc::new(MultiPoly::one(&f, 1), x.clone()).unwrap();
        assert_eq!(r.eval(&[f.from_int(2)]).unwrap(), f.from_int(3));
        assert!(matches!(r.eval(&[f.zero()]), Err(Error::OutsideDomain)));
    }

    #[test]
    fn domain_is_syntactic() {
        let f = f5();
        let x = MultiPoly::var(&f, 1, 0);
        let one = MultiPoly::one(&f, 1);
        let r = RatFunc::new(x.mul(&x).sub(&one), x.sub(&one)).unwrap();
        assert!(matches!(r.eval(&[f.one()]), Err(Error::OutsideDomain)));
        assert_eq!(r.eval(&[f.from_int(2)]).unwrap(), f.from_int(3));
    }

    #[test]
    fn non_monic_denominator_keeps_value() {
        let f = f5();
        let x = MultiPoly::var(&f, 1, 0);
        let two_x = x.scale(f.from_int(2));
        let r = RatFunc::new(two_x.clone(), two_x).unwrap();
        for v in 1..5 {
            assert_eq!(r.eval(&[f.from_int(v)]).unwrap(), f.one());
        }
        let s = RatFunc::new(MultiPoly::one(&f, 1), x.scale(f.from_int(3))).unwrap();
        // 1 / (3 * 2) = 1 / 6 = 1 in F_5
        assert_eq!(s.eval(&[f.from_int(2)]).unwrap(), f.one());
    }

    #[test]
    fn quotient_rule_on_reciprocal() {
        let f = f5();
        let x = MultiPoly::var(&f, 1, 0);
        let r = RatFunc::new(MultiPoly::one(&f, 1), x.clone()).unwrap();
        let d = r.partial(0);
        let expected = RatFunc::new(MultiPoly::one(&f, 1).neg(), x.mul(&x)).unwrap();
        assert!(d.sub(&expected).is_zero());
    }

    #[test]
    fn zero_denominator_rejected() {
        let f = f5();
        assert!(RatFunc::new(MultiPoly::one(&f, 1), MultiPoly::zero(&f, 1)).is_err());
    }
}
