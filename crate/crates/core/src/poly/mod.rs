//! Sparse multivariate polynomials, rational functions and rational maps
//! over a finite field, with formal derivatives of every order.

mod map;
mod ratfunc;

pub use map::RationalMap;
pub use ratfunc::{RatFunc, RatFuncField};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::algebra::Ring;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with coefficients in a finite field; zero coefficients are never stored.
#[derive(Clone)]
pub struct MultiPoly {
    ctx: FieldCtx,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.index() == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{c}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl MultiPoly {
    pub fn zero(ctx: &FieldCtx, nvars: usize) -> Self {
        MultiPoly {
            ctx: ctx.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &FieldCtx, nvars: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(ctx, nvars);
        if !ctx.is_zero(c) {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(ctx: &FieldCtx, nvars: usize) -> Self {
        Self::constant(ctx, nvars, ctx.one())
    }

    /// The coordinate function `x_j` (0-based).
    pub fn var(ctx: &FieldCtx, nvars: usize, j: usize) -> Self {
        let mut p = Self::zero(ctx, nvars);
        p.terms.insert(Monomial::var(nvars, j), ctx.one());
        p
    }

    pub fn from_terms<I>(ctx: &FieldCtx, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, FieldElement)>,
    {
        let mut p = Self::zero(ctx, nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::ShapeMismatch(format!(
                    "exponent vector of length {} in a polynomial of arity {nvars}",
                    exps.len()
                )));
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if self.ctx.is_zero(c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.ctx.add(*o.get(), c);
                if self.ctx.is_zero(s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this polynomial is constant.
    pub fn as_constant(&self) -> Option<FieldElement> {
        match self.terms.len() {
            0 => Some(self.ctx.zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then_some(*c)
            }
            _ => None,
        }
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, FieldElement)> {
        self.terms.iter().next_back().map(|(m, c)| (m, *c))
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.ctx.neg(*c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.ctx.neg(*c));
        }
        out
    }

    pub fn scale(&self, c: FieldElement) -> MultiPoly {
        if self.ctx.is_zero(c) {
            return Self::zero(&self.ctx, self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.ctx.mul(*v, c);
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = Self::zero(&self.ctx, self.nvars);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        if let Some(c) = self.as_constant() {
            return other.scale(c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(c);
        }
        let mut acc: std::collections::HashMap<Monomial, FieldElement> =
            std::collections::HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = self.ctx.mul(*ca, *cb);
                let slot = acc.entry(ma.mul(mb)).or_default();
                *slot = self.ctx.add(*slot, c);
            }
        }
        out.terms = acc.into_iter().filter(|(_, c)| c.index() != 0).collect();
        out
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx, self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        let mut out = Self::zero(&self.ctx, self.nvars);
        out.terms = self.terms.iter().map(|(k, c)| (k.mul(m), *c)).collect();
        out
    }

    /// Largest monomial dividing every term (the identity monomial for zero).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        let mut out = Self::zero(&self.ctx, self.nvars);
        out.terms = self.terms.iter().map(|(k, c)| (k.div(m), *c)).collect();
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (lm, lc) = d.leading_term()?;
        let lm = lm.clone();
        let lc_inv = self.ctx.inv(lc).ok()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(self.ctx.inv(c).ok()?));
        }
        if self.degree() < d.degree() && !self.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ctx, self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = self.ctx.mul(c, lc_inv);
            for (dm, dc) in &d.terms {
                rem.add_term(dm.mul(&qm), self.ctx.neg(self.ctx.mul(*dc, qc)));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn eval(&self, x: &[FieldElement]) -> FieldElement {
        debug_assert_eq!(x.len(), self.nvars);
        let ctx = &self.ctx;
        let mut acc = ctx.zero();
        for (m, c) in &self.terms {
            let mut v = *c;
            for (xi, &e) in x.iter().zip(&m.0) {
                if e > 0 {
                    v = ctx.mul(v, ctx.pow(*xi, e as u64));
                }
            }
            acc = ctx.add(acc, v);
        }
        acc
    }

    /// Formal partial derivative with respect to `x_j` (0-based).
    pub fn partial(&self, j: usize) -> MultiPoly {
        let mut out = Self::zero(&self.ctx, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[j];
            if e == 0 {
                continue;
            }
            let coeff = self.ctx.mul(*c, self.ctx.from_int(e as i64));
            let mut exps = m.0.clone();
            exps[j] -= 1;
            out.add_term(Monomial(exps), coeff);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| json!({"exponents": m.0, "coeff": self.ctx.to_json(*c)}))
                .collect(),
        )
    }

    pub fn from_json(ctx: &FieldCtx, nvars: usize, v: &Value) -> Result<Self> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::Invalid("polynomial must be a list of terms".into()))?;
        let mut terms = Vec::with_capacity(items.len());
        for item in items {
            let exps = item["exponents"]
                .as_array()
                .ok_or_else(|| Error::Invalid("term without exponents".into()))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|e| e as u32)
                        .ok_or_else(|| Error::Invalid(format!("bad exponent {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            terms.push((exps, ctx.from_json(&item["coeff"])?));
        }
        Self::from_terms(ctx, nvars, terms)
    }
}

/// Polynomials in a fixed number of variables, as a ring context.
#[derive(Clone, Debug)]
pub struct PolyRing {
    pub ctx: FieldCtx,
    pub nvars: usize,
}

impl Ring for PolyRing {
    type Elem = MultiPoly;

    fn zero(&self) -> MultiPoly {
        MultiPoly::zero(&self.ctx, self.nvars)
    }
    fn one(&self) -> MultiPoly {
        MultiPoly::one(&self.ctx, self.nvars)
    }
    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.add(b)
    }
    fn sub(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.sub(b)
    }
    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        a.neg()
    }
    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.mul(b)
    }
    fn is_zero(&self, a: &MultiPoly) -> bool {
        a.is_zero()
    }
}
