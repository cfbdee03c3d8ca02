//! Prime fields `F_p` and extension fields `F_{p^e}`.
//!
//! An element is stored as the integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`
//! of its reduced coefficient vector, so equality of elements is equality of
//! coefficients. The modulus for `(p, e)` is the smallest monic irreducible
//! polynomial when the lower coefficients are read as a base-`p` integer
//! (most significant coefficient `c_{e-1}`), which makes the choice
//! reproducible across runs.

use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use crate::algebra::{Field, Ring};
use crate::error::{Error, Result};

/// Above this size extension fields skip the log/exp tables.
const TABLE_LIMIT: u64 = 1 << 22;

/// Default ceiling for operations that list every field element.
pub const DEFAULT_MAX_ENUMERATION: u64 = 1 << 20;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    /// Integer encoding of the coefficient vector.
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u64,
    e: u32,
    q: u64,
    /// Monic modulus, lowest coefficient first, length `e + 1`. Empty for prime fields.
    modulus: Vec<u64>,
    pow_p: Vec<u64>,
    tables: Option<Tables>,
    max_enumeration: u64,
}

/// Shared, immutable description of a finite field.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e() == 1 {
            write!(f, "F_{}", self.p())
        } else {
            write!(f, "F_{}^{} mod {:?}", self.p(), self.e(), self.inner.modulus)
        }
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.p() == other.p() && self.e() == other.e())
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p, lowest coefficient first. Used only while
// setting up a context and as the fallback multiplication.

fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    // m monic
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * mc) % p) % p;
            }
        }
        r.pop();
    }
    poly_trim(r)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(out)
}

fn digits(mut code: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    // roots first, cheap and catches most reducible candidates
    for a in 0..p {
        let mut v = 0u64;
        for &c in f.iter().rev() {
            v = (v * a + c) % p;
        }
        if v == 0 {
            return false;
        }
    }
    for d in 2..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g = digits(code, p, d);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u64, e: u32) -> Vec<u64> {
    let count = p.pow(e);
    for code in 0..count {
        let mut f = digits(code, p, e as usize);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

impl FieldCtx {
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::Invalid("extension degree must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
        if q >= (1u128 << 32) {
            return Err(Error::FieldTooLarge(q));
        }
        let q = q as u64;
        let pow_p = (0..e).map(|i| p.pow(i)).collect();
        let modulus = if e > 1 { smallest_irreducible(p, e) } else { Vec::new() };
        let mut inner = Inner {
            p,
            e,
            q,
            modulus,
            pow_p,
            tables: None,
            max_enumeration: DEFAULT_MAX_ENUMERATION,
        };
        if e > 1 && q <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FieldCtx {
            inner: Arc::new(inner),
        })
    }

    /// Same field with a different enumeration ceiling.
    pub fn with_max_enumeration(&self, limit: u64) -> Self {
        let inner = &self.inner;
        let tables = inner.tables.as_ref().map(|t| Tables {
            exp: t.exp.clone(),
            log: t.log.clone(),
        });
        FieldCtx {
            inner: Arc::new(Inner {
                p: inner.p,
                e: inner.e,
                q: inner.q,
                modulus: inner.modulus.clone(),
                pow_p: inner.pow_p.clone(),
                tables,
                max_enumeration: limit,
            }),
        }
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn e(&self) -> u32 {
        self.inner.e
    }

    pub fn q(&self) -> u64 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p() as i64) as u32)
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index >= self.q() {
            return Err(Error::Invalid(format!(
                "element index {index} out of range for q = {}",
                self.q()
            )));
        }
        Ok(FieldElement(index as u32))
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.e() as usize {
            return Err(Error::Invalid(format!(
                "{} coefficients for an extension of degree {}",
                coeffs.len(),
                self.e()
            )));
        }
        let mut code = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.p() {
                return Err(Error::Invalid(format!("coefficient {c} not reduced mod {}", self.p())));
            }
            code += c * self.inner.pow_p[i];
        }
        Ok(FieldElement(code as u32))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        digits(a.0 as u64, self.p(), self.e() as usize)
    }

    /// The class of `x` in an extension field; zero in a prime field.
    pub fn generator(&self) -> FieldElement {
        if self.e() == 1 {
            FieldElement(0)
        } else {
            FieldElement(self.p() as u32)
        }
    }

    #[inline]
    pub fn is_zero(&self, a: FieldElement) -> bool {
        a.0 == 0
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p();
        if self.e() == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return FieldElement(if s >= p { s - p } else { s } as u32);
        }
        if p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        for &pw in &self.inner.pow_p {
            let s = (x % p + y % p) % p;
            out += s * pw;
            x /= p;
            y /= p;
        }
        FieldElement(out as u32)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.p();
        if self.e() == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { (p - a.0 as u64) as u32 });
        }
        if p == 2 {
            return a;
        }
        let mut x = a.0 as u64;
        let mut out = 0u64;
        for &pw in &self.inner.pow_p {
            let d = x % p;
            out += ((p - d) % p) * pw;
            x /= p;
        }
        FieldElement(out as u32)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        if self.e() == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % self.p()) as u32);
        }
        match &self.inner.tables {
            Some(t) => {
                let l = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
                FieldElement(t.exp[(l % (self.q() - 1)) as usize])
            }
            None => schoolbook_mul(&self.inner, a, b),
        }
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.inner.tables {
            let l = t.log[a.0 as usize] as u64;
            return Ok(FieldElement(t.exp[((self.q() - 1 - l) % (self.q() - 1)) as usize]));
        }
        Ok(self.pow(a, self.q() - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(p^times)`.
    pub fn frobenius(&self, a: FieldElement, times: u32) -> FieldElement {
        let t = times % self.e();
        let mut x = a;
        for _ in 0..t {
            x = self.pow(x, self.p());
        }
        x
    }

    /// All `q` elements in index order; refuses fields above the enumeration ceiling.
    pub fn elements(&self) -> Result<Vec<FieldElement>> {
        if self.q() > self.inner.max_enumeration {
            return Err(Error::BudgetExceeded {
                needed: self.q() as u128,
                budget: self.inner.max_enumeration as u128,
            });
        }
        Ok((0..self.q() as u32).map(FieldElement).collect())
    }

    /// Field elements as JSON: a bare integer for prime fields, a coefficient list otherwise.
    pub fn to_json(&self, a: FieldElement) -> Value {
        if self.e() == 1 {
            Value::from(a.0)
        } else {
            Value::from(self.coeffs(a))
        }
    }

    pub fn from_json(&self, v: &Value) -> Result<FieldElement> {
        match v {
            Value::Number(n) => {
                let c = n
                    .as_u64()
                    .ok_or_else(|| Error::Invalid(format!("bad field element {v}")))?;
                if self.e() == 1 {
                    self.element(c)
                } else {
                    self.from_coeffs(&[c])
                }
            }
            Value::Array(items) => {
                let coeffs = items
                    .iter()
                    .map(|x| x.as_u64().ok_or_else(|| Error::Invalid(format!("bad coefficient {x}"))))
                    .collect::<Result<Vec<_>>>()?;
                self.from_coeffs(&coeffs)
            }
            _ => Err(Error::Invalid(format!("bad field element {v}"))),
        }
    }

    /// Embeds this field into `big`, which must be an extension of it.
    ///
    /// The image of the generator is the smallest root (by index) of this
    /// field's modulus inside `big`.
    pub fn embed_into(&self, big: &FieldCtx) -> Result<Embedding> {
        if big.p() != self.p() || !big.e().is_multiple_of(self.e()) {
            return Err(Error::Invalid(format!("{self:?} is not a subfield of {big:?}")));
        }
        let image = if self.e() == 1 {
            (0..self.q() as u32).map(FieldElement).collect()
        } else {
            let m = self.modulus();
            let root = (0..big.q() as u32)
                .map(FieldElement)
                .find(|&a| {
                    let mut v = big.zero();
                    for &c in m.iter().rev() {
                        v = big.add(big.mul(v, a), big.from_int(c as i64));
                    }
                    big.is_zero(v)
                })
                .ok_or_else(|| Error::Invalid("modulus has no root in the extension".into()))?;
            (0..self.q() as u32)
                .map(|idx| {
                    let cs = self.coeffs(FieldElement(idx));
                    let mut v = big.zero();
                    for &c in cs.iter().rev() {
                        v = big.add(big.mul(v, root), big.from_int(c as i64));
                    }
                    v
                })
                .collect()
        };
        Ok(Embedding {
            target: big.clone(),
            image,
        })
    }
}

/// A field embedding `F_q -> F_{q^m}`, tabulated.
#[derive(Clone, Debug)]
pub struct Embedding {
    target: FieldCtx,
    image: Vec<FieldElement>,
}

impl Embedding {
    pub fn target(&self) -> &FieldCtx {
        &self.target
    }

    pub fn apply(&self, a: FieldElement) -> FieldElement {
        self.image[a.0 as usize]
    }
}

fn schoolbook_mul(inner: &Inner, a: FieldElement, b: FieldElement) -> FieldElement {
    let p = inner.p;
    let e = inner.e as usize;
    let pa = digits(a.0 as u64, p, e);
    let pb = digits(b.0 as u64, p, e);
    let prod = poly_rem(&poly_mul(&poly_trim(pa), &poly_trim(pb), p), &inner.modulus, p);
    let code: u64 = prod.iter().zip(&inner.pow_p).map(|(c, pw)| c * pw).sum();
    FieldElement(code as u32)
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q;
    let order = q - 1;
    let factors = prime_factors(order);
    let slow_pow = |a: FieldElement, mut k: u64| {
        let mut base = a;
        let mut acc = FieldElement(1);
        while k > 0 {
            if k & 1 == 1 {
                acc = schoolbook_mul(inner, acc, base);
            }
            base = schoolbook_mul(inner, base, base);
            k >>= 1;
        }
        acc
    };
    let g = (2..q as u32)
        .map(FieldElement)
        .find(|&g| factors.iter().all(|&l| slow_pow(g, order / l).0 != 1))
        .expect("the multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; order as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = FieldElement(1);
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = x.0;
        log[x.0 as usize] = i as u32;
        x = schoolbook_mul(inner, x, g);
    }
    Tables { exp, log }
}

impl Ring for FieldCtx {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement(0)
    }
    fn one(&self) -> FieldElement {
        FieldElement(1)
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldCtx::add(self, *a, *b)
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldCtx::sub(self, *a, *b)
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldCtx::neg(self, *a)
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldCtx::mul(self, *a, *b)
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.0 == 0
    }
}

impl Field for FieldCtx {
    fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        FieldCtx::inv(self, *a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = FieldCtx::prime(5).unwrap();
        assert_eq!(f.q(), 5);
        assert_eq!(f.add(f.from_int(2), f.from_int(4)), f.from_int(1));
        assert_eq!(f.inv(f.from_int(3)).unwrap(), f.from_int(2));
        assert!(matches!(f.inv(f.zero()), Err(Error::DivisionByZero)));
        assert!(matches!(FieldCtx::prime(9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn f4_modulus_and_products() {
        let f = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let x = f.generator();
        let x_plus_1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.mul(x, x), x_plus_1);
        assert_eq!(f.frobenius(x, 1), x_plus_1);
    }

    #[test]
    fn f9_frobenius_fixed_points() {
        let f = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let all = f.elements().unwrap();
        assert_eq!(all.len(), 9);
        for &a in &all {
            assert_eq!(f.pow(a, 9), a);
            assert_eq!(f.frobenius(a, 2), a);
        }
        // x -> x^3 fixes exactly F_3
        let fixed = all.iter().filter(|&&a| f.frobenius(a, 1) == a).count();
        assert_eq!(fixed, 3);
    }

    #[test]
    fn modulus_is_deterministic() {
        let a = FieldCtx::new(5, 3).unwrap();
        let b = FieldCtx::new(5, 3).unwrap();
        assert_eq!(a.modulus(), b.modulus());
    }

    #[test]
    fn enumeration_order_and_sum() {
        let f = FieldCtx::prime(3).unwrap();
        let els = f.elements().unwrap();
        assert_eq!(els, vec![f.from_int(0), f.from_int(1), f.from_int(2)]);
        for (p, e) in [(3, 1), (2, 2), (3, 2), (5, 2), (7, 1)] {
            let f = FieldCtx::new(p, e).unwrap();
            let s = f.elements().unwrap().into_iter().fold(f.zero(), |a, b| f.add(a, b));
            assert!(f.is_zero(s));
        }
    }

    #[test]
    fn enumeration_refuses_large_fields() {
        let f = FieldCtx::prime(101).unwrap().with_max_enumeration(50);
        assert!(matches!(f.elements(), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn schoolbook_matches_tables() {
        let f = FieldCtx::new(3, 3).unwrap();
        for a in 0..27u32 {
            for b in 0..27u32 {
                let (a, b) = (FieldElement(a), FieldElement(b));
                assert_eq!(f.mul(a, b), schoolbook_mul(&f.inner, a, b));
            }
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let small = FieldCtx::new(2, 2).unwrap();
        let big = FieldCtx::new(2, 4).unwrap();
        let emb = small.embed_into(&big).unwrap();
        for a in small.elements().unwrap() {
            for b in small.elements().unwrap() {
                assert_eq!(emb.apply(small.mul(a, b)), big.mul(emb.apply(a), emb.apply(b)));
                assert_eq!(emb.apply(small.add(a, b)), big.add(emb.apply(a), emb.apply(b)));
            }
        }
    }

    #[test]
    fn json_forms() {
        let f = FieldCtx::new(3, 2).unwrap();
        let a = f.from_coeffs(&[2, 1]).unwrap();
        assert_eq!(f.to_json(a), serde_json::json!([2, 1]));
        assert_eq!(f.from_json(&serde_json::json!([2, 1])).unwrap(), a);
        let p = FieldCtx::prime(7).unwrap();
        assert_eq!(p.to_json(p.from_int(4)), serde_json::json!(4));
        assert!(p.from_json(&serde_json::json!(9)).is_err());
    }
}
