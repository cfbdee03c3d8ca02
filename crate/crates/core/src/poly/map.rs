use super::{MultiPoly, RatFunc};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// A rational map `F^n -> F^{d_1 x ... x d_s}`, components stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    nvars: usize,
    shape: Vec<usize>,
    comps: Vec<RatFunc>,
}

impl RationalMap {
    pub fn new(nvars: usize, shape: Vec<usize>, comps: Vec<RatFunc>) -> Result<Self> {
        let len: usize = shape.iter().product();
        if comps.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "{} components for shape {shape:?}",
                comps.len()
            )));
        }
        if let Some(c) = comps.iter().find(|c| c.nvars() != nvars) {
            return Err(Error::ShapeMismatch(format!(
                "component in {} variables inside a map of arity {nvars}",
                c.nvars()
            )));
        }
        Ok(RationalMap {
            nvars,
            shape,
            comps,
        })
    }

    pub fn from_polys(nvars: usize, shape: Vec<usize>, polys: Vec<MultiPoly>) -> Result<Self> {
        Self::new(nvars, shape, polys.into_iter().map(RatFunc::from).collect())
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        RationalMap {
            nvars: n,
            shape: vec![n],
            comps: (0..n).map(|j| RatFunc::var(ctx, n, j)).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<RatFunc> {
        self.comps
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.comps.iter().map(RatFunc::degree).max().unwrap_or(0)
    }

    /// Distinct denominator bases; the domain is where none of them vanishes.
    pub fn denominators(&self) -> Vec<MultiPoly> {
        let mut out: Vec<MultiPoly> = Vec::new();
        for c in &self.comps {
            if c.den_exp() > 0 && !out.contains(c.den_base()) {
                out.push(c.den_base().clone());
            }
        }
        out
    }

    pub fn in_domain(&self, x: &[FieldElement]) -> bool {
        self.comps.iter().all(|c| c.in_domain(x))
    }

    pub fn eval(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if !self.in_domain(x) {
            return Err(Error::OutsideDomain);
        }
        self.comps.iter().map(|c| c.eval(x)).collect()
    }

    /// Jacobian: the codomain gains a trailing axis of length `nvars`, and
    /// entry `(i.., j)` is the partial derivative of component `(i..)` in `x_j`.
    pub fn total_derivative(&self) -> RationalMap {
        let n = self.nvars;
        let mut comps = Vec::with_capacity(self.comps.len() * n);
        for c in &self.comps {
            for j in 0..n {
                comps.push(c.partial(j));
            }
        }
        let mut shape = self.shape.clone();
        shape.push(n);
        RationalMap {
            nvars: n,
            shape,
            comps,
        }
    }

    pub fn higher_derivative(&self, order: usize) -> RationalMap {
        (0..order).fold(self.clone(), |f, _| f.total_derivative())
    }

    /// `self ∘ inner`: the components of `inner` (flattened) are substituted for
    /// the variables of `self`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        if inner.len() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "inner map has {} components, outer map has arity {}",
                inner.len(),
                self.nvars
            )));
        }
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let num = RatFunc::substitute(c.num(), &inner.comps)?;
                if c.den_exp() == 0 {
                    return Ok(num);
                }
                let base = RatFunc::substitute(c.den_base(), &inner.comps)?;
                let mut den = base.clone();
                for _ in 1..c.den_exp() {
                    den = den.mul(&base);
                }
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(num.mul(&den.inv()?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMap {
            nvars: inner.nvars,
            shape: self.shape.clone(),
            comps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bilinear_gradient() {
        let f = FieldCtx::prime(7).unwrap();
        let x1 = MultiPoly::var(&f, 2, 0);
        let x2 = MultiPoly::var(&f, 2, 1);
        let map = RationalMap::from_polys(2, vec![1], vec![x1.mul(&x2)]).unwrap();
        let d = map.total_derivative();
        assert_eq!(d.shape(), &[1, 2]);
        assert_eq!(d.components()[0], RatFunc::from(x2));
        assert_eq!(d.components()[1], RatFunc::from(x1));
    }

    #[test]
    fn constant_map_derivative_is_zero() {
        let f = FieldCtx::prime(7).unwrap();
        let c = RatFunc::constant(&f, 3, f.from_int(4));
        let map = RationalMap::new(3, vec![2], vec![c.clone(), c]).unwrap();
        let d = map.total_derivative();
        assert_eq!(d.shape(), &[2, 3]);
        assert!(d.components().iter().all(RatFunc::is_zero));
    }

    #[test]
    fn compose_with_identity_and_square() {
        let f = FieldCtx::prime(7).unwrap();
        let x = MultiPoly::var(&f, 1, 0);
        let one = MultiPoly::one(&f, 1);
        let g = RationalMap::from_polys(1, vec![1], vec![x.add(&one)]).unwrap();
        let id = RationalMap::identity(&f, 1);
        assert_eq!(id.compose(&g).unwrap(), g);
        let sq = RationalMap::from_polys(1, vec![1], vec![x.mul(&x)]).unwrap();
        let h = sq.compose(&g).unwrap();
        let expected = x.add(&one).mul(&x.add(&one));
        assert_eq!(h.components()[0], RatFunc::from(expected));
    }

    #[test]
    fn derivative_order_zero_is_identity() {
        let f = FieldCtx::prime(5).unwrap();
        let x = MultiPoly::var(&f, 2, 0);
        let map = RationalMap::from_polys(2, vec![1], vec![x.mul(&x)]).unwrap();
        assert_eq!(map.higher_derivative(0), map);
        // degree 2, third derivative vanishes in characteristic 5
        assert!(map.higher_derivative(3).components().iter().all(RatFunc::is_zero));
    }

    #[test]
    fn compose_rejects_shape_mismatch() {
        let f = FieldCtx::prime(5).unwrap();
        let id2 = RationalMap::identity(&f, 2);
        let id3 = RationalMap::identity(&f, 3);
        assert!(matches!(id2.compose(&id3), Err(Error::ShapeMismatch(_))));
    }
}
