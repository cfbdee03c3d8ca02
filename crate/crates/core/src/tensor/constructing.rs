use serde_json::{json, Value};

use super::{indices, strides, Array, Partition, Tensor};
use crate::algebra::Ring;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

/// One term `u ⊗ v` of a partition-rank decomposition, `u` over the side of
/// the partition and `v` over its complement.
#[derive(Clone, Debug, PartialEq)]
pub struct PRTerm {
    pub partition: Partition,
    pub u: Tensor,
    pub v: Tensor,
}

impl PRTerm {
    pub fn new(partition: Partition, u: Tensor, v: Tensor) -> Self {
        PRTerm { partition, u, v }
    }

    pub fn expand(&self, dims: &[usize]) -> Result<Tensor> {
        let ctx = self.u.ctx().clone();
        let mut acc = Array::zeros(&ctx, dims.to_vec());
        accumulate_pair(&ctx, &self.partition, self.u.array(), self.v.array(), &mut acc)?;
        Ok(Tensor::from_array(&ctx, acc))
    }
}

/// Adds `u[I_S] v[I_{S̄}]` into `acc` for every index `I`.
fn accumulate_pair<R: Ring>(
    ring: &R,
    partition: &Partition,
    u: &Array<R::Elem>,
    v: &Array<R::Elem>,
    acc: &mut Array<R::Elem>,
) -> Result<()> {
    let dims = acc.dims().to_vec();
    let side = partition.side();
    let comp = partition.complement();
    if partition.k() != dims.len() || u.dims() != partition.side_dims(&dims) || v.dims() != partition.complement_dims(&dims) {
        return Err(Error::ShapeMismatch(format!(
            "pair of shapes {:?}, {:?} for partition {:?} of {dims:?}",
            u.dims(),
            v.dims(),
            side
        )));
    }
    if u.is_zero_in(ring) || v.is_zero_in(ring) {
        return Ok(());
    }
    let us = strides(u.dims());
    let vs = strides(v.dims());
    let mut data = std::mem::replace(acc, Array::filled(vec![0], ring.zero())).into_data();
    for (flat, idx) in indices(&dims).enumerate() {
        let uo: usize = side.iter().zip(&us).map(|(&a, s)| idx[a] * s).sum();
        let a = &u.data()[uo];
        if ring.is_zero(a) {
            continue;
        }
        let vo: usize = comp.iter().zip(&vs).map(|(&a, s)| idx[a] * s).sum();
        let b = &v.data()[vo];
        if ring.is_zero(b) {
            continue;
        }
        data[flat] = ring.add(&data[flat], &ring.mul(a, b));
    }
    *acc = Array::new(dims, data)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PRDecomposition {
    pub dims: Vec<usize>,
    pub terms: Vec<PRTerm>,
}

impl PRDecomposition {
    pub fn empty(dims: Vec<usize>) -> Self {
        PRDecomposition { dims, terms: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sum(&self, ctx: &FieldCtx) -> Result<Tensor> {
        let mut acc = Array::zeros(ctx, self.dims.clone());
        for t in &self.terms {
            accumulate_pair(ctx, &t.partition, t.u.array(), t.v.array(), &mut acc)?;
        }
        Ok(Tensor::from_array(ctx, acc))
    }

    pub fn terms_to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|t| json!({"S": t.partition.to_json(), "u": t.u.to_json(), "v": t.v.to_json()}))
                .collect(),
        )
    }

    pub fn terms_from_json(ctx: &FieldCtx, dims: Vec<usize>, v: &Value) -> Result<Self> {
        let k = dims.len();
        let items = v.as_array().ok_or_else(|| Error::Invalid("terms must be a list".into()))?;
        let mut terms = Vec::with_capacity(items.len());
        for item in items {
            let partition = Partition::from_json(k, &item["S"])?;
            let u = Tensor::from_json_in(ctx, &item["u"])?;
            let v = Tensor::from_json_in(ctx, &item["v"])?;
            if u.dims() != partition.side_dims(&dims) || v.dims() != partition.complement_dims(&dims) {
                return Err(Error::Invalid("term factor shape does not match its partition".into()));
            }
            terms.push(PRTerm::new(partition, u, v));
        }
        Ok(PRDecomposition { dims, terms })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    pub term_count: usize,
}

/// Checks `sum of terms == t` entrywise.
pub fn verify_decomposition(t: &Tensor, d: &PRDecomposition) -> Result<Verification> {
    if t.dims() != d.dims.as_slice() {
        return Err(Error::DimsMismatch {
            expected: t.dims().to_vec(),
            found: d.dims.clone(),
        });
    }
    let sum = d.sum(t.ctx())?;
    Ok(Verification {
        ok: sum == *t,
        term_count: d.len(),
    })
}

/// Pairs of one partition in a constructing-space element.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionBlock<E> {
    pub partition: Partition,
    pub pairs: Vec<(Array<E>, Array<E>)>,
}

/// Element of the width-`r` constructing space over a tensor space of the
/// given dims: for every partition, `r` pairs of factors. With `E` a rational
/// function type this is a constructing map.
#[derive(Clone, Debug, PartialEq)]
pub struct Constructing<E> {
    dims: Vec<usize>,
    width: usize,
    blocks: Vec<PartitionBlock<E>>,
}

pub type ConstructingElement = Constructing<FieldElement>;

impl<E: Clone + PartialEq + std::fmt::Debug> Constructing<E> {
    /// `blocks` must list every partition once, in [`Partition::all`] order,
    /// each with `width` correctly shaped pairs.
    pub fn new(dims: Vec<usize>, width: usize, blocks: Vec<PartitionBlock<E>>) -> Result<Self> {
        let k = dims.len();
        if k < 2 {
            return Err(Error::Invalid("constructing space needs order at least 2".into()));
        }
        let parts = Partition::all(k);
        if blocks.len() != parts.len() {
            return Err(Error::ShapeMismatch(format!("{} blocks for {} partitions", blocks.len(), parts.len())));
        }
        for (b, p) in blocks.iter().zip(&parts) {
            if b.partition != *p {
                return Err(Error::ShapeMismatch(format!("block for {:?} where {:?} expected", b.partition.side(), p.side())));
            }
            if b.pairs.len() != width {
                return Err(Error::ShapeMismatch(format!("{} pairs in a width {width} block", b.pairs.len())));
            }
            let (sd, cd) = (p.side_dims(&dims), p.complement_dims(&dims));
            if b.pairs.iter().any(|(u, v)| u.dims() != sd.as_slice() || v.dims() != cd.as_slice()) {
                return Err(Error::ShapeMismatch(format!("pair shapes for partition {:?}", p.side())));
            }
        }
        Ok(Constructing { dims, width, blocks })
    }

    pub fn zeros<R: Ring<Elem = E>>(ring: &R, dims: Vec<usize>, width: usize) -> Self {
        let blocks = Partition::all(dims.len())
            .into_iter()
            .map(|p| PartitionBlock {
                partition: p,
                pairs: (0..width)
                    .map(|_| (Array::zeros(ring, p.side_dims(&dims)), Array::zeros(ring, p.complement_dims(&dims))))
                    .collect(),
            })
            .collect();
        Constructing { dims, width, blocks }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn blocks(&self) -> &[PartitionBlock<E>] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [PartitionBlock<E>] {
        &mut self.blocks
    }

    pub fn block(&self, p: &Partition) -> Option<&PartitionBlock<E>> {
        self.blocks.iter().find(|b| b.partition == *p)
    }

    /// Total number of pairs, `(2^{k-1} - 1) r`.
    pub fn num_pairs(&self) -> usize {
        self.blocks.iter().map(|b| b.pairs.len()).sum()
    }

    pub fn map<T, F>(&self, mut f: F) -> Result<Constructing<T>>
    where
        F: FnMut(&E) -> Result<T>,
        T: Clone,
    {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                Ok(PartitionBlock {
                    partition: b.partition,
                    pairs: b
                        .pairs
                        .iter()
                        .map(|(u, v)| Ok((u.try_map(&mut f)?, v.try_map(&mut f)?)))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Constructing {
            dims: self.dims.clone(),
            width: self.width,
            blocks,
        })
    }

    /// Entrywise sum of two elements of the same space.
    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        if self.dims != other.dims || self.width != other.width {
            return Err(Error::ShapeMismatch("adding constructing elements of different spaces".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                Ok(PartitionBlock {
                    partition: a.partition,
                    pairs: a
                        .pairs
                        .iter()
                        .zip(&b.pairs)
                        .map(|((u1, v1), (u2, v2))| Ok((u1.add_in(ring, u2)?, v1.add_in(ring, v2)?)))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Constructing {
            dims: self.dims.clone(),
            width: self.width,
            blocks,
        })
    }
}

/// `sum_i sum_S u^{(i,S)} ⊗ v^{(i,S̄)}`, each product placed back on its axes.
pub fn ip_apply<R: Ring>(ring: &R, c: &Constructing<R::Elem>) -> Result<Array<R::Elem>> {
    let mut acc = Array::zeros(ring, c.dims.clone());
    for b in &c.blocks {
        for (u, v) in &b.pairs {
            accumulate_pair(ring, &b.partition, u, v, &mut acc)?;
        }
    }
    Ok(acc)
}

/// One term per pair whose factors are both nonzero.
pub fn constructing_to_decomposition(ctx: &FieldCtx, c: &ConstructingElement) -> PRDecomposition {
    let mut terms = Vec::new();
    for b in &c.blocks {
        for (u, v) in &b.pairs {
            if u.is_zero_in(ctx) || v.is_zero_in(ctx) {
                continue;
            }
            terms.push(PRTerm::new(
                b.partition,
                Tensor::from_array(ctx, u.clone()),
                Tensor::from_array(ctx, v.clone()),
            ));
        }
    }
    PRDecomposition {
        dims: c.dims.clone(),
        terms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::w_tensor;

    fn vecs(ctx: &FieldCtx, dims: Vec<usize>, vals: &[i64]) -> Tensor {
        Tensor::from_array(ctx, Array::new(dims, vals.iter().map(|&v| ctx.from_int(v)).collect()).unwrap())
    }

    #[test]
    fn w_two_term_certificate() {
        let f = FieldCtx::prime(2).unwrap();
        let w = w_tensor(&f);
        let s = Partition::new(3, &[0]).unwrap();
        let t1 = PRTerm::new(s, vecs(&f, vec![2], &[1, 0]), vecs(&f, vec![2, 2], &[0, 1, 1, 0]));
        let t2 = PRTerm::new(s, vecs(&f, vec![2], &[0, 1]), vecs(&f, vec![2, 2], &[1, 0, 0, 0]));
        let full = PRDecomposition {
            dims: vec![2, 2, 2],
            terms: vec![t1.clone(), t2],
        };
        assert_eq!(verify_decomposition(&w, &full).unwrap(), Verification { ok: true, term_count: 2 });
        let partial = PRDecomposition {
            dims: vec![2, 2, 2],
            terms: vec![t1],
        };
        assert!(!verify_decomposition(&w, &partial).unwrap().ok);
        let zero = Tensor::zeros(&f, vec![2, 2, 2]);
        let empty = PRDecomposition::empty(vec![2, 2, 2]);
        assert_eq!(verify_decomposition(&zero, &empty).unwrap(), Verification { ok: true, term_count: 0 });
        assert!(matches!(
            verify_decomposition(&zero, &PRDecomposition::empty(vec![2, 2])),
            Err(Error::DimsMismatch { .. })
        ));
    }

    #[test]
    fn single_outer_product() {
        let f = FieldCtx::prime(5).unwrap();
        let mut c = ConstructingElement::zeros(&f, vec![2, 2, 2], 1);
        let s = Partition::new(3, &[0]).unwrap();
        let block = c.blocks_mut().iter_mut().find(|b| b.partition == s).unwrap();
        block.pairs[0] = (
            Array::new(vec![2], vec![f.one(), f.zero()]).unwrap(),
            Array::new(vec![2, 2], vec![f.zero(), f.one(), f.zero(), f.zero()]).unwrap(),
        );
        let t = ip_apply(&f, &c).unwrap();
        let expected = Tensor::basis(&f, vec![2, 2, 2], &[0, 0, 1]).unwrap();
        assert_eq!(&t, expected.array());
        assert_eq!(constructing_to_decomposition(&f, &c).len(), 1);
        assert_eq!(c.num_pairs(), 3);
    }

    #[test]
    fn interleaved_partition() {
        // S = {2} on a 3-tensor: u lives on the middle axis, v on axes 1 and 3
        let f = FieldCtx::prime(5).unwrap();
        let s = Partition::new(3, &[1]).unwrap();
        let u = vecs(&f, vec![3], &[0, 2, 0]);
        let v = vecs(&f, vec![2, 4], &[0, 0, 0, 0, 0, 0, 3, 0]);
        let t = PRTerm::new(s, u, v).expand(&[2, 3, 4]).unwrap();
        assert_eq!(t.nonzero_entries(), vec![(vec![1, 1, 2], f.from_int(6))]);
    }
}
