//! k-tensors over a finite field, slicings, flattenings and partitions.
//!
//! Axes are 0-based in the library API. Serialized index tuples are 1-based.

mod array;
mod constructing;

pub use array::{indices, strides, Array};
pub use constructing::{
    constructing_to_decomposition, ip_apply, verify_decomposition, Constructing, ConstructingElement, PRDecomposition,
    PRTerm, PartitionBlock, Verification,
};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::Matrix;
use crate::poly::MultiPoly;

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    ctx: FieldCtx,
    array: Array<FieldElement>,
}

impl Tensor {
    pub fn zeros(ctx: &FieldCtx, dims: Vec<usize>) -> Self {
        Tensor {
            ctx: ctx.clone(),
            array: Array::filled(dims, ctx.zero()),
        }
    }

    pub fn from_array(ctx: &FieldCtx, array: Array<FieldElement>) -> Self {
        Tensor {
            ctx: ctx.clone(),
            array,
        }
    }

    /// Sparse constructor with 0-based indices; repeated indices are summed.
    pub fn from_entries<I>(ctx: &FieldCtx, dims: Vec<usize>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, FieldElement)>,
    {
        let mut t = Self::zeros(ctx, dims);
        for (idx, v) in entries {
            t.check_index(&idx)?;
            let cur = *t.array.get(&idx);
            t.array.set(&idx, ctx.add(cur, v));
        }
        Ok(t)
    }

    pub fn basis(ctx: &FieldCtx, dims: Vec<usize>, idx: &[usize]) -> Result<Self> {
        Self::from_entries(ctx, dims, [(idx.to_vec(), ctx.one())])
    }

    fn check_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.order() || idx.iter().zip(self.dims()).any(|(&i, &d)| i >= d) {
            return Err(Error::ShapeMismatch(format!("index {idx:?} outside dims {:?}", self.dims())));
        }
        Ok(())
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn dims(&self) -> &[usize] {
        self.array.dims()
    }

    pub fn order(&self) -> usize {
        self.array.order()
    }

    pub fn array(&self) -> &Array<FieldElement> {
        &self.array
    }

    pub fn get(&self, idx: &[usize]) -> FieldElement {
        *self.array.get(idx)
    }

    pub fn set(&mut self, idx: &[usize], v: FieldElement) {
        self.array.set(idx, v);
    }

    pub fn is_zero(&self) -> bool {
        self.array.data().iter().all(|&x| self.ctx.is_zero(x))
    }

    /// Nonzero entries with 0-based indices, in row-major order.
    pub fn nonzero_entries(&self) -> Vec<(Vec<usize>, FieldElement)> {
        indices(self.dims())
            .zip(self.array.data())
            .filter(|(_, v)| !self.ctx.is_zero(**v))
            .map(|(i, v)| (i, *v))
            .collect()
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.same_dims(other)?;
        Ok(Tensor {
            ctx: self.ctx.clone(),
            array: self.array.add_in(&self.ctx, &other.array)?,
        })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.same_dims(other)?;
        let neg = other.array.map(|&x| self.ctx.neg(x));
        Ok(Tensor {
            ctx: self.ctx.clone(),
            array: self.array.add_in(&self.ctx, &neg)?,
        })
    }

    fn same_dims(&self, other: &Tensor) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimsMismatch {
                expected: self.dims().to_vec(),
                found: other.dims().to_vec(),
            });
        }
        Ok(())
    }

    /// Block-diagonal direct sum: dims add axis by axis.
    pub fn direct_sum(&self, other: &Tensor) -> Result<Tensor> {
        if self.order() != other.order() {
            return Err(Error::ShapeMismatch("direct sum of tensors of different order".into()));
        }
        let dims: Vec<usize> = self.dims().iter().zip(other.dims()).map(|(a, b)| a + b).collect();
        let shift = self.dims().to_vec();
        let mut entries = self.nonzero_entries();
        entries.extend(
            other
                .nonzero_entries()
                .into_iter()
                .map(|(i, v)| (i.iter().zip(&shift).map(|(a, s)| a + s).collect(), v)),
        );
        Tensor::from_entries(&self.ctx, dims, entries)
    }

    /// Zero padding: each axis grows to the requested length.
    pub fn pad(&self, dims: &[usize]) -> Result<Tensor> {
        if dims.len() != self.order() || dims.iter().zip(self.dims()).any(|(a, b)| a < b) {
            return Err(Error::ShapeMismatch(format!("cannot pad {:?} to {dims:?}", self.dims())));
        }
        Tensor::from_entries(&self.ctx, dims.to_vec(), self.nonzero_entries())
    }

    /// Same entries viewed inside an extension field.
    pub fn embed(&self, emb: &crate::field::Embedding) -> Tensor {
        Tensor {
            ctx: emb.target().clone(),
            array: self.array.map(|&x| emb.apply(x)),
        }
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .nonzero_entries()
            .into_iter()
            .map(|(i, v)| {
                let one_based: Vec<usize> = i.iter().map(|x| x + 1).collect();
                json!({"idx": one_based, "val": self.ctx.to_json(v)})
            })
            .collect();
        json!({
            "field": {"p": self.ctx.p(), "e": self.ctx.e()},
            "dims": self.dims(),
            "entries": entries,
        })
    }

    /// Reads a tensor file; the field is taken from the file.
    pub fn from_json(v: &Value) -> Result<Tensor> {
        let field = &v["field"];
        let p = field["p"].as_u64().ok_or_else(|| Error::Invalid("missing field.p".into()))?;
        let e = field["e"].as_u64().unwrap_or(1) as u32;
        let ctx = FieldCtx::new(p, e)?;
        Self::from_json_in(&ctx, v)
    }

    /// Reads a tensor whose field must equal `ctx`.
    pub fn from_json_in(ctx: &FieldCtx, v: &Value) -> Result<Tensor> {
        if let Some(p) = v["field"]["p"].as_u64() {
            let e = v["field"]["e"].as_u64().unwrap_or(1) as u32;
            if p != ctx.p() || e != ctx.e() {
                return Err(Error::Invalid(format!("tensor over F_{p}^{e}, expected {ctx:?}")));
            }
        }
        let dims = v["dims"]
            .as_array()
            .ok_or_else(|| Error::Invalid("missing dims".into()))?
            .iter()
            .map(|d| d.as_u64().map(|d| d as usize).ok_or_else(|| Error::Invalid(format!("bad dim {d}"))))
            .collect::<Result<Vec<_>>>()?;
        let mut entries = Vec::new();
        for item in v["entries"].as_array().map(Vec::as_slice).unwrap_or(&[]) {
            let idx = item["idx"]
                .as_array()
                .ok_or_else(|| Error::Invalid("entry without idx".into()))?
                .iter()
                .map(|i| match i.as_u64() {
                    Some(i) if i >= 1 => Ok(i as usize - 1),
                    _ => Err(Error::Invalid(format!("bad 1-based index {i}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            entries.push((idx, ctx.from_json(&item["val"])?));
        }
        Tensor::from_entries(ctx, dims, entries)
    }
}

/// Unordered nontrivial bipartition of the axes of a k-tensor, stored as the
/// side not containing the last axis.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    k: usize,
    mask: u64,
}

impl Partition {
    /// Accepts either side (0-based axes) and canonicalizes.
    pub fn new(k: usize, side: &[usize]) -> Result<Self> {
        if !(2..=63).contains(&k) {
            return Err(Error::Invalid(format!("partitions need 2 <= k <= 63, got {k}")));
        }
        let mut mask = 0u64;
        for &a in side {
            if a >= k {
                return Err(Error::Invalid(format!("axis {a} out of range for k = {k}")));
            }
            mask |= 1 << a;
        }
        let full = (1u64 << k) - 1;
        if mask & (1 << (k - 1)) != 0 {
            mask = full & !mask;
        }
        if mask == 0 {
            return Err(Error::Invalid("partition side must be a proper nonempty subset".into()));
        }
        Ok(Partition { k, mask })
    }

    /// All `2^{k-1} - 1` partitions, ordered by bitmask.
    pub fn all(k: usize) -> Vec<Partition> {
        (1..(1u64 << (k - 1))).map(|mask| Partition { k, mask }).collect()
    }

    pub fn count(k: usize) -> usize {
        (1usize << (k - 1)) - 1
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, axis: usize) -> bool {
        self.mask & (1 << axis) != 0
    }

    /// Axes of the canonical side, increasing.
    pub fn side(&self) -> Vec<usize> {
        (0..self.k).filter(|&a| self.contains(a)).collect()
    }

    /// Axes of the complement (always includes `k - 1`), increasing.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.k).filter(|&a| !self.contains(a)).collect()
    }

    pub fn side_dims(&self, dims: &[usize]) -> Vec<usize> {
        self.side().iter().map(|&a| dims[a]).collect()
    }

    pub fn complement_dims(&self, dims: &[usize]) -> Vec<usize> {
        self.complement().iter().map(|&a| dims[a]).collect()
    }

    /// 1-based axes of the canonical side, for serialization.
    pub fn to_json(&self) -> Value {
        Value::from(self.side().iter().map(|a| a + 1).collect::<Vec<_>>())
    }

    pub fn from_json(k: usize, v: &Value) -> Result<Self> {
        let side = v
            .as_array()
            .ok_or_else(|| Error::Invalid("partition must be a list of axes".into()))?
            .iter()
            .map(|a| match a.as_u64() {
                Some(a) if a >= 1 => Ok(a as usize - 1),
                _ => Err(Error::Invalid(format!("bad axis {a}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(k, &side)
    }
}

/// Layout of the slicing variables: for every axis other than `axis`, its
/// offset into the concatenated coordinate vector of length `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    pub axis: usize,
    /// `(original axis, offset, length)` in increasing axis order.
    pub blocks: Vec<(usize, usize, usize)>,
    pub nvars: usize,
}

impl BlockLayout {
    pub fn new(dims: &[usize], axis: usize) -> Result<Self> {
        if axis >= dims.len() {
            return Err(Error::Invalid(format!("axis {axis} out of range for order {}", dims.len())));
        }
        let mut blocks = Vec::new();
        let mut off = 0;
        for (a, &n) in dims.iter().enumerate() {
            if a != axis {
                blocks.push((a, off, n));
                off += n;
            }
        }
        Ok(BlockLayout {
            axis,
            blocks,
            nvars: off,
        })
    }

    /// Splits a point of `F^N` into its per-block vectors.
    pub fn split<'a, T>(&self, x: &'a [T]) -> Vec<&'a [T]> {
        self.blocks.iter().map(|&(_, off, len)| &x[off..off + len]).collect()
    }
}

/// The slicing along `axis`: `m = n_axis` forms of degree `k - 1` in the
/// concatenated coordinates of the other axes.
pub fn slice(t: &Tensor, axis: usize) -> Result<Vec<MultiPoly>> {
    let layout = BlockLayout::new(t.dims(), axis)?;
    let m = t.dims()[axis];
    let mut per_form: Vec<Vec<(Vec<u32>, FieldElement)>> = vec![Vec::new(); m];
    for (idx, v) in t.nonzero_entries() {
        let mut exps = vec![0u32; layout.nvars];
        for &(a, off, _) in &layout.blocks {
            exps[off + idx[a]] += 1;
        }
        per_form[idx[axis]].push((exps, v));
    }
    per_form
        .into_iter()
        .map(|terms| MultiPoly::from_terms(t.ctx(), layout.nvars, terms))
        .collect()
}

/// Multilinear form `sum_I T_I prod_j x_j[I_j]`.
pub fn tensor_eval(t: &Tensor, xs: &[&[FieldElement]]) -> Result<FieldElement> {
    if xs.len() != t.order() || xs.iter().zip(t.dims()).any(|(x, &n)| x.len() != n) {
        return Err(Error::ShapeMismatch("argument lengths do not match dims".into()));
    }
    let ctx = t.ctx();
    let mut acc = ctx.zero();
    for (idx, v) in t.nonzero_entries() {
        let mut prod = v;
        for (x, &i) in xs.iter().zip(&idx) {
            prod = ctx.mul(prod, x[i]);
        }
        acc = ctx.add(acc, prod);
    }
    Ok(acc)
}

/// Matrix with rows indexed by the side of `s` and columns by its complement.
pub fn flatten(t: &Tensor, s: &Partition) -> Result<Matrix<FieldElement>> {
    if s.k() != t.order() {
        return Err(Error::ShapeMismatch(format!("partition for k = {} on an order {} tensor", s.k(), t.order())));
    }
    let mut perm = s.side();
    perm.extend(s.complement());
    let rows: usize = s.side_dims(t.dims()).iter().product();
    let cols: usize = s.complement_dims(t.dims()).iter().product();
    let p = t.array().permute_axes(&perm);
    Matrix::from_vec(rows, cols, p.into_data())
}

/// The tensor with entries 1 at (1,1,2), (1,2,1), (2,1,1) (1-based) over `ctx`.
pub fn w_tensor(ctx: &FieldCtx) -> Tensor {
    Tensor::from_entries(
        ctx,
        vec![2, 2, 2],
        [vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]].into_iter().map(|i| (i, ctx.one())),
    )
    .expect("valid indices")
}
