use crate::algebra::Ring;
use crate::error::{Error, Result};

/// Dense row-major k-dimensional array (last axis varies fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct Array<E> {
    dims: Vec<usize>,
    data: Vec<E>,
}

/// All index tuples of `dims` in row-major order.
pub fn indices(dims: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = dims.iter().product();
    let mut cur = vec![0usize; dims.len()];
    (0..total).map(move |step| {
        if step > 0 {
            for a in (0..dims.len()).rev() {
                cur[a] += 1;
                if cur[a] < dims[a] {
                    break;
                }
                cur[a] = 0;
            }
        }
        cur.clone()
    })
}

pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for a in (0..dims.len().saturating_sub(1)).rev() {
        s[a] = s[a + 1] * dims[a + 1];
    }
    s
}

impl<E: Clone> Array<E> {
    pub fn new(dims: Vec<usize>, data: Vec<E>) -> Result<Self> {
        let len: usize = dims.iter().product();
        if data.len() != len {
            return Err(Error::ShapeMismatch(format!("{} entries for dims {dims:?}", data.len())));
        }
        Ok(Array { dims, data })
    }

    pub fn filled(dims: Vec<usize>, value: E) -> Self {
        let len = dims.iter().product();
        Array {
            dims,
            data: vec![value; len],
        }
    }

    pub fn from_fn<F: FnMut(&[usize]) -> E>(dims: Vec<usize>, mut f: F) -> Self {
        let data = indices(&dims).map(|i| f(&i)).collect();
        Array { dims, data }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn into_data(self) -> Vec<E> {
        self.data
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        idx.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn get(&self, idx: &[usize]) -> &E {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: E) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn map<T, F: FnMut(&E) -> T>(&self, f: F) -> Array<T> {
        Array {
            dims: self.dims.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<T, F: FnMut(&E) -> Result<T>>(&self, f: F) -> Result<Array<T>> {
        Ok(Array {
            dims: self.dims.clone(),
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Reorders axes: axis `t` of the result is axis `perm[t]` of `self`.
    pub fn permute_axes(&self, perm: &[usize]) -> Self {
        let dims: Vec<usize> = perm.iter().map(|&a| self.dims[a]).collect();
        let old_strides = strides(&self.dims);
        let mut old = vec![0usize; perm.len()];
        let data = indices(&dims)
            .map(|idx| {
                for (t, &a) in perm.iter().enumerate() {
                    old[a] = idx[t];
                }
                let o: usize = old.iter().zip(&old_strides).map(|(i, s)| i * s).sum();
                self.data[o].clone()
            })
            .collect();
        Array { dims, data }
    }

    /// Keeps, along `axis`, only the positions `start..start + len`.
    pub fn narrow(&self, axis: usize, start: usize, len: usize) -> Self {
        let mut dims = self.dims.clone();
        dims[axis] = len;
        let mut src = vec![0usize; self.dims.len()];
        let data = indices(&dims)
            .map(|idx| {
                src.copy_from_slice(&idx);
                src[axis] += start;
                self.get(&src).clone()
            })
            .collect();
        Array { dims, data }
    }

    /// Fixes `axis` at position `i`, removing it.
    pub fn take(&self, axis: usize, i: usize) -> Self {
        let n = self.narrow(axis, i, 1);
        let mut dims = n.dims;
        dims.remove(axis);
        Array { dims, data: n.data }
    }
}

impl<E: Clone + PartialEq + std::fmt::Debug> Array<E> {
    pub fn zeros<R: Ring<Elem = E>>(ring: &R, dims: Vec<usize>) -> Self {
        Self::filled(dims, ring.zero())
    }

    pub fn is_zero_in<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    pub fn add_in<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(format!("{:?} + {:?}", self.dims, other.dims)));
        }
        Ok(Array {
            dims: self.dims.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| ring.add(a, b)).collect(),
        })
    }

    pub fn scale_in<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        self.map(|x| ring.mul(x, c))
    }

    /// Outer product; dims are concatenated.
    pub fn outer<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for a in &self.data {
            for b in &other.data {
                data.push(ring.mul(a, b));
            }
        }
        Array { dims, data }
    }

    /// Contracts the last axis with the rows of `m` (given as `rows x cols`, row-major):
    /// `out[.., l] = sum_t self[.., t] m[t][l]`.
    pub fn contract_last<R: Ring<Elem = E>>(&self, ring: &R, m: &[E], cols: usize) -> Result<Self> {
        let n = *self.dims.last().ok_or_else(|| Error::ShapeMismatch("contract a scalar".into()))?;
        if m.len() != n * cols {
            return Err(Error::ShapeMismatch("contraction length".into()));
        }
        let outer = self.data.len() / n.max(1);
        let mut dims = self.dims.clone();
        *dims.last_mut().unwrap() = cols;
        let mut data = Vec::with_capacity(outer * cols);
        for o in 0..outer {
            let row = &self.data[o * n..(o + 1) * n];
            for l in 0..cols {
                let mut acc = ring.zero();
                for (t, x) in row.iter().enumerate() {
                    let y = &m[t * cols + l];
                    if ring.is_zero(x) || ring.is_zero(y) {
                        continue;
                    }
                    acc = ring.add(&acc, &ring.mul(x, y));
                }
                data.push(acc);
            }
        }
        Ok(Array { dims, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_order_is_row_major() {
        let all: Vec<_> = indices(&[2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        assert_eq!(indices(&[]).count(), 1);
        assert_eq!(indices(&[2, 0]).count(), 0);
    }

    #[test]
    fn permute_and_narrow() {
        let a = Array::from_fn(vec![2, 3], |i| 10 * i[0] + i[1]);
        let t = a.permute_axes(&[1, 0]);
        assert_eq!(t.dims(), &[3, 2]);
        assert_eq!(*t.get(&[2, 1]), 12);
        let n = a.narrow(1, 1, 2);
        assert_eq!(n.data(), &[1, 2, 11, 12]);
        assert_eq!(a.take(0, 1).data(), &[10, 11, 12]);
    }
}
