//! Rational points of the kernel variety `{x : T̃(x) = 0}` of a slicing.
//!
//! Counting never walks the whole of `F^N`. One block of coordinates (the
//! largest) enters every slice form linearly, so for each assignment of the
//! remaining blocks (a fibre) the kernel is the null space of an `m x n_L`
//! matrix and contributes `Q^{n_L - rank}` points. Work budgets count fibres
//! plus emitted points.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::{find_pivot, nullspace, rank, rank_factorize, projection_from_factor, Matrix, PivotSelection};
use crate::poly::{MultiPoly, RatFunc, RatFuncField, RationalMap};
use crate::tensor::{BlockLayout, Tensor};

/// Default work budget for enumeration.
pub const DEFAULT_BUDGET: u128 = 50_000_000;

/// Kernel of one slicing, with `T` already lifted to the field being counted over.
struct KernelProbe {
    tensor: Tensor,
    layout: BlockLayout,
    /// Position in `layout.blocks` of the block solved for linearly.
    linear: usize,
    entries: Vec<(Vec<usize>, FieldElement)>,
    elems: Vec<FieldElement>,
}

impl KernelProbe {
    fn new(t: &Tensor, axis: usize, ext: u32) -> Result<Self> {
        if t.order() < 2 {
            return Err(Error::Invalid("kernel varieties need tensors of order at least 2".into()));
        }
        if ext == 0 {
            return Err(Error::Invalid("extension degree must be at least 1".into()));
        }
        let tensor = if ext == 1 {
            t.clone()
        } else {
            let big = FieldCtx::new(t.ctx().p(), t.ctx().e() * ext)?;
            t.embed(&t.ctx().embed_into(&big)?)
        };
        let layout = BlockLayout::new(t.dims(), axis)?;
        let mut linear = 0;
        for (i, b) in layout.blocks.iter().enumerate() {
            if b.2 > layout.blocks[linear].2 {
                linear = i;
            }
        }
        let entries = tensor.nonzero_entries();
        let elems = tensor.ctx().elements()?;
        Ok(KernelProbe {
            tensor,
            layout,
            linear,
            entries,
            elems,
        })
    }

    fn ctx(&self) -> &FieldCtx {
        self.tensor.ctx()
    }

    fn q(&self) -> u128 {
        self.ctx().q() as u128
    }

    fn linear_len(&self) -> usize {
        self.layout.blocks[self.linear].2
    }

    fn fibre_vars(&self) -> usize {
        self.layout.nvars - self.linear_len()
    }

    fn fibre_count(&self) -> Result<u128> {
        checked_pow(self.q(), self.fibre_vars())
    }

    /// Assignment of the non-linear blocks for fibre number `f`, written into a
    /// full-length point (the linear block left at zero).
    fn fibre_point(&self, mut f: u128) -> Vec<FieldElement> {
        let mut x = vec![self.ctx().zero(); self.layout.nvars];
        let q = self.q();
        for (bi, &(_, off, len)) in self.layout.blocks.iter().enumerate().rev() {
            if bi == self.linear {
                continue;
            }
            for c in (off..off + len).rev() {
                x[c] = self.elems[(f % q) as usize];
                f /= q;
            }
        }
        x
    }

    /// The `m x n_L` matrix of the slice forms restricted to the fibre through `x`.
    fn fibre_matrix(&self, x: &[FieldElement]) -> Matrix<FieldElement> {
        let ctx = self.ctx();
        let axis = self.layout.axis;
        let m = self.tensor.dims()[axis];
        let (lin_axis, _, lin_len) = self.layout.blocks[self.linear];
        let mut mat = Matrix::zeros(ctx, m, lin_len);
        'entries: for (idx, v) in &self.entries {
            let mut c = *v;
            for (bi, &(a, off, _)) in self.layout.blocks.iter().enumerate() {
                if bi == self.linear {
                    continue;
                }
                let y = x[off + idx[a]];
                if ctx.is_zero(y) {
                    continue 'entries;
                }
                c = ctx.mul(c, y);
            }
            let (i, j) = (idx[axis], idx[lin_axis]);
            let cur = *mat.get(i, j);
            mat.set(i, j, ctx.add(cur, c));
        }
        mat
    }

    fn count(&self, budget: u128) -> Result<u128> {
        let fibres = self.fibre_count()?;
        if fibres > budget {
            return Err(Error::BudgetExceeded { needed: fibres, budget });
        }
        let n_lin = self.linear_len();
        let q = self.q();
        let ctx = self.ctx();
        let total: u128 = (0..fibres as u64)
            .into_par_iter()
            .map(|f| {
                let x = self.fibre_point(f as u128);
                let r = rank(ctx, &self.fibre_matrix(&x));
                q.pow((n_lin - r) as u32)
            })
            .sum();
        Ok(total)
    }

    fn points(&self, budget: u128) -> Result<Vec<Vec<FieldElement>>> {
        let count = self.count(budget)?;
        let fibres = self.fibre_count()?;
        let needed = fibres + count;
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let (_, lin_off, lin_len) = self.layout.blocks[self.linear];
        let ctx = self.ctx();
        let q = self.q();
        let per_fibre: Vec<Vec<Vec<FieldElement>>> = (0..fibres as u64)
            .into_par_iter()
            .map(|f| {
                let base = self.fibre_point(f as u128);
                let basis = nullspace(ctx, &self.fibre_matrix(&base));
                let combos = q.pow(basis.len() as u32);
                (0..combos)
                    .map(|mut c| {
                        let mut coeffs = vec![ctx.zero(); basis.len()];
                        for slot in coeffs.iter_mut().rev() {
                            *slot = self.elems[(c % q) as usize];
                            c /= q;
                        }
                        let mut x = base.clone();
                        for (b, &a) in basis.iter().zip(&coeffs) {
                            if ctx.is_zero(a) {
                                continue;
                            }
                            for t in 0..lin_len {
                                x[lin_off + t] = ctx.add(x[lin_off + t], ctx.mul(a, b[t]));
                            }
                        }
                        x
                    })
                    .collect()
            })
            .collect();
        Ok(per_fibre.into_iter().flatten().collect())
    }
}

fn checked_pow(q: u128, n: usize) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(q).ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            budget: 0,
        })?;
    }
    Ok(acc)
}

/// Kernel points over `F_{q^ext}` in deterministic order, together with the field they live in.
#[derive(Clone, Debug)]
pub struct KernelPoints {
    pub ctx: FieldCtx,
    pub points: Vec<Vec<FieldElement>>,
}

pub fn enumerate_kernel(t: &Tensor, axis: usize, ext: u32, budget: u128) -> Result<KernelPoints> {
    let probe = KernelProbe::new(t, axis, ext)?;
    Ok(KernelPoints {
        ctx: probe.ctx().clone(),
        points: probe.points(budget)?,
    })
}

/// `|ker T̃(F_{q^ext})|` without listing the points.
pub fn kernel_count(t: &Tensor, axis: usize, ext: u32, budget: u128) -> Result<u128> {
    KernelProbe::new(t, axis, ext)?.count(budget)
}

/// Analytic rank in exact form: `N - log_q(count)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ARValue {
    pub n: usize,
    pub count: u128,
    pub q: u64,
}

impl ARValue {
    /// Floating-point value, for display only.
    pub fn value(&self) -> f64 {
        self.n as f64 - (self.count as f64).ln() / (self.q as f64).ln()
    }

    /// `AR <= c`, decided as `count >= q^{N - c}`.
    pub fn le(&self, c: u64) -> bool {
        if c as usize >= self.n {
            return true;
        }
        BigUint::from(self.count) >= BigUint::from(self.q).pow((self.n - c as usize) as u32)
    }

    /// `AR <= (c + 1) / d`-style rational bounds: `d * AR <= c`, i.e. `count^d >= q^{dN - c}`.
    pub fn scaled_le(&self, d: u64, c: u64) -> bool {
        let lhs_exp = d as u128 * self.n as u128;
        if c as u128 >= lhs_exp {
            return true;
        }
        BigUint::from(self.count).pow(d as u32) >= BigUint::from(self.q).pow((lhs_exp - c as u128) as u32)
    }

    /// Exact comparison of two values over the same field.
    pub fn same_value(&self, other: &ARValue) -> bool {
        self.q == other.q
            && BigUint::from(self.q).pow(self.n as u32) * BigUint::from(other.count)
                == BigUint::from(other.q).pow(other.n as u32) * BigUint::from(self.count)
    }

    pub fn to_json(&self) -> Value {
        json!({"N": self.n, "count": self.count.to_string(), "q": self.q, "ar": self.value()})
    }
}

pub fn analytic_rank(t: &Tensor, axis: usize, budget: u128) -> Result<ARValue> {
    let probe = KernelProbe::new(t, axis, 1)?;
    Ok(ARValue {
        n: probe.layout.nvars,
        count: probe.count(budget)?,
        q: t.ctx().q(),
    })
}

/// Nearest integer to `log_Q(count)`, decided exactly: `d` is the largest
/// integer with `count^2 >= Q^{2d - 1}`.
pub fn round_log(count: u128, q: u64) -> u32 {
    let c2 = BigUint::from(count).pow(2);
    let qb = BigUint::from(q);
    let mut d = 0u32;
    while c2 >= qb.pow(2 * (d + 1) - 1) {
        d += 1;
    }
    d
}

/// A kernel point and the rank of the Jacobian of the slicing there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub point: Vec<FieldElement>,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct KernelReport {
    pub axis: usize,
    pub n: usize,
    pub q: u64,
    /// `(e, |ker T̃(F_{q^e})|)` for `e = 1..=E`.
    pub counts: Vec<(u32, u128)>,
    /// Rounded dimension estimate per extension degree.
    pub estimates: Vec<u32>,
    pub dim_est: u32,
    pub gr_est: u32,
    pub candidates: Vec<Candidate>,
    /// The two largest extensions gave different estimates.
    pub unstable: bool,
}

impl KernelReport {
    /// `Err(Unstable)` when the estimate did not settle.
    pub fn stable_gr(&self) -> Result<u32> {
        if self.unstable {
            Err(Error::Unstable(self.estimates.clone()))
        } else {
            Ok(self.gr_est)
        }
    }

    pub fn to_json(&self, ctx: &FieldCtx) -> Value {
        let counts: serde_json::Map<String, Value> = self
            .counts
            .iter()
            .map(|(e, c)| (e.to_string(), Value::from(c.to_string())))
            .collect();
        json!({
            "axis": self.axis + 1,
            "N": self.n,
            "q": self.q,
            "counts": counts,
            "dim_est": self.dim_est,
            "gr_est": self.gr_est,
            "candidates": self.candidates.iter().map(|c| json!({
                "point": c.point.iter().map(|&x| ctx.to_json(x)).collect::<Vec<_>>(),
                "rank": c.rank,
            })).collect::<Vec<_>>(),
            "unstable": self.unstable,
        })
    }
}

/// Counts over `F_{q^e}` for `e = 1..=max_ext` and rounds `log_{q^E}` of the
/// last count. The report carries up to `max_candidates` regular-point
/// candidates over the base field.
pub fn estimate_dim(t: &Tensor, axis: usize, max_ext: u32, budget: u128, max_candidates: usize) -> Result<KernelReport> {
    if max_ext == 0 {
        return Err(Error::Invalid("at least one extension degree is needed".into()));
    }
    let layout = BlockLayout::new(t.dims(), axis)?;
    let q = t.ctx().q();
    let mut counts = Vec::new();
    let mut estimates = Vec::new();
    for e in 1..=max_ext {
        let c = kernel_count(t, axis, e, budget)?;
        counts.push((e, c));
        estimates.push(round_log(c, q.pow(e)));
    }
    let dim_est = *estimates.last().unwrap();
    let unstable = estimates.len() >= 2 && estimates[estimates.len() - 2] != dim_est;
    let candidates = match find_regular_point(t, axis, budget) {
        Ok(mut c) => {
            c.truncate(max_candidates);
            c
        }
        Err(Error::NoPoint) => Vec::new(),
        Err(e) => return Err(e),
    };
    Ok(KernelReport {
        axis,
        n: layout.nvars,
        q,
        counts,
        estimates,
        dim_est,
        gr_est: (layout.nvars as u32).saturating_sub(dim_est),
        candidates,
        unstable,
    })
}

/// Jacobian of the slicing at `x`, an `m x N` matrix, computed straight from the entries of `T`.
pub fn slice_jacobian_at(t: &Tensor, axis: usize, x: &[FieldElement]) -> Result<Matrix<FieldElement>> {
    let layout = BlockLayout::new(t.dims(), axis)?;
    if x.len() != layout.nvars {
        return Err(Error::ShapeMismatch(format!("point of length {} for N = {}", x.len(), layout.nvars)));
    }
    let ctx = t.ctx();
    let mut j = Matrix::zeros(ctx, t.dims()[axis], layout.nvars);
    for (idx, v) in t.nonzero_entries() {
        for (bi, &(a, off, _)) in layout.blocks.iter().enumerate() {
            let mut c = v;
            for (bj, &(a2, off2, _)) in layout.blocks.iter().enumerate() {
                if bj != bi {
                    c = ctx.mul(c, x[off2 + idx[a2]]);
                }
            }
            let col = off + idx[a];
            let cur = *j.get(idx[axis], col);
            j.set(idx[axis], col, ctx.add(cur, c));
        }
    }
    Ok(j)
}

/// Kernel points over the base field sorted by Jacobian rank, highest first,
/// ties in enumeration order.
pub fn find_regular_point(t: &Tensor, axis: usize, budget: u128) -> Result<Vec<Candidate>> {
    let pts = enumerate_kernel(t, axis, 1, budget)?;
    let ctx = t.ctx();
    let mut cands: Vec<Candidate> = pts
        .points
        .into_par_iter()
        .map(|point| {
            let jac = slice_jacobian_at(t, axis, &point)?;
            Ok(Candidate {
                rank: rank(ctx, &jac),
                point,
            })
        })
        .collect::<Result<_>>()?;
    cands.sort_by_key(|c| std::cmp::Reverse(c.rank));
    let only_origin = cands.len() == 1 && cands[0].point.iter().all(|&x| ctx.is_zero(x));
    if only_origin && cands[0].rank == 0 && !t.is_zero() {
        return Err(Error::NoPoint);
    }
    Ok(cands)
}

/// Symbolic data behind the tangent projection at a point: the Jacobian `J`
/// of the forms, a pivot of `J(x0)`, and the right factor `A2` of the rational
/// rank factorization of `J`.
#[derive(Clone, Debug)]
pub struct TangentProjection {
    pub ctx: FieldCtx,
    pub jacobian: Matrix<RatFunc>,
    pub rank: usize,
    pub pivot: PivotSelection,
    pub left: Matrix<RatFunc>,
    pub right: Matrix<RatFunc>,
    pub projection: Matrix<RatFunc>,
}

impl TangentProjection {
    pub fn new(forms: &[MultiPoly], x0: &[FieldElement]) -> Result<Self> {
        let first = forms.first().ok_or_else(|| Error::Invalid("no forms given".into()))?;
        let (ctx, n) = (first.ctx().clone(), first.nvars());
        let map = RationalMap::from_polys(n, vec![forms.len()], forms.to_vec())?;
        let comps = map.total_derivative().into_components();
        let jacobian = Matrix::from_vec(forms.len(), n, comps)?;
        let at = jacobian.try_map(|f| f.eval(x0))?;
        let r = rank(&ctx, &at);
        let pivot = find_pivot(&ctx, &at, r)?;
        let k = RatFuncField::new(&ctx, n);
        let (left, right) = rank_factorize(&k, &jacobian, r, &pivot)?;
        let projection = projection_from_factor(&k, &right, &pivot.cols);
        Ok(TangentProjection {
            ctx,
            jacobian,
            rank: r,
            pivot,
            left,
            right,
            projection,
        })
    }
}

/// `P̂`: the `N x N` rational projection onto the kernel of the Jacobian, defined at `x0`.
pub fn tangent_projection_map(forms: &[MultiPoly], x0: &[FieldElement]) -> Result<RationalMap> {
    let tp = TangentProjection::new(forms, x0)?;
    let n = tp.projection.rows();
    RationalMap::new(n, vec![n, n], tp.projection.data().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mat_mul, mat_sub, is_zero_matrix};
    use crate::tensor::{slice, w_tensor};

    #[test]
    fn w_counts() {
        for p in [2u64, 3, 5] {
            let f = FieldCtx::prime(p).unwrap();
            let w = w_tensor(&f);
            let expect = 3 * (p as u128).pow(2) - 2 * p as u128;
            for axis in 0..3 {
                assert_eq!(kernel_count(&w, axis, 1, DEFAULT_BUDGET).unwrap(), expect);
            }
            let pts = enumerate_kernel(&w, 2, 1, DEFAULT_BUDGET).unwrap();
            assert_eq!(pts.points.len() as u128, expect);
        }
    }

    #[test]
    fn w_counts_over_extensions() {
        let f = FieldCtx::prime(2).unwrap();
        let w = w_tensor(&f);
        for e in 1..=4u32 {
            let q = 2u128.pow(e);
            assert_eq!(kernel_count(&w, 2, e, DEFAULT_BUDGET).unwrap(), 3 * q * q - 2 * q);
        }
    }

    #[test]
    fn identity_matrix_and_zero() {
        let f = FieldCtx::prime(5).unwrap();
        let id = Tensor::from_entries(&f, vec![3, 3], (0..3).map(|i| (vec![i, i], f.one()))).unwrap();
        let ar = analytic_rank(&id, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!((ar.n, ar.count), (3, 1));
        assert!(ar.le(3) && !ar.le(2));
        let z = Tensor::zeros(&f, vec![2, 2, 2]);
        let ar = analytic_rank(&z, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(ar.count, 625);
        assert!(ar.le(0));
        let rep = estimate_dim(&z, 0, 2, DEFAULT_BUDGET, 4).unwrap();
        assert_eq!((rep.dim_est, rep.gr_est, rep.unstable), (4, 0, false));
    }

    #[test]
    fn w_dimension_estimate() {
        let f = FieldCtx::prime(3).unwrap();
        let rep = estimate_dim(&w_tensor(&f), 2, 3, DEFAULT_BUDGET, 8).unwrap();
        assert_eq!(rep.estimates, vec![3, 2, 2]);
        assert_eq!((rep.dim_est, rep.gr_est, rep.unstable), (2, 2, false));
        assert_eq!(rep.counts[0], (1, 21));
    }

    #[test]
    fn round_log_boundaries() {
        assert_eq!(round_log(1, 5), 0);
        assert_eq!(round_log(2, 5), 0);
        assert_eq!(round_log(3, 5), 1);
        assert_eq!(round_log(65, 5), 3);
        assert_eq!(round_log(55, 5), 2);
        assert_eq!(round_log(56, 5), 3);
    }

    #[test]
    fn w_regular_points() {
        let f = FieldCtx::prime(5).unwrap();
        let w = w_tensor(&f);
        let c = find_regular_point(&w, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.len(), 65);
        assert_eq!(c[0].rank, 2);
        assert!(c.windows(2).all(|p| p[0].rank >= p[1].rank));
    }

    #[test]
    fn tangent_projection_examples() {
        let f = FieldCtx::prime(5).unwrap();
        // single coordinate form x1 in three variables
        let forms = vec![MultiPoly::var(&f, 3, 0)];
        let x0 = vec![f.one(), f.zero(), f.from_int(2)];
        let p = tangent_projection_map(&forms, &x0).unwrap();
        let vals = p.eval(&x0).unwrap();
        let expect: Vec<_> = [0, 0, 0, 0, 1, 0, 0, 0, 1].iter().map(|&v| f.from_int(v)).collect();
        assert_eq!(vals, expect);

        let w = w_tensor(&f);
        let forms = slice(&w, 2).unwrap();
        let x0 = find_regular_point(&w, 2, DEFAULT_BUDGET).unwrap()[0].point.clone();
        let tp = TangentProjection::new(&forms, &x0).unwrap();
        let pm = tp.projection.try_map(|r| r.eval(&x0)).unwrap();
        let jm = tp.jacobian.try_map(|r| r.eval(&x0)).unwrap();
        assert!(is_zero_matrix(&f, &mat_sub(&f, &mat_mul(&f, &pm, &pm).unwrap(), &pm).unwrap()));
        assert!(is_zero_matrix(&f, &mat_mul(&f, &jm, &pm).unwrap()));
        let id = Matrix::identity(&f, 4);
        assert_eq!(rank(&f, &mat_sub(&f, &id, &pm).unwrap()), 2);
    }
}
