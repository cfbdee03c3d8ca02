//! Constructive partition-rank decompositions.
//!
//! The first total derivative of the slicing `T̃` factors rationally through
//! the adjugate of a pivot block (the base case). Each further derivative is
//! pushed through the product rule for the bilinear pairing, projected onto the
//! tangent space with `P̂`, and the part lost to the projection is added back
//! from `Q = I - P̂`. After `k - 2` steps the map evaluates at the chosen
//! kernel point to an element of the constructing space whose pairing is the
//! constant tensor `D^{k-1} T̃`; restricting every derivative axis to its own
//! block of variables turns that into a decomposition of `T`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::PivotSelection;
use crate::poly::{MultiPoly, RatFunc, RatFuncField, RationalMap};
use crate::tensor::{
    constructing_to_decomposition, ip_apply, slice, verify_decomposition, Array, BlockLayout, Constructing,
    ConstructingElement, PRDecomposition, PRTerm, Partition, PartitionBlock, Tensor,
};
use crate::variety::{find_regular_point, slice_jacobian_at, Candidate, TangentProjection, DEFAULT_BUDGET};

/// Default ceiling on the total degree of any numerator or denominator.
pub const DEFAULT_DEGREE_CEILING: u32 = 512;
pub const DEFAULT_MAX_CANDIDATES: usize = 64;

/// Rational constructing map `F^N ⇢ C_r(F^m ⊗ (F^N)^{⊗(order-1)})`.
#[derive(Clone, Debug)]
pub struct ConstructingMap {
    ctx: FieldCtx,
    nvars: usize,
    inner: Constructing<RatFunc>,
    denominators: Vec<MultiPoly>,
}

impl ConstructingMap {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn width(&self) -> usize {
        self.inner.width()
    }

    pub fn order(&self) -> usize {
        self.inner.dims().len()
    }

    pub fn dims(&self) -> &[usize] {
        self.inner.dims()
    }

    pub fn inner(&self) -> &Constructing<RatFunc> {
        &self.inner
    }

    /// Denominator bases seen while building the map; the map is defined where none vanishes.
    pub fn denominators(&self) -> &[MultiPoly] {
        &self.denominators
    }

    pub fn max_degree(&self) -> u32 {
        self.inner
            .blocks()
            .iter()
            .flat_map(|b| b.pairs.iter())
            .flat_map(|(u, v)| u.data().iter().chain(v.data()))
            .map(RatFunc::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn in_domain(&self, x: &[FieldElement]) -> bool {
        self.denominators.iter().all(|d| !self.ctx.is_zero(d.eval(x)))
    }
}

/// `D^a T̃` as a constant tensor in `F^m ⊗ (F^N)^{⊗a}`, by symbolic
/// differentiation of the slice forms. Only `a >= k - 1` is constant.
pub fn derivative_tensor(t: &Tensor, axis: usize, a: usize) -> Result<Tensor> {
    if a + 1 < t.order() {
        return Err(Error::Invalid(format!(
            "derivative of order {a} of a degree {} slicing is not constant",
            t.order() - 1
        )));
    }
    let layout = BlockLayout::new(t.dims(), axis)?;
    derivative_tensor_at(t, axis, a, &vec![t.ctx().zero(); layout.nvars])
}

/// `D^a T̃(x)` for any order `a`.
pub fn derivative_tensor_at(t: &Tensor, axis: usize, a: usize, x: &[FieldElement]) -> Result<Tensor> {
    let forms = slice(t, axis)?;
    let n = BlockLayout::new(t.dims(), axis)?.nvars;
    let map = RationalMap::from_polys(n, vec![forms.len()], forms)?.higher_derivative(a);
    let dims = map.shape().to_vec();
    let vals = map.eval(x)?;
    Ok(Tensor::from_array(t.ctx(), Array::new(dims, vals)?))
}

fn column(m: &crate::linalg::Matrix<RatFunc>, j: usize) -> Array<RatFunc> {
    Array::new(vec![m.rows()], m.column(j)).expect("column length")
}

fn row(m: &crate::linalg::Matrix<RatFunc>, i: usize) -> Array<RatFunc> {
    Array::new(vec![m.cols()], m.row(i).to_vec()).expect("row length")
}

/// Width-`r` map of order 2 whose pairing is `D T̃` near `x0`: pairs are the
/// columns of the left and rows of the right rational rank factor.
pub fn base_case(tp: &TangentProjection) -> Result<ConstructingMap> {
    let (m, n) = (tp.jacobian.rows(), tp.jacobian.cols());
    let r = tp.rank;
    let pairs = (0..r).map(|i| (column(&tp.left, i), row(&tp.right, i))).collect();
    let blocks = vec![PartitionBlock {
        partition: Partition::new(2, &[0])?,
        pairs,
    }];
    let inner = Constructing::new(vec![m, n], r, blocks)?;
    Ok(ConstructingMap {
        ctx: tp.ctx.clone(),
        nvars: n,
        inner,
        denominators: pivot_denominators(tp),
    })
}

fn pivot_denominators(tp: &TangentProjection) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = Vec::new();
    for r in tp.right.data() {
        if r.den_exp() > 0 && !out.contains(r.den_base()) {
            out.push(r.den_base().clone());
        }
    }
    out
}

/// Total derivative of a rational array, new axis last, followed by the
/// projection: `out[.., l] = ∂_l u - sum_s ∂_{J_s} u · A2[s, l]`.
fn derive_and_project(u: &Array<RatFunc>, tp: &TangentProjection, ring: &RatFuncField) -> Array<RatFunc> {
    let n = tp.jacobian.cols();
    let mut dims = u.dims().to_vec();
    dims.push(n);
    let cols = &tp.pivot.cols;
    let mut data = Vec::with_capacity(u.len() * n);
    for entry in u.data() {
        let grad: Vec<RatFunc> = (0..n).map(|l| entry.partial(l)).collect();
        for l in 0..n {
            if cols.contains(&l) {
                data.push(RatFunc::zero(&ring.ctx, ring.nvars));
                continue;
            }
            let mut acc = grad[l].clone();
            for (s, &js) in cols.iter().enumerate() {
                let c = tp.right.get(s, l);
                if grad[js].is_zero() || c.is_zero() {
                    continue;
                }
                acc = acc.sub(&grad[js].mul(c));
            }
            data.push(acc);
        }
    }
    Array::new(dims, data).expect("derived shape")
}

fn partial_array(f: &Array<RatFunc>, j: usize) -> Array<RatFunc> {
    f.map(|c| c.partial(j))
}

/// One application of the product rule plus tangent correction: from `H`
/// with `IP∘H = f` on the variety to `H'` with `IP∘H' = Df`. The result has
/// order one higher and width `max(width(H), codim)`.
pub fn induction_step(
    h: &ConstructingMap,
    tp: &TangentProjection,
    f: &RationalMap,
    codim: usize,
    degree_ceiling: u32,
) -> Result<ConstructingMap> {
    let order = h.order();
    if f.shape() != h.dims() || f.nvars() != h.nvars {
        return Err(Error::ShapeMismatch(format!(
            "map of shape {:?} for a constructing map over {:?}",
            f.shape(),
            h.dims()
        )));
    }
    if codim < tp.rank {
        return Err(Error::ShapeMismatch(format!("codimension {codim} below the rank {} of the projection", tp.rank)));
    }
    let n = h.nvars;
    let ring = RatFuncField::new(&h.ctx, n);
    let width = h.width().max(codim);
    let mut dims = h.dims().to_vec();
    dims.push(n);
    let k = order + 1;
    let f_arr = Array::new(f.shape().to_vec(), f.components().to_vec())?;

    let mut blocks = Vec::with_capacity(Partition::count(k));
    for p in Partition::all(k) {
        let side = p.side();
        let mut pairs: Vec<(Array<RatFunc>, Array<RatFunc>)> = if side.len() == order {
            // remainder Df·Q: column J_s of Df against row J_s of Q
            (0..tp.rank)
                .map(|s| (partial_array(&f_arr, tp.pivot.cols[s]), row(&tp.right, s)))
                .collect()
        } else if !p.contains(order - 1) {
            // u keeps its axes, v is differentiated
            let old = Partition::new(order, &side)?;
            let blk = h.inner.block(&old).expect("every partition present");
            blk.pairs.iter().map(|(u, v)| (u.clone(), derive_and_project(v, tp, &ring))).collect()
        } else {
            // side is the complement of an old partition; u is differentiated
            let old_side: Vec<usize> = (0..order).filter(|a| !side.contains(a)).collect();
            let old = Partition::new(order, &old_side)?;
            let blk = h.inner.block(&old).expect("every partition present");
            blk.pairs.iter().map(|(u, v)| (v.clone(), derive_and_project(u, tp, &ring))).collect()
        };
        let (sd, cd) = (p.side_dims(&dims), p.complement_dims(&dims));
        while pairs.len() < width {
            pairs.push((Array::filled(sd.clone(), ring_zero(&ring)), Array::filled(cd.clone(), ring_zero(&ring))));
        }
        blocks.push(PartitionBlock { partition: p, pairs });
    }
    let out = ConstructingMap {
        ctx: h.ctx.clone(),
        nvars: n,
        inner: Constructing::new(dims, width, blocks)?,
        denominators: merge_denominators(&h.denominators, &pivot_denominators(tp)),
    };
    let degree = out.max_degree();
    if degree > degree_ceiling {
        return Err(Error::DegreeBlowup {
            degree,
            ceiling: degree_ceiling,
        });
    }
    Ok(out)
}

fn ring_zero(ring: &RatFuncField) -> RatFunc {
    RatFunc::zero(&ring.ctx, ring.nvars)
}

fn merge_denominators(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut out = a.to_vec();
    for d in b {
        if !out.contains(d) {
            out.push(d.clone());
        }
    }
    out
}

/// `steps` induction steps, replacing `f` by its total derivative each time.
/// Returns the final map together with the last `f` (so `IP∘H = f` holds on the variety).
pub fn iterate(
    h: ConstructingMap,
    tp: &TangentProjection,
    f: RationalMap,
    steps: usize,
    codim: usize,
    degree_ceiling: u32,
) -> Result<(ConstructingMap, RationalMap)> {
    let mut h = h;
    let mut f = f;
    for _ in 0..steps {
        h = induction_step(&h, tp, &f, codim, degree_ceiling)?;
        f = f.total_derivative();
    }
    Ok((h, f))
}

pub fn evaluate_constructing(h: &ConstructingMap, x0: &[FieldElement]) -> Result<ConstructingElement> {
    if !h.in_domain(x0) {
        return Err(Error::OutsideDomain);
    }
    h.inner.map(|c| c.eval(x0))
}

/// Maps a decomposition over `F^m ⊗ (F^N)^{⊗(k-1)}` back to the original
/// axes: derivative axis `t` keeps only the coordinates of block `t`.
pub fn restrict_to_blocks(big: &PRDecomposition, layout: &BlockLayout, ctx: &FieldCtx) -> Result<PRDecomposition> {
    let k = layout.blocks.len() + 1;
    if big.dims.len() != k || big.dims[1..].iter().any(|&d| d != layout.nvars) {
        return Err(Error::ShapeMismatch(format!("{:?} is not a derivative tensor space for this layout", big.dims)));
    }
    let orig_axis = |t: usize| if t == 0 { layout.axis } else { layout.blocks[t - 1].0 };
    let mut dims = vec![0usize; k];
    dims[layout.axis] = big.dims[0];
    for &(a, _, len) in &layout.blocks {
        dims[a] = len;
    }
    let restrict = |arr: &Array<FieldElement>, axes: &[usize]| -> (Vec<usize>, Array<FieldElement>) {
        let mut out = arr.clone();
        for (pos, &t) in axes.iter().enumerate() {
            if t > 0 {
                let (_, off, len) = layout.blocks[t - 1];
                out = out.narrow(pos, off, len);
            }
        }
        (axes.iter().map(|&t| orig_axis(t)).collect(), out)
    };
    let mut terms = Vec::new();
    for term in &big.terms {
        let (mut su, mut u) = restrict(term.u.array(), &term.partition.side());
        let (mut sv, mut v) = restrict(term.v.array(), &term.partition.complement());
        if su.contains(&(k - 1)) {
            std::mem::swap(&mut su, &mut sv);
            std::mem::swap(&mut u, &mut v);
        }
        let sorted = |axes: &[usize], arr: Array<FieldElement>| {
            let mut perm: Vec<usize> = (0..axes.len()).collect();
            perm.sort_by_key(|&i| axes[i]);
            arr.permute_axes(&perm)
        };
        let u = sorted(&su, u);
        let v = sorted(&sv, v);
        if u.is_zero_in(ctx) || v.is_zero_in(ctx) {
            continue;
        }
        terms.push(PRTerm::new(
            Partition::new(k, &su)?,
            Tensor::from_array(ctx, u),
            Tensor::from_array(ctx, v),
        ));
    }
    Ok(PRDecomposition { dims, terms })
}

/// One term per nonzero entry, each over the partition `{first axis}`.
pub fn entrywise_decomposition(t: &Tensor) -> Result<PRDecomposition> {
    let ctx = t.ctx();
    let k = t.order();
    let p = Partition::new(k, &[0])?;
    let mut terms = Vec::new();
    for (idx, v) in t.nonzero_entries() {
        let u = Tensor::from_entries(ctx, vec![t.dims()[0]], [(vec![idx[0]], v)])?;
        let rest = Tensor::basis(ctx, t.dims()[1..].to_vec(), &idx[1..])?;
        terms.push(PRTerm::new(p, u, rest));
    }
    Ok(PRDecomposition {
        dims: t.dims().to_vec(),
        terms,
    })
}

#[derive(Clone, Debug)]
pub struct DecomposeConfig {
    /// Slicing axis, 0-based; the last axis when `None`.
    pub axis: Option<usize>,
    pub max_candidates: usize,
    pub degree_ceiling: u32,
    pub budget: u128,
    /// Seed for the evaluation spot-checks.
    pub seed: u64,
    /// Number of extra kernel points at which the base case is spot-checked.
    pub spot_checks: usize,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        DecomposeConfig {
            axis: None,
            max_candidates: DEFAULT_MAX_CANDIDATES,
            degree_ceiling: DEFAULT_DEGREE_CEILING,
            budget: DEFAULT_BUDGET,
            seed: 0,
            spot_checks: 4,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub candidates_tried: usize,
    /// `(candidate index, reason)` for every failed attempt.
    pub failures: Vec<(usize, String)>,
    pub max_degree: u32,
    pub denominators: Vec<String>,
    pub seed: u64,
    pub spot_checks_passed: usize,
    pub spot_checks_failed: usize,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub ctx: FieldCtx,
    pub tensor_sha256: String,
    pub axis: usize,
    pub x0: Vec<FieldElement>,
    pub r_used: usize,
    pub decomposition: PRDecomposition,
    pub bound: usize,
    pub verified: bool,
    pub diagnostics: Diagnostics,
}

impl Certificate {
    pub fn num_terms(&self) -> usize {
        self.decomposition.len()
    }

    /// The certificate itself when verified, otherwise the failure reasons.
    pub fn into_verified(self) -> Result<Certificate> {
        if self.verified {
            Ok(self)
        } else {
            Err(Error::AllCandidatesFailed(
                self.diagnostics.failures.iter().map(|(i, r)| format!("candidate {}: {r}", i + 1)).collect(),
            ))
        }
    }

    pub fn to_json(&self) -> Value {
        let d = &self.diagnostics;
        json!({
            "dims": self.decomposition.dims,
            "field": {"p": self.ctx.p(), "e": self.ctx.e()},
            "terms": self.decomposition.terms_to_json(),
            "verified": self.verified,
            "tensor_sha256": self.tensor_sha256,
            "x0": self.x0.iter().map(|&x| self.ctx.to_json(x)).collect::<Vec<_>>(),
            "axis": self.axis + 1,
            "r_used": self.r_used,
            "bound": self.bound,
            "diagnostics": {
                "candidates_tried": d.candidates_tried,
                "failures": d.failures.iter().map(|(i, r)| json!({"candidate": i + 1, "reason": r})).collect::<Vec<_>>(),
                "max_degree": d.max_degree,
                "denominators": d.denominators,
                "seed": d.seed,
                "spot_checks_passed": d.spot_checks_passed,
                "spot_checks_failed": d.spot_checks_failed,
            },
        })
    }

    pub fn from_json(v: &Value) -> Result<Certificate> {
        let p = v["field"]["p"].as_u64().ok_or_else(|| Error::Invalid("certificate without field".into()))?;
        let e = v["field"]["e"].as_u64().unwrap_or(1) as u32;
        let ctx = FieldCtx::new(p, e)?;
        let dims = v["dims"]
            .as_array()
            .ok_or_else(|| Error::Invalid("certificate without dims".into()))?
            .iter()
            .map(|d| d.as_u64().map(|d| d as usize).ok_or_else(|| Error::Invalid("bad dim".into())))
            .collect::<Result<Vec<_>>>()?;
        let decomposition = PRDecomposition::terms_from_json(&ctx, dims, &v["terms"])?;
        let x0 = v["x0"]
            .as_array()
            .map(|xs| xs.iter().map(|x| ctx.from_json(x)).collect::<Result<Vec<_>>>())
            .transpose()?
            .unwrap_or_default();
        let bound = v["bound"].as_u64().ok_or_else(|| Error::Invalid("certificate without bound".into()))? as usize;
        Ok(Certificate {
            tensor_sha256: v["tensor_sha256"].as_str().unwrap_or_default().to_string(),
            axis: v["axis"].as_u64().unwrap_or(1).saturating_sub(1) as usize,
            x0,
            r_used: v["r_used"].as_u64().unwrap_or(0) as usize,
            decomposition,
            bound,
            verified: v["verified"].as_bool().unwrap_or(false),
            diagnostics: Diagnostics::default(),
            ctx,
        })
    }
}

/// Independent check of a certificate against a tensor: exact reconstruction and `#terms <= bound`.
pub fn check_certificate(t: &Tensor, cert: &Certificate) -> Result<bool> {
    let v = verify_decomposition(t, &cert.decomposition)?;
    Ok(v.ok && v.term_count <= cert.bound)
}

pub fn tensor_sha256(t: &Tensor) -> String {
    hex::encode(Sha256::digest(t.to_json().to_string().as_bytes()))
}

/// `2^{k-1} - 1`.
pub fn partition_factor(k: usize) -> usize {
    Partition::count(k)
}

struct Attempt {
    decomposition: PRDecomposition,
    r_used: usize,
    max_degree: u32,
    denominators: Vec<String>,
    spot_passed: usize,
    spot_failed: usize,
}

fn attempt(t: &Tensor, axis: usize, forms: &[MultiPoly], cand: &Candidate, others: &[Vec<FieldElement>], cfg: &DecomposeConfig) -> Result<Attempt> {
    let ctx = t.ctx();
    let k = t.order();
    let layout = BlockLayout::new(t.dims(), axis)?;
    let n = layout.nvars;
    let tp = TangentProjection::new(forms, &cand.point)?;
    let r = tp.rank;
    let h = base_case(&tp)?;

    let mut spot_passed = 0;
    let mut spot_failed = 0;
    for x in others {
        if !h.in_domain(x) {
            continue;
        }
        let jac = slice_jacobian_at(t, axis, x)?;
        if crate::linalg::rank(ctx, &jac) != r {
            continue;
        }
        let hx = evaluate_constructing(&h, x)?;
        if ip_apply(ctx, &hx)?.data() == jac.data() {
            spot_passed += 1;
        } else {
            spot_failed += 1;
        }
    }

    let f = RationalMap::from_polys(n, vec![forms.len()], forms.to_vec())?.total_derivative();
    let (h, _) = iterate(h, &tp, f, k - 2, r, cfg.degree_ceiling)?;
    let element = evaluate_constructing(&h, &cand.point)?;
    let big = constructing_to_decomposition(ctx, &element);
    let decomposition = restrict_to_blocks(&big, &layout, ctx)?;
    Ok(Attempt {
        decomposition,
        r_used: r,
        max_degree: h.max_degree(),
        denominators: h.denominators().iter().map(|d| format!("{d:?}")).collect(),
        spot_passed,
        spot_failed,
    })
}

/// Runs the pipeline at successive candidate points until one certificate
/// verifies. Candidates are attempted in parallel batches; the lowest-index
/// verified candidate wins.
pub fn decompose(t: &Tensor, cfg: &DecomposeConfig) -> Result<Certificate> {
    let ctx = t.ctx();
    let k = t.order();
    if k < 2 {
        return Err(Error::Invalid("decomposition needs a tensor of order at least 2".into()));
    }
    let axis = cfg.axis.unwrap_or(k - 1);
    if axis >= k {
        return Err(Error::Invalid(format!("axis {} out of range", axis + 1)));
    }
    let mut cert = Certificate {
        ctx: ctx.clone(),
        tensor_sha256: tensor_sha256(t),
        axis,
        x0: Vec::new(),
        r_used: 0,
        decomposition: PRDecomposition::empty(t.dims().to_vec()),
        bound: 0,
        verified: false,
        diagnostics: Diagnostics {
            seed: cfg.seed,
            ..Diagnostics::default()
        },
    };
    if t.is_zero() {
        cert.x0 = vec![ctx.zero(); BlockLayout::new(t.dims(), axis)?.nvars];
        cert.verified = true;
        return Ok(cert);
    }
    let candidates = match find_regular_point(t, axis, cfg.budget) {
        Ok(c) => c,
        Err(Error::NoPoint) => {
            cert.diagnostics.failures.push((0, Error::NoPoint.to_string()));
            return Ok(cert);
        }
        Err(e) => return Err(e),
    };
    let forms = slice(t, axis)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let spot: Vec<Vec<FieldElement>> = candidates
        .choose_multiple(&mut rng, cfg.spot_checks)
        .map(|c| c.point.clone())
        .collect();
    let tried: Vec<&Candidate> = candidates.iter().take(cfg.max_candidates).collect();
    let batch = rayon::current_num_threads().max(1);
    for (chunk_no, chunk) in tried.chunks(batch).enumerate() {
        let results: Vec<Result<Attempt>> = chunk
            .par_iter()
            .map(|cand| {
                let a = attempt(t, axis, &forms, cand, &spot, cfg)?;
                let v = verify_decomposition(t, &a.decomposition)?;
                let bound = partition_factor(k) * a.r_used;
                if !v.ok {
                    return Err(Error::Invalid("reconstruction differs from the tensor".into()));
                }
                if v.term_count > bound {
                    return Err(Error::Invalid(format!("{} terms exceed the bound {bound}", v.term_count)));
                }
                Ok(a)
            })
            .collect();
        for (i, res) in results.into_iter().enumerate() {
            let idx = chunk_no * batch + i;
            cert.diagnostics.candidates_tried = idx + 1;
            match res {
                Ok(a) => {
                    let cand = chunk[i];
                    cert.x0 = cand.point.clone();
                    cert.r_used = a.r_used;
                    cert.bound = partition_factor(k) * a.r_used;
                    cert.decomposition = a.decomposition;
                    cert.verified = true;
                    cert.diagnostics.max_degree = a.max_degree;
                    cert.diagnostics.denominators = a.denominators;
                    cert.diagnostics.spot_checks_passed = a.spot_passed;
                    cert.diagnostics.spot_checks_failed = a.spot_failed;
                    return Ok(cert);
                }
                Err(e) => cert.diagnostics.failures.push((idx, e.to_string())),
            }
        }
    }
    Ok(cert)
}

/// `IP∘H(x0)` for the map produced after `k - 2` steps, next to the
/// independently differentiated `D^{k-1} T̃`; used to check the construction
/// before any restriction.
pub fn pipeline_tensor_at(t: &Tensor, axis: usize, x0: &[FieldElement], degree_ceiling: u32) -> Result<Array<FieldElement>> {
    let k = t.order();
    let forms = slice(t, axis)?;
    let n = BlockLayout::new(t.dims(), axis)?.nvars;
    let tp = TangentProjection::new(&forms, x0)?;
    let h = base_case(&tp)?;
    let f = RationalMap::from_polys(n, vec![forms.len()], forms.clone())?.total_derivative();
    let r = tp.rank;
    let (h, _) = iterate(h, &tp, f, k - 2, r, degree_ceiling)?;
    ip_apply(t.ctx(), &evaluate_constructing(&h, x0)?)
}

/// Pivot used at a point, exposed for reporting.
pub fn pivot_at(t: &Tensor, axis: usize, x0: &[FieldElement]) -> Result<PivotSelection> {
    Ok(TangentProjection::new(&slice(t, axis)?, x0)?.pivot)
}
