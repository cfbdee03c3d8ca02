//! Brute-force ground truth for tiny tensors.
//!
//! Exact partition rank is found by searching over subspaces instead of over
//! individual factors. `T` has partition rank at most `r` exactly when there
//! are dimensions `ρ_S` summing to `r` and subspaces `U_S` of dimension `ρ_S`
//! with `T ∈ Σ_S U_S ⊗ F^{S̄}` (or with `U_S` on the complement side), since
//! grouping the terms of a decomposition by partition gives such subspaces and
//! a basis of them gives back a decomposition. For each partition the
//! subspace lives on whichever side of the flattening is smaller, and
//! subspaces are enumerated once each through their reduced row echelon form.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::engine::{decompose, partition_factor, DecomposeConfig};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::{find_pivot, rank, rank_factorize, solve, Matrix};
use crate::tensor::{flatten, indices, strides, Array, PRDecomposition, PRTerm, Partition, Tensor};
use crate::variety::{analytic_rank, estimate_dim, ARValue};

/// Default number of subspace tuples the exact search may examine.
pub const DEFAULT_PR_BUDGET: u128 = 2_000_000;

/// Factors `T` as a single term if some flattening has rank one.
pub fn pr_leq_one(t: &Tensor) -> Result<Option<PRDecomposition>> {
    if t.is_zero() {
        return Ok(Some(PRDecomposition::empty(t.dims().to_vec())));
    }
    let ctx = t.ctx();
    for p in Partition::all(t.order()) {
        let m = flatten(t, &p)?;
        if rank(ctx, &m) == 1 {
            let d = flattening_decomposition(t, &p, &m, 1)?;
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// The rank factorization of one flattening, as a decomposition with `r` terms.
fn flattening_decomposition(t: &Tensor, p: &Partition, m: &Matrix<FieldElement>, r: usize) -> Result<PRDecomposition> {
    let ctx = t.ctx();
    let piv = find_pivot(ctx, m, r)?;
    let (a1, a2) = rank_factorize(ctx, m, r, &piv)?;
    let (sd, cd) = (p.side_dims(t.dims()), p.complement_dims(t.dims()));
    let mut terms = Vec::with_capacity(r);
    for i in 0..r {
        let u = Tensor::from_array(ctx, Array::new(sd.clone(), a1.column(i))?);
        let v = Tensor::from_array(ctx, Array::new(cd.clone(), a2.row(i).to_vec())?);
        terms.push(PRTerm::new(*p, u, v));
    }
    Ok(PRDecomposition {
        dims: t.dims().to_vec(),
        terms,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum PrResult {
    Exact { rank: usize, witness: PRDecomposition },
    /// No decomposition with at most `r - 1` terms exists.
    LowerBoundOnly(usize),
}

impl PrResult {
    pub fn exact(&self) -> Option<usize> {
        match self {
            PrResult::Exact { rank, .. } => Some(*rank),
            PrResult::LowerBoundOnly(_) => None,
        }
    }
}

/// Number of `rho`-dimensional subspaces of `F_q^d`.
pub fn gaussian_binomial(d: usize, rho: usize, q: u64) -> BigUint {
    if rho > d {
        return BigUint::from(0u32);
    }
    let qb = BigUint::from(q);
    let one = BigUint::from(1u32);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..rho {
        num *= qb.pow((d - i) as u32) - &one;
        den *= qb.pow((i + 1) as u32) - &one;
    }
    num / den
}

/// Bases (as RREF rows) of every `rho`-dimensional subspace of `F^d`.
fn subspaces(ctx: &FieldCtx, d: usize, rho: usize) -> Result<Vec<Vec<Vec<FieldElement>>>> {
    let elems = ctx.elements()?;
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(rho);
    choose(d, rho, 0, &mut pivots, &mut |piv: &[usize]| {
        // free slots: row i, column c > piv[i] with c not a pivot
        let slots: Vec<(usize, usize)> = (0..rho)
            .flat_map(|i| ((piv[i] + 1)..d).filter(|c| !piv.contains(c)).map(move |c| (i, c)))
            .collect();
        let dims = vec![elems.len(); slots.len()];
        for assignment in indices(&dims) {
            let mut rows = vec![vec![ctx.zero(); d]; rho];
            for (i, &c) in piv.iter().enumerate() {
                rows[i][c] = ctx.one();
            }
            for (&(i, c), &a) in slots.iter().zip(&assignment) {
                rows[i][c] = elems[a];
            }
            out.push(rows);
        }
    });
    Ok(out)
}

fn choose(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for c in start..n {
        if n - c < k - cur.len() {
            break;
        }
        cur.push(c);
        choose(n, k, c + 1, cur, f);
        cur.pop();
    }
}

/// Compositions of `r` into `bounds.len()` parts with part `i` at most `bounds[i]`.
fn compositions(r: usize, bounds: &[usize]) -> Vec<Vec<usize>> {
    fn go(r: usize, bounds: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == bounds.len() {
            if r == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest: usize = bounds[cur.len() + 1..].iter().sum();
        for x in 0..=bounds[cur.len()].min(r) {
            if r - x > rest {
                continue;
            }
            cur.push(x);
            go(r - x, bounds, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(r, bounds, &mut Vec::new(), &mut out);
    out
}

/// Per-partition geometry of the search.
struct Side {
    partition: Partition,
    /// Subspace on the rows (the partition's side) rather than the columns.
    on_rows: bool,
    rows: usize,
    cols: usize,
    /// Original row-major offset of flattening entry `(row, col)`.
    offsets: Vec<usize>,
}

impl Side {
    fn new(dims: &[usize], p: Partition) -> Self {
        let side = p.side();
        let comp = p.complement();
        let st = strides(dims);
        let sd = p.side_dims(dims);
        let cd = p.complement_dims(dims);
        let rows: usize = sd.iter().product();
        let cols: usize = cd.iter().product();
        let mut offsets = Vec::with_capacity(rows * cols);
        for ri in indices(&sd) {
            let ro: usize = side.iter().zip(&ri).map(|(&a, &i)| st[a] * i).sum();
            for ci in indices(&cd) {
                let co: usize = comp.iter().zip(&ci).map(|(&a, &i)| st[a] * i).sum();
                offsets.push(ro + co);
            }
        }
        Side {
            partition: p,
            on_rows: rows <= cols,
            rows,
            cols,
            offsets,
        }
    }

    fn ambient(&self) -> usize {
        if self.on_rows {
            self.rows
        } else {
            self.cols
        }
    }

    fn other(&self) -> usize {
        if self.on_rows {
            self.cols
        } else {
            self.rows
        }
    }

    /// Generators of `U ⊗ F^{other}`, one per (basis vector, other index).
    fn generators(&self, basis: &[Vec<FieldElement>], len: usize, zero: FieldElement) -> Vec<Vec<FieldElement>> {
        let mut out = Vec::with_capacity(basis.len() * self.other());
        for b in basis {
            for j in 0..self.other() {
                let mut g = vec![zero; len];
                for (i, &x) in b.iter().enumerate() {
                    let (r, c) = if self.on_rows { (i, j) } else { (j, i) };
                    g[self.offsets[r * self.cols + c]] = x;
                }
                out.push(g);
            }
        }
        out
    }
}

fn generator_matrix(ctx: &FieldCtx, gens: &[Vec<FieldElement>], len: usize) -> Matrix<FieldElement> {
    let mut m = Matrix::zeros(ctx, len, gens.len());
    for (j, g) in gens.iter().enumerate() {
        for (i, &x) in g.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    m
}

/// Exact partition rank when it is at most `r_max`, by exhaustive subspace
/// search. The upper bound `min_S rank(flatten_S T)` comes with its own
/// witness, so only ranks below it are searched.
pub fn pr_bruteforce(t: &Tensor, r_max: usize, budget: u128) -> Result<PrResult> {
    let ctx = t.ctx();
    let k = t.order();
    if k < 2 {
        return Err(Error::Invalid("partition rank needs order at least 2".into()));
    }
    if t.is_zero() {
        return Ok(PrResult::Exact {
            rank: 0,
            witness: PRDecomposition::empty(t.dims().to_vec()),
        });
    }
    let parts = Partition::all(k);
    let mut ub = usize::MAX;
    let mut ub_part = parts[0];
    let mut ub_mat = None;
    for p in &parts {
        let m = flatten(t, p)?;
        let r = rank(ctx, &m);
        if r < ub {
            ub = r;
            ub_part = *p;
            ub_mat = Some(m);
        }
    }
    let sides: Vec<Side> = parts.iter().map(|&p| Side::new(t.dims(), p)).collect();
    let bounds: Vec<usize> = sides.iter().map(Side::ambient).collect();
    let search_to = (ub - 1).min(r_max);

    let q = ctx.q();
    let mut needed = BigUint::from(0u32);
    for r in 1..=search_to {
        for comp in compositions(r, &bounds) {
            let mut prod = BigUint::from(1u32);
            for (&rho, &d) in comp.iter().zip(&bounds) {
                prod *= gaussian_binomial(d, rho, q);
            }
            needed += prod;
        }
    }
    if needed > BigUint::from(budget) {
        let needed = u128::try_from(&needed).unwrap_or(u128::MAX);
        return Err(Error::BudgetExceeded { needed, budget });
    }

    let len: usize = t.dims().iter().product();
    let target: Vec<FieldElement> = t.array().data().to_vec();
    let mut cache: std::collections::HashMap<(usize, usize), Vec<Vec<Vec<FieldElement>>>> = Default::default();
    for r in 1..=search_to {
        for comp in compositions(r, &bounds) {
            for (&rho, &d) in comp.iter().zip(&bounds) {
                if rho > 0 && !cache.contains_key(&(d, rho)) {
                    cache.insert((d, rho), subspaces(ctx, d, rho)?);
                }
            }
            let active: Vec<(usize, &Vec<Vec<Vec<FieldElement>>>)> = comp
                .iter()
                .enumerate()
                .filter(|(_, &rho)| rho > 0)
                .map(|(i, &rho)| (i, &cache[&(bounds[i], rho)]))
                .collect();
            let lens: Vec<usize> = active.iter().map(|(_, l)| l.len()).collect();
            let total: usize = lens.iter().product();
            let build = |n: usize| -> Vec<(usize, &Vec<Vec<FieldElement>>, Vec<Vec<FieldElement>>)> {
                let mut rem = n;
                let mut picks = vec![0usize; lens.len()];
                for a in (0..lens.len()).rev() {
                    picks[a] = rem % lens[a];
                    rem /= lens[a];
                }
                active
                    .iter()
                    .zip(&picks)
                    .map(|((i, list), &pick)| {
                        let basis = &list[pick];
                        (*i, basis, sides[*i].generators(basis, len, ctx.zero()))
                    })
                    .collect()
            };
            let hit = (0..total).into_par_iter().find_first(|&n| {
                let gens: Vec<Vec<FieldElement>> = build(n).into_iter().flat_map(|(_, _, g)| g).collect();
                matches!(solve(ctx, &generator_matrix(ctx, &gens, len), &target), Ok(Some(_)))
            });
            if let Some(n) = hit {
                let chosen = build(n);
                let gens: Vec<Vec<FieldElement>> = chosen.iter().flat_map(|(_, _, g)| g.clone()).collect();
                let coeffs = solve(ctx, &generator_matrix(ctx, &gens, len), &target)?.expect("membership just checked");
                let witness = witness_from(t, &sides, &chosen, &coeffs)?;
                return Ok(PrResult::Exact { rank: r, witness });
            }
        }
    }
    if ub <= r_max {
        let m = ub_mat.expect("at least one partition");
        return Ok(PrResult::Exact {
            rank: ub,
            witness: flattening_decomposition(t, &ub_part, &m, ub)?,
        });
    }
    Ok(PrResult::LowerBoundOnly(r_max + 1))
}

type Chosen<'a> = (usize, &'a Vec<Vec<FieldElement>>, Vec<Vec<FieldElement>>);

fn witness_from(t: &Tensor, sides: &[Side], chosen: &[Chosen<'_>], coeffs: &[FieldElement]) -> Result<PRDecomposition> {
    let ctx = t.ctx();
    let mut terms = Vec::new();
    let mut pos = 0;
    for (i, basis, _) in chosen {
        let side = &sides[*i];
        let p = side.partition;
        let (sd, cd) = (p.side_dims(t.dims()), p.complement_dims(t.dims()));
        for b in basis.iter() {
            let w: Vec<FieldElement> = coeffs[pos..pos + side.other()].to_vec();
            pos += side.other();
            if w.iter().all(|&x| ctx.is_zero(x)) {
                continue;
            }
            let (u, v) = if side.on_rows { (b.clone(), w) } else { (w, b.clone()) };
            terms.push(PRTerm::new(
                p,
                Tensor::from_array(ctx, Array::new(sd.clone(), u)?),
                Tensor::from_array(ctx, Array::new(cd.clone(), v)?),
            ));
        }
    }
    Ok(PRDecomposition {
        dims: t.dims().to_vec(),
        terms,
    })
}

#[derive(Clone, Debug)]
pub struct AuditConfig {
    /// Slicing axis for AR and GR, 0-based; the last axis when `None`.
    pub axis: Option<usize>,
    /// Largest extension degree used for the dimension estimate.
    pub max_ext: u32,
    pub budget: u128,
    pub pr_budget: u128,
    /// Search exact PR up to this rank.
    pub r_max: usize,
    /// Also run the decomposition pipeline and record its term count.
    pub certify: bool,
    pub decompose: DecomposeConfig,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            axis: None,
            max_ext: 3,
            budget: crate::variety::DEFAULT_BUDGET,
            pr_budget: DEFAULT_PR_BUDGET,
            r_max: 8,
            certify: true,
            decompose: DecomposeConfig::default(),
        }
    }
}

/// Exact audit of the rank inequalities for one tensor. Missing components
/// (over budget) are `None` and so are the comparisons that need them.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditRecord {
    pub dims: Vec<usize>,
    pub q: u64,
    pub ar: Option<ARValue>,
    /// Exact PR from the oracle, else the certificate size.
    pub pr: Option<usize>,
    pub pr_exact: bool,
    pub gr_est: Option<u32>,
    pub gr_stable: bool,
    pub cert_terms: Option<usize>,
    pub cert_verified: bool,
    pub holds_ar_le_pr: Option<bool>,
    pub holds_gr_bound: Option<bool>,
    pub holds_ar_bound: Option<bool>,
}

impl AuditRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "dims": self.dims,
            "q": self.q,
            "ar": self.ar.map(|a| a.to_json()),
            "pr": self.pr,
            "pr_exact": self.pr_exact,
            "gr_est": self.gr_est,
            "gr_stable": self.gr_stable,
            "cert_terms": self.cert_terms,
            "cert_verified": self.cert_verified,
            "holds_ar_le_pr": self.holds_ar_le_pr,
            "holds_gr_bound": self.holds_gr_bound,
            "holds_ar_bound": self.holds_ar_bound,
        })
    }
}

/// `PR <= C * AR + 1` with `C = 2^{k-1} - 1`, decided exactly as
/// `count^C <= q^{C N - PR + 1}`.
pub fn ar_bound_holds(ar: &ARValue, pr: usize, k: usize) -> bool {
    let c = partition_factor(k) as u64;
    let exp = c as i128 * ar.n as i128 - pr as i128 + 1;
    if exp < 0 {
        return false;
    }
    BigUint::from(ar.count).pow(c as u32) <= BigUint::from(ar.q).pow(exp as u32)
}

fn over_budget<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn check_inequalities(t: &Tensor, cfg: &AuditConfig) -> Result<AuditRecord> {
    let k = t.order();
    let axis = cfg.axis.unwrap_or(k - 1);
    let ar = over_budget(analytic_rank(t, axis, cfg.budget))?;
    let report = over_budget(estimate_dim(t, axis, cfg.max_ext, cfg.budget, 0))?;
    let oracle = over_budget(pr_bruteforce(t, cfg.r_max, cfg.pr_budget))?;
    let cert = if cfg.certify {
        let dc = DecomposeConfig {
            axis: Some(axis),
            ..cfg.decompose.clone()
        };
        over_budget(decompose(t, &dc))?
    } else {
        None
    };
    let cert_verified = cert.as_ref().is_some_and(|c| c.verified);
    let cert_terms = cert.as_ref().filter(|c| c.verified).map(|c| c.num_terms());
    let exact = oracle.as_ref().and_then(PrResult::exact);
    let pr = exact.or(cert_terms);
    let c = partition_factor(k);
    Ok(AuditRecord {
        dims: t.dims().to_vec(),
        q: t.ctx().q(),
        ar,
        pr,
        pr_exact: exact.is_some(),
        gr_est: report.as_ref().map(|r| r.gr_est),
        gr_stable: report.as_ref().is_some_and(|r| !r.unstable),
        cert_terms,
        cert_verified,
        holds_ar_le_pr: match (ar, exact) {
            (Some(a), Some(p)) => Some(a.le(p as u64)),
            _ => None,
        },
        holds_gr_bound: match (&report, pr) {
            (Some(r), Some(p)) if !r.unstable => Some(p <= c * r.gr_est as usize),
            _ => None,
        },
        holds_ar_bound: match (ar, pr) {
            (Some(a), Some(p)) => Some(ar_bound_holds(&a, p, k)),
            _ => None,
        },
    })
}
