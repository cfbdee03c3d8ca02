//! Independent oracles shared by the integration tests. Everything here works
//! on plain integers mod a prime so it does not lean on the library arithmetic.
#![allow(dead_code)]

use partition_rank::field::{FieldCtx, FieldElement};
use partition_rank::linalg::Matrix;
use partition_rank::poly::MultiPoly;
use partition_rank::tensor::{Array, Tensor};
use rand::Rng;

pub fn fp(p: u64) -> FieldCtx {
    FieldCtx::prime(p).unwrap()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank of an integer matrix mod `p` by plain Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c], p);
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c] * inv % p;
                for j in 0..ncols {
                    m[i][j] = (m[i][j] + p * p - f * m[rank][j]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Integer value of a prime-field element.
pub fn int(ctx: &FieldCtx, a: FieldElement) -> u64 {
    ctx.coeffs(a)[0]
}

pub fn matrix_rank(ctx: &FieldCtx, m: &Matrix<FieldElement>) -> usize {
    let rows: Vec<Vec<u64>> = (0..m.rows()).map(|i| m.row(i).iter().map(|&a| int(ctx, a)).collect()).collect();
    rank_mod_p(&rows, ctx.p())
}

/// Rank of the matrix tensor `t` (order 2).
pub fn tensor_matrix_rank(t: &Tensor) -> usize {
    let (m, n) = (t.dims()[0], t.dims()[1]);
    let rows: Vec<Vec<u64>> = (0..m).map(|i| (0..n).map(|j| int(t.ctx(), t.get(&[i, j]))).collect()).collect();
    rank_mod_p(&rows, t.ctx().p())
}

/// The tensor whose row-major entries are the base-`q` digits of `code`,
/// most significant first.
pub fn tensor_from_code(ctx: &FieldCtx, dims: &[usize], mut code: u64) -> Tensor {
    let len: usize = dims.iter().product();
    let q = ctx.q();
    let mut data = vec![ctx.zero(); len];
    for slot in data.iter_mut().rev() {
        *slot = ctx.element(code % q).unwrap();
        code /= q;
    }
    Tensor::from_array(ctx, Array::new(dims.to_vec(), data).unwrap())
}

pub fn random_matrix<R: Rng>(ctx: &FieldCtx, m: usize, n: usize, rng: &mut R) -> Matrix<FieldElement> {
    let data = (0..m * n).map(|_| ctx.element(rng.gen_range(0..ctx.q())).unwrap()).collect();
    Matrix::from_vec(m, n, data).unwrap()
}

/// A random `m x n` matrix of rank exactly `r`, as a product of random
/// `m x r` and `r x n` factors, redrawn until the rank is right.
pub fn matrix_of_rank<R: Rng>(ctx: &FieldCtx, m: usize, n: usize, r: usize, rng: &mut R) -> Matrix<FieldElement> {
    loop {
        let b = random_matrix(ctx, m, r, rng);
        let c = random_matrix(ctx, r, n, rng);
        let mut data = vec![ctx.zero(); m * n];
        for i in 0..m {
            for j in 0..n {
                let mut s = 0;
                for l in 0..r {
                    s += int(ctx, *b.get(i, l)) * int(ctx, *c.get(l, j));
                }
                data[i * n + j] = ctx.element(s % ctx.p()).unwrap();
            }
        }
        let a = Matrix::from_vec(m, n, data).unwrap();
        if matrix_rank(ctx, &a) == r {
            return a;
        }
    }
}

/// A random polynomial with up to `terms` terms of total degree at most `deg`.
pub fn random_poly<R: Rng>(ctx: &FieldCtx, nvars: usize, deg: u32, terms: usize, rng: &mut R) -> MultiPoly {
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(1..=terms) {
        let mut left = rng.gen_range(0..=deg);
        let mut exps = vec![0u32; nvars];
        for e in exps.iter_mut() {
            let take = rng.gen_range(0..=left);
            *e = take;
            left -= take;
        }
        out.push((exps, ctx.element(rng.gen_range(0..ctx.q())).unwrap()));
    }
    MultiPoly::from_terms(ctx, nvars, out).unwrap()
}

pub fn random_nonzero_poly<R: Rng>(ctx: &FieldCtx, nvars: usize, deg: u32, terms: usize, rng: &mut R) -> MultiPoly {
    loop {
        let p = random_poly(ctx, nvars, deg, terms, rng);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Every point of `F^n`.
pub fn all_points(ctx: &FieldCtx, n: usize) -> Vec<Vec<FieldElement>> {
    let q = ctx.q();
    let total = q.pow(n as u32);
    (0..total)
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let d = c % q;
                    c /= q;
                    ctx.element(d).unwrap()
                })
                .collect()
        })
        .collect()
}
