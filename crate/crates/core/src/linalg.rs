//! Matrices over any ring, rank factorization and kernel projection through
//! the pivot adjugate.
//!
//! Everything is stated against an explicit [`PivotSelection`] `(I, J)`
//! rather than moving the pivot block to the top-left corner, so outputs stay
//! in natural coordinates. With `A1 = A[:, J]` and
//! `A2 = det(A[I,J])^{-1} adj(A[I,J]) A[I, :]` the product `A1 A2` equals `A`
//! whenever `rank A = r`, and `A2[:, J]` is the identity. The kernel
//! projection replaces rows `J` of the identity by `e_J - A2`.

use crate::algebra::{Field, Ring};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<F, T>(&self, f: F) -> Matrix<T>
    where
        F: FnMut(&E) -> T,
    {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<F, T>(&self, f: F) -> Result<Matrix<T>>
    where
        F: FnMut(&E) -> Result<T>,
    {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.cols != b.rows {
        return Err(Error::ShapeMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut data = Vec::with_capacity(a.rows * b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = ring.zero();
            for t in 0..a.cols {
                let x = a.get(i, t);
                if ring.is_zero(x) {
                    continue;
                }
                acc = ring.add(&acc, &ring.mul(x, b.get(t, j)));
            }
            data.push(acc);
        }
    }
    Ok(Matrix {
        rows: a.rows,
        cols: b.cols,
        data,
    })
}

pub fn mat_sub<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::ShapeMismatch("matrix difference of unequal shapes".into()));
    }
    Ok(Matrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| ring.sub(x, y)).collect(),
    })
}

pub fn mat_scale<R: Ring>(ring: &R, a: &Matrix<R::Elem>, c: &R::Elem) -> Matrix<R::Elem> {
    a.map(|x| ring.mul(x, c))
}

pub fn is_zero_matrix<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> bool {
    a.data.iter().all(|x| ring.is_zero(x))
}

/// Determinant by cofactor expansion, memoised over column subsets; it never
/// divides, so it works over any commutative ring.
pub fn determinant<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<R::Elem> {
    if m.rows != m.cols {
        return Err(Error::ShapeMismatch(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(ring.one());
    }
    if n > 20 {
        return Err(Error::ShapeMismatch("determinant limited to 20x20".into()));
    }
    // minors[mask] = det of rows (n - popcount(mask))..n against columns in mask
    let full = (1usize << n) - 1;
    let mut minors: Vec<Option<R::Elem>> = vec![None; 1 << n];
    minors[0] = Some(ring.one());
    for mask in 1..=full {
        let k = (mask as u32).count_ones() as usize;
        let row = n - k;
        let mut acc = ring.zero();
        let mut sign_pos = true;
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let rest = mask & !(1 << col);
            let entry = m.get(row, col);
            if !ring.is_zero(entry) {
                let sub = minors[rest].as_ref().expect("smaller masks come first");
                let t = ring.mul(entry, sub);
                acc = if sign_pos { ring.add(&acc, &t) } else { ring.sub(&acc, &t) };
            }
            sign_pos = !sign_pos;
        }
        minors[mask] = Some(acc);
    }
    Ok(minors[full].take().unwrap())
}

/// Classical adjugate: `adj[i][j] = (-1)^(i+j) det(minor(j, i))`.
pub fn adjugate<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if m.rows != m.cols {
        return Err(Error::ShapeMismatch(format!("adjugate of a {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Matrix::zeros(ring, 0, 0));
    }
    if n == 1 {
        return Ok(Matrix::identity(ring, 1));
    }
    let mut out = Matrix::zeros(ring, n, n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let d = determinant(ring, &m.submatrix(&rows, &cols))?;
            out.set(i, j, if (i + j) % 2 == 0 { d } else { ring.neg(&d) });
        }
    }
    Ok(out)
}

/// Row indices `I` and column indices `J` of an invertible `r x r` block (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotSelection {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl PivotSelection {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::ShapeMismatch(format!(
                "pivot with {} rows and {} columns",
                rows.len(),
                cols.len()
            )));
        }
        Ok(PivotSelection { rows, cols })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn check<E>(&self, a: &Matrix<E>, r: usize) -> Result<()> {
        if self.rank() != r {
            return Err(Error::ShapeMismatch(format!("pivot of size {} for rank {r}", self.rank())));
        }
        if self.rows.iter().any(|&i| i >= a.rows) || self.cols.iter().any(|&j| j >= a.cols) {
            return Err(Error::ShapeMismatch("pivot index out of range".into()));
        }
        Ok(())
    }
}

/// `(A1, A2)` with `A1 = A[:, J]` (m x r) and `A2 = A[I,J]^{-1} A[I, :]` (r x n),
/// the inverse taken as adjugate over determinant.
pub fn rank_factorize<F: Field>(
    field: &F,
    a: &Matrix<F::Elem>,
    r: usize,
    piv: &PivotSelection,
) -> Result<(Matrix<F::Elem>, Matrix<F::Elem>)> {
    piv.check(a, r)?;
    let all_rows: Vec<usize> = (0..a.rows).collect();
    let all_cols: Vec<usize> = (0..a.cols).collect();
    let a1 = a.submatrix(&all_rows, &piv.cols);
    let block = a.submatrix(&piv.rows, &piv.cols);
    let det = determinant(field, &block)?;
    if field.is_zero(&det) {
        return Err(Error::SingularPivot);
    }
    let det_inv = field.inv(&det)?;
    let adj = adjugate(field, &block)?;
    let a2 = mat_mul(field, &adj, &a.submatrix(&piv.rows, &all_cols))?;
    Ok((a1, mat_scale(field, &a2, &det_inv)))
}

/// Idempotent `P` (n x n) with `A P = 0` when `rank A = r`; `I - P` vanishes outside rows `J`.
pub fn kernel_projection<F: Field>(
    field: &F,
    a: &Matrix<F::Elem>,
    r: usize,
    piv: &PivotSelection,
) -> Result<Matrix<F::Elem>> {
    let (_, a2) = rank_factorize(field, a, r, piv)?;
    Ok(projection_from_factor(field, &a2, &piv.cols))
}

/// Builds the kernel projection from the right factor `A2` of a rank factorization.
pub fn projection_from_factor<F: Ring>(field: &F, a2: &Matrix<F::Elem>, pivot_cols: &[usize]) -> Matrix<F::Elem> {
    let n = a2.cols;
    let mut p = Matrix::identity(field, n);
    for (s, &js) in pivot_cols.iter().enumerate() {
        for l in 0..n {
            let delta = if l == js { field.one() } else { field.zero() };
            p.set(js, l, field.sub(&delta, a2.get(s, l)));
        }
    }
    p
}

/// Reduced row echelon form over a concrete field; returns the pivot columns.
pub fn row_reduce(ctx: &FieldCtx, m: &mut Matrix<FieldElement>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(pr) = (row..m.rows).find(|&i| !ctx.is_zero(*m.get(i, col))) else {
            continue;
        };
        if pr != row {
            for j in 0..m.cols {
                m.data.swap(pr * m.cols + j, row * m.cols + j);
            }
        }
        let inv = ctx.inv(*m.get(row, col)).expect("pivot is nonzero");
        for j in col..m.cols {
            let v = ctx.mul(*m.get(row, j), inv);
            m.set(row, j, v);
        }
        for i in 0..m.rows {
            if i == row {
                continue;
            }
            let factor = *m.get(i, col);
            if ctx.is_zero(factor) {
                continue;
            }
            for j in col..m.cols {
                let v = ctx.sub(*m.get(i, j), ctx.mul(factor, *m.get(row, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(ctx: &FieldCtx, m: &Matrix<FieldElement>) -> usize {
    let mut copy = m.clone();
    row_reduce(ctx, &mut copy).len()
}

/// Basis of the right kernel, as vectors of length `cols`.
pub fn nullspace(ctx: &FieldCtx, m: &Matrix<FieldElement>) -> Vec<Vec<FieldElement>> {
    let mut red = m.clone();
    let pivots = row_reduce(ctx, &mut red);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ctx.zero(); m.cols];
            v[f] = ctx.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = ctx.neg(*red.get(r, f));
            }
            v
        })
        .collect()
}

/// Some `c` with `A c = b`, or `None` when `b` is outside the column space.
pub fn solve(ctx: &FieldCtx, a: &Matrix<FieldElement>, b: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
    if b.len() != a.rows {
        return Err(Error::ShapeMismatch(format!("right-hand side of length {} for {} rows", b.len(), a.rows)));
    }
    let mut aug = Matrix::zeros(ctx, a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.set(i, j, *a.get(i, j));
        }
        aug.set(i, a.cols, b[i]);
    }
    let pivots = row_reduce(ctx, &mut aug);
    if pivots.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut c = vec![ctx.zero(); a.cols];
    for (r, &pc) in pivots.iter().enumerate() {
        c[pc] = *aug.get(r, a.cols);
    }
    Ok(Some(c))
}

/// Greedy row-by-row elimination: each row, reduced against the earlier
/// pivots, contributes its first nonzero column. Stops after `r` pivots.
pub fn find_pivot(ctx: &FieldCtx, a: &Matrix<FieldElement>, r: usize) -> Result<PivotSelection> {
    let mut work = a.clone();
    let mut rows = Vec::new();
    let mut cols: Vec<usize> = Vec::new();
    for i in 0..a.rows {
        if rows.len() == r {
            break;
        }
        let Some(c) = (0..a.cols).find(|&j| !ctx.is_zero(*work.get(i, j))) else {
            continue;
        };
        let inv = ctx.inv(*work.get(i, c)).expect("nonzero");
        for later in i + 1..a.rows {
            let factor = ctx.mul(*work.get(later, c), inv);
            if ctx.is_zero(factor) {
                continue;
            }
            for j in 0..a.cols {
                let v = ctx.sub(*work.get(later, j), ctx.mul(factor, *work.get(i, j)));
                work.set(later, j, v);
            }
        }
        rows.push(i);
        cols.push(c);
    }
    if rows.len() < r {
        return Err(Error::RankDeficient {
            rank: rows.len(),
            target: r,
        });
    }
    cols.sort_unstable();
    PivotSelection::new(rows, cols)
}
