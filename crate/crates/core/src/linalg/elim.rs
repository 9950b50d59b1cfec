//! Exact elimination: rank, kernels, solving and cohomology dimensions.
//!
//! Rank uses fraction-free integer row operations with minimum-count pivoting
//! on each connected block of the matrix independently. Kernels, images and
//! solutions go through a canonical reduced row echelon form so that the
//! returned bases are deterministic.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{Scalar, SparseMatrix};
use crate::error::{Error, Result};

type IntRow = Vec<(usize, BigInt)>;

fn lcm_of_denominators(row: &[(usize, Scalar)]) -> BigInt {
    row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()))
}

/// Scales a rational row to a primitive integer row.
fn integer_row(row: &[(usize, Scalar)]) -> IntRow {
    let l = lcm_of_denominators(row);
    let mut out: IntRow =
        row.iter().map(|(c, v)| (*c, v.numer() * (&l / v.denom()))).collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IntRow) {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// `alpha * a - beta * b`, merged by column, zeros dropped.
fn combine(alpha: &BigInt, a: &IntRow, beta: &BigInt, b: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|x| x.0);
        let cb = b.get(j).map(|x| x.0);
        match (ca, cb) {
            (Some(x), Some(y)) if x == y => {
                let v = alpha * &a[i].1 - beta * &b[j].1;
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push((x, alpha * &a[i].1));
                i += 1;
            }
            (Some(x), None) => {
                out.push((x, alpha * &a[i].1));
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, -(beta * &b[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn coeff_at(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |x| x.0).ok().map(|k| &row[k].1)
}

/// Splits the rows into groups that share no columns (connected components
/// of the row/column incidence graph).
fn components(rows: Vec<IntRow>, ncols: usize) -> Vec<Vec<IntRow>> {
    let mut parent: Vec<usize> = (0..ncols).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for row in &rows {
        if let Some((first, _)) = row.first() {
            let a = find(&mut parent, *first);
            for (c, _) in &row[1..] {
                let b = find(&mut parent, *c);
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<IntRow>> = HashMap::new();
    for row in rows {
        if let Some((first, _)) = row.first() {
            let root = find(&mut parent, *first);
            groups.entry(root).or_default().push(row);
        }
    }
    let mut out: Vec<(usize, Vec<IntRow>)> = groups.into_iter().collect();
    out.sort_by_key(|(k, _)| *k);
    out.into_iter().map(|(_, g)| g).collect()
}

/// Rank of one connected block by fraction-free elimination. Pivot column:
/// fewest active rows; pivot row: fewest entries.
fn block_rank(mut rows: Vec<IntRow>) -> usize {
    if rows.len() <= 1 {
        return rows.iter().filter(|r| !r.is_empty()).count();
    }
    // local column numbering
    let mut colmap: HashMap<usize, usize> = HashMap::new();
    for row in rows.iter_mut() {
        for (c, _) in row.iter_mut() {
            let n = colmap.len();
            *c = *colmap.entry(*c).or_insert(n);
        }
        row.sort_by_key(|x| x.0);
    }
    let ncols = colmap.len();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (i, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c].push(i);
        }
    }
    let mut alive = vec![true; rows.len()];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..ncols).map(|c| Reverse((col_rows[c].len(), c))).collect();
    let mut rank = 0;
    while let Some(Reverse((count, col))) = heap.pop() {
        let live: Vec<usize> =
            col_rows[col].iter().copied().filter(|&r| alive[r] && coeff_at(&rows[r], col).is_some()).collect();
        if live.len() != count {
            col_rows[col] = live;
            if !col_rows[col].is_empty() {
                heap.push(Reverse((col_rows[col].len(), col)));
            }
            continue;
        }
        if live.is_empty() {
            continue;
        }
        let pivot = *live.iter().min_by_key(|&&r| (rows[r].len(), r)).unwrap();
        alive[pivot] = false;
        rank += 1;
        let prow = std::mem::take(&mut rows[pivot]);
        let pc = coeff_at(&prow, col).unwrap().clone();
        let mut touched: Vec<usize> = Vec::new();
        for &r in &live {
            if r == pivot {
                continue;
            }
            let rc = coeff_at(&rows[r], col).unwrap().clone();
            let g = pc.gcd(&rc);
            let alpha = &pc / &g;
            let beta = &rc / &g;
            let mut newrow = combine(&alpha, &rows[r], &beta, &prow);
            make_primitive(&mut newrow);
            for (c, _) in &newrow {
                if coeff_at(&rows[r], *c).is_none() {
                    col_rows[*c].push(r);
                    touched.push(*c);
                }
            }
            for (c, _) in &rows[r] {
                if coeff_at(&newrow, *c).is_none() {
                    touched.push(*c);
                }
            }
            rows[r] = newrow;
        }
        for (c, _) in &prow {
            touched.push(*c);
        }
        touched.sort_unstable();
        touched.dedup();
        for c in touched {
            if c == col {
                continue;
            }
            col_rows[c].retain(|&r| alive[r] && coeff_at(&rows[r], c).is_some());
            if !col_rows[c].is_empty() {
                heap.push(Reverse((col_rows[c].len(), c)));
            }
        }
        col_rows[col].clear();
    }
    rank
}

/// Rank over the rationals.
pub fn rank(m: &SparseMatrix) -> usize {
    if m.nnz() == 0 {
        return 0;
    }
    // eliminate along the shorter dimension's rows
    let rows = if m.rows() <= m.cols() { m.to_rows() } else { m.transpose().to_rows() };
    let ncols = m.rows().max(m.cols());
    let int_rows: Vec<IntRow> =
        rows.iter().filter(|r| !r.is_empty()).map(|r| integer_row(r)).collect();
    let blocks = components(int_rows, ncols);
    blocks.into_par_iter().map(block_rank).sum()
}

/// Canonical reduced row echelon form, pivots chosen left to right.
#[derive(Debug, Clone)]
pub struct Rref {
    /// Nonzero rows, each normalized to have 1 at its pivot, sorted by pivot.
    pub rows: Vec<Vec<(usize, Scalar)>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

fn row_get(row: &[(usize, Scalar)], c: usize) -> Option<&Scalar> {
    row.binary_search_by_key(&c, |x| x.0).ok().map(|k| &row[k].1)
}

/// `a - s * b`.
fn row_axpy(a: &[(usize, Scalar)], s: &Scalar, b: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = va - &(s * vb);
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (_, Some((cb, vb))) => {
                out.push((*cb, -(s * vb)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

pub fn rref(m: &SparseMatrix) -> Rref {
    let mut pending: Vec<Vec<(usize, Scalar)>> =
        m.to_rows().into_iter().filter(|r| !r.is_empty()).collect();
    // Forward elimination choosing the row whose leading column is smallest.
    let mut echelon: Vec<Vec<(usize, Scalar)>> = Vec::new();
    loop {
        pending.retain(|r| !r.is_empty());
        if pending.is_empty() {
            break;
        }
        let lead = pending.iter().map(|r| r[0].0).min().unwrap();
        let mut best: Option<usize> = None;
        for (i, r) in pending.iter().enumerate() {
            if r[0].0 == lead && best.is_none_or(|b| r.len() < pending[b].len()) {
                best = Some(i);
            }
        }
        let prow = pending.swap_remove(best.unwrap());
        let inv = prow[0].1.inv();
        let prow: Vec<(usize, Scalar)> = prow.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
        for r in pending.iter_mut() {
            if r[0].0 == lead {
                let s = r[0].1.clone();
                *r = row_axpy(r, &s, &prow);
            }
        }
        echelon.push(prow);
    }
    // Back substitution.
    for i in (0..echelon.len()).rev() {
        let p = echelon[i][0].0;
        let prow = echelon[i].clone();
        for row in echelon.iter_mut().take(i) {
            if let Some(s) = row_get(row, p).cloned() {
                *row = row_axpy(row, &s, &prow);
            }
        }
    }
    let pivots = echelon.iter().map(|r| r[0].0).collect();
    Rref { rows: echelon, pivots, cols: m.cols() }
}

/// Basis of the right kernel as columns; `cols - rank` columns.
pub fn kernel_basis(m: &SparseMatrix) -> SparseMatrix {
    let r = rref(m);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; m.cols()];
        for &p in &r.pivots {
            v[p] = true;
        }
        v
    };
    let free: Vec<usize> = (0..m.cols()).filter(|&c| !is_pivot[c]).collect();
    let free_pos: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut cols: Vec<Vec<(usize, Scalar)>> =
        free.iter().map(|&f| vec![(f, Scalar::one())]).collect();
    for row in &r.rows {
        let p = row[0].0;
        for (c, v) in &row[1..] {
            if let Some(&k) = free_pos.get(c) {
                cols[k].push((p, -v));
            }
        }
    }
    SparseMatrix::from_columns(m.cols(), cols)
}

/// Indices of a maximal linearly independent set of columns (leftmost choice).
pub fn independent_columns(m: &SparseMatrix) -> Vec<usize> {
    rref(m).pivots
}

/// Basis of the column space, chosen among the columns of `m`.
pub fn image_basis(m: &SparseMatrix) -> SparseMatrix {
    m.select_columns(&independent_columns(m))
}

/// Basis of the column space in reduced column echelon form.
pub fn reduced_image_basis(m: &SparseMatrix) -> SparseMatrix {
    SparseMatrix::from_columns(m.rows(), rref(&m.transpose()).rows)
}

/// Solves `m * x = b` for every column of `b`; `None` if some column is inconsistent.
pub fn solve(m: &SparseMatrix, b: &SparseMatrix) -> Option<SparseMatrix> {
    assert_eq!(m.rows(), b.rows(), "solve: row mismatch");
    let aug = m.hstack(b);
    let r = rref(&aug);
    let n = m.cols();
    if r.pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut triplets = Vec::new();
    for row in &r.rows {
        let p = row[0].0;
        for (c, v) in row {
            if *c >= n {
                triplets.push((p, c - n, v.clone()));
            }
        }
    }
    Some(SparseMatrix::from_triplets(n, b.cols(), triplets))
}

/// Whether every column of `b` lies in the column space of `m`.
pub fn in_column_space(m: &SparseMatrix, b: &SparseMatrix) -> bool {
    rank(&m.hstack(b)) == rank(m)
}

/// Standard basis vectors completing the column space of `m` to the whole space.
pub fn complement_coordinates(m: &SparseMatrix) -> Vec<usize> {
    let n = m.rows();
    let aug = m.hstack(&SparseMatrix::identity(n));
    independent_columns(&aug).into_iter().filter(|&c| c >= m.cols()).map(|c| c - m.cols()).collect()
}

/// `dim ker(d_out) - rank(d_in)` at the middle spot of `d_in` then `d_out`.
pub fn cohomology_dim(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<usize> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::DimensionMismatch(format!(
            "d_out has {} columns but d_in maps into a {}-dimensional space",
            d_out.cols(),
            d_in.rows()
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::CompositionNonzero);
    }
    Ok(d_out.cols() - rank(d_out) - rank(d_in))
}
