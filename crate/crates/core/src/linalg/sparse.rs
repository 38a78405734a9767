//! Sparse column-major matrices and exact rank computation.
//!
//! Two elimination routes are provided: a generic field route (used with
//! `Fp` and `Rat` scalars) and a fraction-free integer route for rational
//! ranks of integer matrices. Both are persistence-style column reductions
//! pivoting on the lowest nonzero row, which keeps fill-in small on
//! boundary matrices.

use num_integer::Integer;
use num_traits::Zero;

use crate::Int;

use super::field::FieldScalar;

/// Column-major sparse matrix. Each column is sorted by row index with
/// duplicate entries summed at freeze time.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat<T> {
    nrows: usize,
    cols: Vec<Vec<(usize, T)>>,
}

impl<T: Clone + PartialEq + Zero> SparseMat<T> {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMat {
            nrows,
            cols: vec![Vec::new(); ncols],
        }
    }

    /// Build from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Self
    where
        T: std::ops::Add<Output = T>,
    {
        let mut cols: Vec<Vec<(usize, T)>> = vec![Vec::new(); ncols];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet out of bounds");
            cols[c].push((r, v));
        }
        let cols = cols
            .into_iter()
            .map(|mut col| {
                col.sort_by_key(|&(r, _)| r);
                let mut out: Vec<(usize, T)> = Vec::with_capacity(col.len());
                for (r, v) in col {
                    match out.last_mut() {
                        Some((lr, lv)) if *lr == r => {
                            *lv = lv.clone() + v;
                        }
                        _ => out.push((r, v)),
                    }
                }
                out.retain(|(_, v)| !v.is_zero());
                out
            })
            .collect();
        SparseMat { nrows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &[(usize, T)] {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                rows[*r].push((j, v.clone()));
            }
        }
        SparseMat {
            nrows: self.cols.len(),
            cols: rows,
        }
    }

    pub fn map<U: Clone + PartialEq + Zero>(&self, f: impl Fn(&T) -> U) -> SparseMat<U> {
        SparseMat {
            nrows: self.nrows,
            cols: self
                .cols
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|(r, v)| (*r, f(v)))
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols.len()]; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                out[*r][j] = v.clone();
            }
        }
        out
    }
}

/// Merge `a - q*b` for sorted sparse columns over a field.
fn axpy_field<T: FieldScalar>(a: &[(usize, T)], b: &[(usize, T)], q: &T) -> Vec<(usize, T)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&(ra, _)), Some(&(rb, _))) if ra == rb => {
                let v = a[i].1.clone() - q.clone() * b[j].1.clone();
                i += 1;
                j += 1;
                (ra, v)
            }
            (Some(&(ra, _)), Some(&(rb, _))) if ra < rb => {
                let v = a[i].1.clone();
                i += 1;
                (ra, v)
            }
            (Some(_), Some(&(rb, _))) => {
                let v = -(q.clone() * b[j].1.clone());
                j += 1;
                (rb, v)
            }
            (Some(&(ra, _)), None) => {
                let v = a[i].1.clone();
                i += 1;
                (ra, v)
            }
            (None, Some(&(rb, _))) => {
                let v = -(q.clone() * b[j].1.clone());
                j += 1;
                (rb, v)
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    out
}

/// Rank over a field by column reduction on the lowest nonzero row.
pub fn rank_field<T: FieldScalar>(mat: &SparseMat<T>) -> usize {
    let mut pivots: Vec<Option<usize>> = vec![None; mat.nrows];
    let mut stored: Vec<Vec<(usize, T)>> = Vec::new();
    let mut rank = 0;
    for j in 0..mat.ncols() {
        let mut col = mat.cols[j].clone();
        loop {
            let Some(&(low, ref v)) = col.last() else {
                break;
            };
            match pivots[low] {
                Some(p) => {
                    let pivot = &stored[p];
                    let pv = &pivot.last().unwrap().1;
                    let q = v.clone() / pv.clone();
                    col = axpy_field(&col, pivot, &q);
                }
                None => {
                    pivots[low] = Some(stored.len());
                    stored.push(col);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn content(col: &[(usize, Int)]) -> Int {
    let mut g = Int::zero();
    for (_, v) in col {
        g = g.gcd(v);
        if g == Int::from(1) {
            break;
        }
    }
    g
}

/// Rank of an integer matrix over ℚ by fraction-free column reduction:
/// the combination `pv*col - cv*pivot` stays integral and the gcd content
/// is stripped after every step to control entry growth.
pub fn rank_int(mat: &SparseMat<Int>) -> usize {
    let mut pivots: Vec<Option<usize>> = vec![None; mat.nrows];
    let mut stored: Vec<Vec<(usize, Int)>> = Vec::new();
    let mut rank = 0;
    for j in 0..mat.ncols() {
        let mut col = mat.cols[j].clone();
        loop {
            let Some(&(low, ref cv)) = col.last() else {
                break;
            };
            match pivots[low] {
                Some(p) => {
                    let pivot = &stored[p];
                    let pv = pivot.last().unwrap().1.clone();
                    let cv = cv.clone();
                    col = axpy_int(&col, pivot, &pv, &cv);
                    let g = content(&col);
                    if g > Int::from(1) {
                        for (_, v) in col.iter_mut() {
                            *v = &*v / &g;
                        }
                    }
                }
                None => {
                    pivots[low] = Some(stored.len());
                    stored.push(col);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// `pv*a - cv*b` for sorted integer columns; the result has no entry in
/// the shared lowest row.
fn axpy_int(a: &[(usize, Int)], b: &[(usize, Int)], pv: &Int, cv: &Int) -> Vec<(usize, Int)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&(ra, _)), Some(&(rb, _))) if ra == rb => {
                let v = pv * &a[i].1 - cv * &b[j].1;
                i += 1;
                j += 1;
                (ra, v)
            }
            (Some(&(ra, _)), Some(&(rb, _))) if ra < rb => {
                let v = pv * &a[i].1;
                i += 1;
                (ra, v)
            }
            (Some(_), Some(&(rb, _))) => {
                let v = -(cv * &b[j].1);
                j += 1;
                (rb, v)
            }
            (Some(&(ra, _)), None) => {
                let v = pv * &a[i].1;
                i += 1;
                (ra, v)
            }
            (None, Some(&(rb, _))) => {
                let v = -(cv * &b[j].1);
                j += 1;
                (rb, v)
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    out
}

/// Sparse matrix product `a * b`.
pub fn matmul<T>(a: &SparseMat<T>, b: &SparseMat<T>) -> SparseMat<T>
where
    T: Clone + PartialEq + Zero + std::ops::Mul<Output = T> + std::ops::Add<Output = T>,
{
    assert_eq!(a.ncols(), b.nrows());
    let mut triplets = Vec::new();
    for j in 0..b.ncols() {
        let mut acc: std::collections::BTreeMap<usize, T> = std::collections::BTreeMap::new();
        for (k, bv) in b.col(j) {
            for (r, av) in a.col(*k) {
                let term = av.clone() * bv.clone();
                match acc.remove(r) {
                    Some(old) => {
                        acc.insert(*r, old + term);
                    }
                    None => {
                        acc.insert(*r, term);
                    }
                }
            }
        }
        for (r, v) in acc {
            if !v.is_zero() {
                triplets.push((r, j, v));
            }
        }
    }
    SparseMat::from_triplets(a.nrows(), b.ncols(), triplets)
}

/// Multiply a sparse matrix by a dense vector.
pub fn matvec<T>(mat: &SparseMat<T>, x: &[T]) -> Vec<T>
where
    T: FieldScalar + std::ops::AddAssign,
{
    assert_eq!(mat.ncols(), x.len());
    let mut y = vec![T::zero(); mat.nrows];
    for (j, col) in mat.cols.iter().enumerate() {
        if x[j].is_zero() {
            continue;
        }
        for (r, v) in col {
            y[*r] += v.clone() * x[j].clone();
        }
    }
    y
}

/// Solve `A x = b` over a field by Gauss-Jordan on a dense copy.
/// Free variables are set to zero; returns `None` when inconsistent.
pub fn solve_dense<T: FieldScalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let nrows = a.len();
    let ncols = if nrows == 0 { 0 } else { a[0].len() };
    assert_eq!(b.len(), nrows);
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][col].clone();
        for k in col..=ncols {
            m[rank][k] = m[rank][k].clone() / inv.clone();
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for k in col..=ncols {
                    let delta = factor.clone() * m[rank][k].clone();
                    m[r][k] = m[r][k].clone() - delta;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    // Inconsistent if a zero row has nonzero rhs.
    for r in rank..nrows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![T::zero(); ncols];
    for (r, &col) in pivot_cols.iter().enumerate() {
        x[col] = m[r][ncols].clone();
    }
    Some(x)
}

/// Row index of the first inconsistent equation of `A x = b` over a field,
/// if the system is unsolvable. Used for unsolvability certificates.
pub fn inconsistent_row<T: FieldScalar>(a: &[Vec<T>], b: &[T]) -> Option<usize> {
    let nrows = a.len();
    let ncols = if nrows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    // Track original row identities through swaps.
    let mut origin: Vec<usize> = (0..nrows).collect();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        origin.swap(rank, piv);
        let inv = m[rank][col].clone();
        for k in col..=ncols {
            m[rank][k] = m[rank][k].clone() / inv.clone();
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for k in col..=ncols {
                    let delta = factor.clone() * m[rank][k].clone();
                    m[r][k] = m[r][k].clone() - delta;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    (rank..nrows)
        .find(|&r| !m[r][ncols].is_zero())
        .map(|r| origin[r])
}
