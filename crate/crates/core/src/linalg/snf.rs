//! Smith normal form over ℤ with optional unimodular transforms, and the
//! derived integer linear solver.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Int;

use super::sparse::SparseMat;

/// Result of a Smith normal form computation: `u * a * v = diag`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub diag: Vec<Int>,
    pub nrows: usize,
    pub ncols: usize,
    /// Left transform, present when requested.
    pub u: Option<Vec<Vec<Int>>>,
    /// Right transform, present when requested.
    pub v: Option<Vec<Vec<Int>>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Elementary divisors greater than one (the torsion part).
    pub fn torsion(&self) -> Vec<Int> {
        self.diag
            .iter()
            .filter(|d| **d > Int::one())
            .cloned()
            .collect()
    }
}

fn identity(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

pub fn smith_normal_form(mat: &SparseMat<Int>) -> SmithForm {
    smith(mat, false)
}

pub fn smith_with_transforms(mat: &SparseMat<Int>) -> SmithForm {
    smith(mat, true)
}

fn smith(mat: &SparseMat<Int>, transforms: bool) -> SmithForm {
    let nrows = mat.nrows();
    let ncols = mat.ncols();
    let mut m = mat.to_dense();
    let mut u = if transforms {
        Some(identity(nrows))
    } else {
        None
    };
    let mut v = if transforms {
        Some(identity(ncols))
    } else {
        None
    };

    let mut t = 0;
    while t < nrows.min(ncols) {
        // Smallest nonzero entry in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        m.swap(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap(t, pi);
        }
        swap_cols(&mut m, t, pj);
        if let Some(v) = v.as_mut() {
            swap_cols(v, t, pj);
        }

        loop {
            let mut clean = true;
            for i in t + 1..nrows {
                if !m[i][t].is_zero() {
                    let q = &m[i][t] / &m[t][t];
                    if !q.is_zero() {
                        row_sub(&mut m, i, t, &q);
                        if let Some(u) = u.as_mut() {
                            row_sub(u, i, t, &q);
                        }
                    }
                    if !m[i][t].is_zero() {
                        // Remainder smaller than the pivot: promote it.
                        m.swap(t, i);
                        if let Some(u) = u.as_mut() {
                            u.swap(t, i);
                        }
                        clean = false;
                        break;
                    }
                }
            }
            if !clean {
                continue;
            }
            for j in t + 1..ncols {
                if !m[t][j].is_zero() {
                    let q = &m[t][j] / &m[t][t];
                    if !q.is_zero() {
                        col_sub(&mut m, j, t, &q);
                        if let Some(v) = v.as_mut() {
                            col_sub(v, j, t, &q);
                        }
                    }
                    if !m[t][j].is_zero() {
                        swap_cols(&mut m, t, j);
                        if let Some(v) = v.as_mut() {
                            swap_cols(v, t, j);
                        }
                        clean = false;
                        break;
                    }
                }
            }
            if !clean {
                continue;
            }
            // Divisibility fix-up: the pivot must divide the whole block.
            let mut fixed = true;
            'outer: for i in t + 1..nrows {
                for j in t + 1..ncols {
                    if !(&m[i][j] % &m[t][t]).is_zero() {
                        let one = Int::one();
                        row_sub(&mut m, t, i, &-one.clone());
                        if let Some(u) = u.as_mut() {
                            row_sub(u, t, i, &-one);
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -x.clone();
            }
            if let Some(u) = u.as_mut() {
                for x in u[t].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
        t += 1;
    }

    let diag: Vec<Int> = (0..t).map(|i| m[i][i].clone()).collect();
    debug_assert!(diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    SmithForm {
        diag,
        nrows,
        ncols,
        u,
        v,
    }
}

fn swap_cols(m: &mut [Vec<Int>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// row_i -= q * row_j
fn row_sub(m: &mut [Vec<Int>], i: usize, j: usize, q: &Int) {
    let rj = m[j].clone();
    for (x, y) in m[i].iter_mut().zip(rj) {
        *x = &*x - q * y;
    }
}

/// col_i -= q * col_j
fn col_sub(m: &mut [Vec<Int>], i: usize, j: usize, q: &Int) {
    for row in m.iter_mut() {
        let y = row[j].clone();
        row[i] = &row[i] - q * y;
    }
}

/// Solve `A x = b` over ℤ; `None` when no integral solution exists.
pub fn solve_integer(a: &SparseMat<Int>, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(a.nrows(), b.len());
    let sf = smith_with_transforms(a);
    let u = sf.u.as_ref().unwrap();
    let v = sf.v.as_ref().unwrap();
    let ub: Vec<Int> = u
        .iter()
        .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
        .collect();
    let mut y = vec![Int::zero(); sf.ncols];
    for (i, coeff) in ub.iter().enumerate() {
        if i < sf.diag.len() {
            let (q, r) = coeff.div_rem(&sf.diag[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !coeff.is_zero() {
            return None;
        }
    }
    let x: Vec<Int> = (0..sf.ncols)
        .map(|i| (0..sf.ncols).map(|j| &v[i][j] * &y[j]).sum())
        .collect();
    Some(x)
}
