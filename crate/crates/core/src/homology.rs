//! Exact homology of chain complexes over ℚ, 𝔽_p and ℤ, combinatorial
//! Laplacians, eigenvalue counting and trace pinching.
//!
//! Betti numbers over ℚ go through fraction-free integer elimination;
//! over 𝔽_p through modular elimination; over ℤ through Smith normal form.
//! The ℚ and ℤ routes are independent and cross-checked in the tests.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::field::is_prime;
use crate::linalg::poly::{charpoly, count_positive_roots_upto};
use crate::linalg::snf::smith_normal_form;
use crate::linalg::sparse::{matmul, matvec, rank_field, rank_int, SparseMat};
use crate::{CoeffField, Fp, Int, Rat};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix size {0} exceeds the exact eigenvalue-counting cap of {1}")]
    TooLarge(usize, usize),
    #[error("pinching bound {0} is below the observed norm bound {1}")]
    NormBoundViolated(Rat, Rat),
    #[error("epsilon must lie in (0,1), got {0}")]
    BadEpsilon(Rat),
}

/// Documented cap for the Sturm-sequence eigenvalue path.
pub const EIGENVALUE_SIZE_CAP: usize = 200;

/// Chain complex of a finite cell complex: per-degree sparse integer
/// boundary matrices with rows the (k-1)-cells and columns the k-cells.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    counts: Vec<usize>,
    boundaries: Vec<SparseMat<Int>>,
}

impl ChainComplex {
    /// Validates shapes and ∂∘∂ = 0.
    pub fn new(counts: Vec<usize>, boundaries: Vec<SparseMat<Int>>) -> Self {
        assert_eq!(counts.len(), boundaries.len());
        for (k, b) in boundaries.iter().enumerate() {
            assert_eq!(b.ncols(), counts[k], "boundary {k} column count");
            let expected_rows = if k == 0 { 0 } else { counts[k - 1] };
            assert_eq!(b.nrows(), expected_rows, "boundary {k} row count");
            if k > 0 {
                assert!(
                    matmul(&boundaries[k - 1], b).is_zero_matrix(),
                    "boundary squared is nonzero in degree {k}"
                );
            }
        }
        ChainComplex { counts, boundaries }
    }

    pub fn dim(&self) -> isize {
        self.counts.len() as isize - 1
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn cells(&self, k: usize) -> usize {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn boundary(&self, k: usize) -> SparseMat<Int> {
        if k < self.boundaries.len() {
            self.boundaries[k].clone()
        } else {
            let rows = self.counts.get(k.wrapping_sub(1)).copied().unwrap_or(0);
            SparseMat::zero(rows, 0)
        }
    }

    pub fn total_cells(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

fn rank_over(mat: &SparseMat<Int>, field: CoeffField) -> usize {
    match field {
        CoeffField::Q => rank_int(mat),
        CoeffField::Fp(p) => {
            let m: SparseMat<Fp> = mat.map(|v| Fp::from_int(v, p));
            rank_field(&m)
        }
    }
}

/// dim_𝔽 H_k by exact rank computation.
pub fn betti(c: &ChainComplex, k: usize, field: CoeffField) -> Result<usize, HomologyError> {
    if let CoeffField::Fp(p) = field {
        if !is_prime(p) {
            return Err(HomologyError::CompositeModulus(p));
        }
    }
    if k >= self_len(c) {
        return Ok(0);
    }
    let rank_in = rank_over(&c.boundary(k), field);
    let rank_out = rank_over(&c.boundary(k + 1), field);
    Ok(c.cells(k) - rank_in - rank_out)
}

fn self_len(c: &ChainComplex) -> usize {
    c.counts.len()
}

/// Betti numbers in all degrees at once.
pub fn betti_all(c: &ChainComplex, field: CoeffField) -> Result<Vec<usize>, HomologyError> {
    (0..self_len(c)).map(|k| betti(c, k, field)).collect()
}

/// Coefficient ring of a homology computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingTag {
    Z,
    Q,
    Fp(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    pub degree: usize,
    pub ring: RingTag,
    pub betti: usize,
    /// Elementary divisors greater than one; empty unless `ring` is `Z`.
    pub torsion: Vec<Int>,
}

/// Integral homology via Smith normal form of ∂_k and ∂_{k+1}.
pub fn integral_homology(c: &ChainComplex, k: usize) -> HomologyResult {
    if k >= self_len(c) {
        return HomologyResult {
            degree: k,
            ring: RingTag::Z,
            betti: 0,
            torsion: Vec::new(),
        };
    }
    let snf_in = smith_normal_form(&c.boundary(k));
    let snf_out = smith_normal_form(&c.boundary(k + 1));
    HomologyResult {
        degree: k,
        ring: RingTag::Z,
        betti: c.cells(k) - snf_in.rank() - snf_out.rank(),
        torsion: snf_out.torsion(),
    }
}

/// Sum of log|d| over the elementary divisors, reported as the divisor
/// count statistics used by the universal-coefficient check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UctReport {
    pub degree: usize,
    pub prime: u64,
    pub betti_fp: usize,
    pub betti_q: usize,
    /// Divisors of H_k divisible by p.
    pub torsion_k: usize,
    /// Divisors of H_{k-1} divisible by p.
    pub torsion_km1: usize,
    pub lower_ok: bool, // 0 <= betti_fp - betti_q
    pub upper_ok: bool, // betti_fp - betti_q <= torsion_k + torsion_km1
}

impl UctReport {
    pub fn pass(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// The universal-coefficient inequality at a prime p, in exact arithmetic:
/// log-p terms are compared via counts of p-divisible elementary divisors.
pub fn uct_inequality_check(
    c: &ChainComplex,
    k: usize,
    p: u64,
) -> Result<UctReport, HomologyError> {
    if !is_prime(p) {
        return Err(HomologyError::CompositeModulus(p));
    }
    let betti_fp = betti(c, k, CoeffField::Fp(p))?;
    let betti_q = betti(c, k, CoeffField::Q)?;
    let count_p = |h: &HomologyResult| {
        let p = Int::from(p);
        h.torsion.iter().filter(|d| (*d % &p).is_zero()).count()
    };
    let torsion_k = count_p(&integral_homology(c, k));
    let torsion_km1 = if k == 0 {
        0
    } else {
        count_p(&integral_homology(c, k - 1))
    };
    Ok(UctReport {
        degree: k,
        prime: p,
        betti_fp,
        betti_q,
        torsion_k,
        torsion_km1,
        lower_ok: betti_fp >= betti_q,
        upper_ok: betti_fp - betti_q.min(betti_fp) <= torsion_k + torsion_km1,
    })
}

/// Combinatorial Laplacian Δ_k = ∂_k^T ∂_k + ∂_{k+1} ∂_{k+1}^T.
pub fn laplacian(c: &ChainComplex, k: usize) -> SparseMat<Int> {
    let n = c.cells(k);
    if n == 0 {
        return SparseMat::zero(0, 0);
    }
    let din = c.boundary(k);
    let dout = c.boundary(k + 1);
    let mut lap = matmul(&din.transpose(), &din);
    let up = matmul(&dout, &dout.transpose());
    // add
    let mut triplets = Vec::new();
    for j in 0..n {
        for (r, v) in lap.col(j) {
            triplets.push((*r, j, v.clone()));
        }
        for (r, v) in up.col(j) {
            triplets.push((*r, j, v.clone()));
        }
    }
    lap = SparseMat::from_triplets(n, n, triplets);
    lap
}

fn is_symmetric(m: &SparseMat<Int>) -> bool {
    m.nrows() == m.ncols() && *m == m.transpose()
}

/// Max row absolute sum: an upper bound for the operator norm.
pub fn row_sum_norm(m: &SparseMat<Int>) -> Int {
    let t = m.transpose();
    (0..t.ncols())
        .map(|j| t.col(j).iter().map(|(_, v)| v.abs()).sum::<Int>())
        .max()
        .unwrap_or_else(Int::zero)
}

/// Operator-norm bound D for the degree-k Laplacian: the max row sum of
/// the base complex, valid for every cover since covers preserve the local
/// structure.
pub fn operator_norm_bound(c: &ChainComplex, k: usize) -> Rat {
    Rat::from(row_sum_norm(&laplacian(c, k)))
}

#[derive(Clone, Debug)]
pub struct SmallEigReport {
    pub size: usize,
    /// Eigenvalues in (0, ε], counted with multiplicity, by Sturm counting
    /// on the exact characteristic polynomial.
    pub n_eps: usize,
    /// Kernel dimension (eigenvalue 0 multiplicity), split off via rank.
    pub zero_dim: usize,
    pub norm_bound: Int,
    /// N_ε ≤ N log D / log(1/ε), decided exactly as (1/ε)^N_ε ≤ D^N.
    pub pass: bool,
    /// Display-only approximation of the bound.
    pub bound_approx: f64,
}

/// Exact count of small eigenvalues of a symmetric integer matrix and the
/// eigenvalue-counting bound.
pub fn small_eigenvalue_check(
    delta: &SparseMat<Int>,
    eps: &Rat,
) -> Result<SmallEigReport, HomologyError> {
    if !(eps > &Rat::zero() && eps < &Rat::one()) {
        return Err(HomologyError::BadEpsilon(eps.clone()));
    }
    if !is_symmetric(delta) {
        return Err(HomologyError::NotSymmetric);
    }
    let n = delta.nrows();
    if n > EIGENVALUE_SIZE_CAP {
        return Err(HomologyError::TooLarge(n, EIGENVALUE_SIZE_CAP));
    }
    if n == 0 {
        return Ok(SmallEigReport {
            size: 0,
            n_eps: 0,
            zero_dim: 0,
            norm_bound: Int::zero(),
            pass: true,
            bound_approx: 0.0,
        });
    }
    let p = charpoly(&delta.to_dense());
    let (zero_dim, n_eps) = count_positive_roots_upto(&p, eps);
    // The t-adic valuation of the characteristic polynomial must match the
    // kernel dimension computed by rank; both are exact.
    assert_eq!(zero_dim, n - rank_int(delta), "charpoly/rank disagree");
    let d = row_sum_norm(delta);
    let pass = if n_eps == 0 {
        true
    } else {
        let lhs = Rat::new(eps.denom().clone(), eps.numer().clone());
        let lhs = power(&lhs, n_eps);
        let rhs = power(&Rat::from(d.clone()), n);
        lhs <= rhs
    };
    let bound_approx = if d > Int::one() {
        let df = big_to_f64(&d);
        let ef = big_to_f64(eps.denom()) / big_to_f64(eps.numer());
        n as f64 * df.ln() / ef.ln()
    } else {
        0.0
    };
    Ok(SmallEigReport {
        size: n,
        n_eps,
        zero_dim,
        norm_bound: d,
        pass,
        bound_approx,
    })
}

fn power(base: &Rat, exp: usize) -> Rat {
    let mut out = Rat::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

fn big_to_f64(v: &Int) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::MAX)
}

/// Exact rational trace of f(Δ) for f(x) = (1 - x/D)^r, by iterated sparse
/// multiplication. Requires D at least the observed row-sum norm bound.
pub fn pinch_trace(delta: &SparseMat<Int>, d: &Rat, r: u32) -> Result<Rat, HomologyError> {
    if !is_symmetric(delta) {
        return Err(HomologyError::NotSymmetric);
    }
    let observed = Rat::from(row_sum_norm(delta));
    if *d < observed {
        return Err(HomologyError::NormBoundViolated(d.clone(), observed));
    }
    let n = delta.nrows();
    if n == 0 {
        return Ok(Rat::zero());
    }
    if d.is_zero() {
        // Observed norm is then zero too, so Δ = 0 and f(Δ) = I.
        return Ok(Rat::from(Int::from(n as i64)));
    }
    let dq: SparseMat<Rat> = delta.map(|v| Rat::from(v.clone()));
    let mut trace = Rat::zero();
    for i in 0..n {
        let mut v = vec![Rat::zero(); n];
        v[i] = Rat::one();
        for _ in 0..r {
            let av = matvec(&dq, &v);
            for (x, a) in v.iter_mut().zip(av) {
                *x = x.clone() - a / d.clone();
            }
        }
        trace += v[i].clone();
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::SimplicialComplex;
    use crate::rat;

    fn cx(max: &[&[&str]]) -> SimplicialComplex {
        SimplicialComplex::build(&max.iter().map(|s| s.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn circle(n: usize) -> SimplicialComplex {
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<Vec<&str>> = (0..n)
            .map(|i| vec![names[i].as_str(), names[(i + 1) % n].as_str()])
            .collect();
        SimplicialComplex::build(&edges).unwrap()
    }

    /// Vertex-minimal 6-point triangulation of the projective plane.
    pub(crate) fn projective_plane() -> SimplicialComplex {
        cx(&[
            &["1", "2", "3"],
            &["1", "2", "4"],
            &["1", "3", "5"],
            &["1", "4", "6"],
            &["1", "5", "6"],
            &["2", "3", "6"],
            &["2", "4", "5"],
            &["2", "5", "6"],
            &["3", "4", "5"],
            &["3", "4", "6"],
        ])
    }

    #[test]
    fn betti_circle() {
        let c = circle(4).chain_complex();
        assert_eq!(betti(&c, 0, CoeffField::Q).unwrap(), 1);
        assert_eq!(betti(&c, 1, CoeffField::Q).unwrap(), 1);
        assert_eq!(betti(&c, 2, CoeffField::Q).unwrap(), 0);
    }

    #[test]
    fn betti_rejects_composite() {
        let c = circle(3).chain_complex();
        assert!(matches!(
            betti(&c, 0, CoeffField::Fp(6)),
            Err(HomologyError::CompositeModulus(6))
        ));
    }

    #[test]
    fn projective_plane_homology() {
        let k = projective_plane();
        assert_eq!(k.f_vector(), vec![6, 15, 10]);
        let c = k.chain_complex();
        assert_eq!(betti(&c, 1, CoeffField::Q).unwrap(), 0);
        assert_eq!(betti(&c, 1, CoeffField::Fp(2)).unwrap(), 1);
        assert_eq!(betti(&c, 2, CoeffField::Fp(2)).unwrap(), 1);
        assert_eq!(betti(&c, 2, CoeffField::Q).unwrap(), 0);
        let h1 = integral_homology(&c, 1);
        assert_eq!(h1.betti, 0);
        assert_eq!(h1.torsion, vec![Int::from(2)]);
    }

    #[test]
    fn sphere_homology() {
        let sphere = cx(&[
            &["a", "b", "c"],
            &["a", "b", "d"],
            &["a", "c", "d"],
            &["b", "c", "d"],
        ]);
        let c = sphere.chain_complex();
        let h2 = integral_homology(&c, 2);
        assert_eq!(h2.betti, 1);
        assert!(h2.torsion.is_empty());
        let h5 = integral_homology(&c, 5);
        assert_eq!(h5.betti, 0);
    }

    #[test]
    fn uct_on_projective_plane() {
        let c = projective_plane().chain_complex();
        let r = uct_inequality_check(&c, 1, 2).unwrap();
        assert!(r.pass());
        assert_eq!(r.betti_fp - r.betti_q, 1);
        assert_eq!(r.torsion_k, 1);
        let r3 = uct_inequality_check(&c, 1, 3).unwrap();
        assert!(r3.pass());
        assert_eq!(r3.betti_fp, r3.betti_q);
    }

    #[test]
    fn laplacian_closed_forms() {
        // Graph Laplacian of the n-cycle at degree 0.
        let c = circle(5).chain_complex();
        let lap = laplacian(&c, 0);
        let dense = lap.to_dense();
        for i in 0..5 {
            assert_eq!(dense[i][i], Int::from(2));
        }
        // single point
        let pt = cx(&[&["a"]]).chain_complex();
        assert_eq!(laplacian(&pt, 0).to_dense(), vec![vec![Int::zero()]]);
        // single edge at degree 0
        let e = cx(&[&["a", "b"]]).chain_complex();
        let dense = laplacian(&e, 0).to_dense();
        assert_eq!(dense[0][0], Int::one());
        assert_eq!(dense[0][1], Int::from(-1));
        // kernel of the Laplacian = rational Betti number
        let c4 = circle(4).chain_complex();
        for k in 0..2 {
            let lap = laplacian(&c4, k);
            let kernel = lap.nrows() - rank_int(&lap);
            assert_eq!(kernel, betti(&c4, k, CoeffField::Q).unwrap());
        }
        // row-sum norm bounds
        assert_eq!(operator_norm_bound(&c, 0), rat(4, 1));
        assert_eq!(operator_norm_bound(&pt, 0), rat(0, 1));
        assert_eq!(operator_norm_bound(&e, 0), rat(2, 1));
    }

    #[test]
    fn small_eig_example() {
        let delta = SparseMat::from_triplets(
            2,
            2,
            vec![
                (0, 0, Int::from(1)),
                (0, 1, Int::from(2)),
                (1, 0, Int::from(2)),
                (1, 1, Int::from(5)),
            ],
        );
        let report = small_eigenvalue_check(&delta, &rat(1, 4)).unwrap();
        assert_eq!(report.n_eps, 1);
        assert_eq!(report.zero_dim, 0);
        assert_eq!(report.norm_bound, Int::from(7));
        assert!(report.pass);
        // [[0]] and [[2]]
        let z = SparseMat::from_triplets(1, 1, vec![(0, 0, Int::zero())]);
        let rz = small_eigenvalue_check(&z, &rat(1, 2)).unwrap();
        assert_eq!(rz.n_eps, 0);
        assert!(rz.pass);
        let two = SparseMat::from_triplets(1, 1, vec![(0, 0, Int::from(2))]);
        let r2 = small_eigenvalue_check(&two, &rat(1, 2)).unwrap();
        assert_eq!(r2.n_eps, 0);
        assert!(r2.pass);
    }

    #[test]
    fn small_eig_rejects_asymmetric() {
        let m = SparseMat::from_triplets(2, 2, vec![(0, 1, Int::one())]);
        assert!(matches!(
            small_eigenvalue_check(&m, &rat(1, 2)),
            Err(HomologyError::NotSymmetric)
        ));
    }

    #[test]
    fn pinch_trace_examples() {
        // Δ = 0 (3x3): trace = 3.
        let z = SparseMat::zero(3, 3);
        assert_eq!(pinch_trace(&z, &rat(4, 1), 5).unwrap(), rat(3, 1));
        // Δ = D·I: trace 0.
        let di = SparseMat::from_triplets(
            2,
            2,
            vec![(0, 0, Int::from(4)), (1, 1, Int::from(4))],
        );
        assert_eq!(pinch_trace(&di, &rat(4, 1), 3).unwrap(), rat(0, 1));
        // 4-cycle degree-0 Laplacian, D=4, r=2: eigenvalues {0,2,2,4},
        // sum of (1 - λ/4)^2 = 1 + 1/4 + 1/4 + 0 = 3/2.
        let c = circle(4).chain_complex();
        let lap = laplacian(&c, 0);
        assert_eq!(pinch_trace(&lap, &rat(4, 1), 2).unwrap(), rat(3, 2));
        // D below the observed bound is rejected.
        assert!(pinch_trace(&lap, &rat(3, 1), 2).is_err());
    }

    #[test]
    fn pinch_trace_dominates_betti_and_decreases() {
        let c = projective_plane().chain_complex();
        for k in 0..=2usize {
            let lap = laplacian(&c, k);
            let d = operator_norm_bound(&c, k);
            if d.is_zero() {
                continue;
            }
            let b = betti(&c, k, CoeffField::Q).unwrap();
            let mut last: Option<Rat> = None;
            for r in 1..=4 {
                let t = pinch_trace(&lap, &d, r).unwrap();
                assert!(t >= Rat::from(Int::from(b as i64)));
                if let Some(prev) = last {
                    assert!(t <= prev);
                }
                last = Some(t);
            }
        }
    }
}
