//! Finger-move calculus on intersection vectors, the mod-2 planarity
//! obstruction for graphs, odd scaling, and the van Kampen linear system.


use crate::complexes::{SimplicialComplex, Vertex};
use crate::linalg::snf::solve_integer;
use crate::linalg::sparse::{inconsistent_row, solve_dense, SparseMat};
use crate::{Fp, Int};

use super::{EmbedError, IntersectionVector};

/// ρ(∂τ) for a cochain ρ on the (d-1)-simplices, with the sorted-vertex
/// orientation: the i-th face of τ carries the sign (-1)^i.
fn rho_of_boundary(l: &SimplicialComplex, tau: &[Vertex], rho: &[i64]) -> i64 {
    let d = tau.len() - 1;
    let lower = l.simplices(d - 1);
    let mut total = 0;
    for i in 0..tau.len() {
        let mut face = tau.to_vec();
        face.remove(i);
        let idx = lower
            .binary_search(&face)
            .expect("face of a simplex is a simplex");
        let sign = if i % 2 == 0 { 1 } else { -1 };
        total += sign * rho[idx];
    }
    total
}

/// Push the top simplex `sigma` with a finger specified by the cochain
/// `rho` (indexed by the (d-1)-simplices of `l`):
/// V'_{σ,τ} = V_{σ,τ} + ρ(∂τ), V'_{τ,σ} = (-1)^d V'_{σ,τ},
/// and all pairs not involving σ are unchanged.
pub fn finger_move(
    l: &SimplicialComplex,
    v: &IntersectionVector,
    sigma: usize,
    rho: &[i64],
) -> IntersectionVector {
    let d = v.d;
    let tops = l.simplices(d);
    assert_eq!(rho.len(), l.simplex_count(d.saturating_sub(1)));
    let sign = if d % 2 == 0 { 1 } else { -1 };
    let mut entries = v.entries.clone();
    for (j, tau) in tops.iter().enumerate() {
        if j == sigma || tau.iter().any(|u| tops[sigma].contains(u)) {
            continue;
        }
        let delta = rho_of_boundary(l, tau, rho);
        let updated = v.get(sigma, j) + delta;
        entries.insert((sigma, j), updated);
        entries.insert((j, sigma), sign * updated);
    }
    let out = IntersectionVector { d, entries };
    debug_assert!(out.symmetry_holds());
    out
}

/// (2k+1)·V. Solvability over 𝔽₂ is unchanged by odd scaling.
pub fn odd_scale(v: &IntersectionVector, k: u64) -> IntersectionVector {
    scale(v, 2 * k as i64 + 1)
}

pub(crate) fn scale(v: &IntersectionVector, factor: i64) -> IntersectionVector {
    IntersectionVector {
        d: v.d,
        entries: v.entries.iter().map(|(&k, &x)| (k, factor * x)).collect(),
    }
}

/// Sum of crossing parities over unordered disjoint edge pairs of a graph
/// immersed in the plane. Invariant under finger moves.
pub fn mod2_graph_obstruction(v: &IntersectionVector) -> Result<u8, EmbedError> {
    if v.d != 1 {
        return Err(EmbedError::NotAGraph);
    }
    let total: i64 = v
        .entries
        .iter()
        .filter(|(&(i, j), _)| i < j)
        .map(|(_, &x)| x)
        .sum();
    Ok((total.rem_euclid(2)) as u8)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveRing {
    Z,
    F2,
}

/// One cochain per top simplex, solving the cancellation system when the
/// report is marked solved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FingerSolution {
    pub ring: SolveRing,
    /// rho[σ][e]: coefficient of the (d-1)-simplex e in the cochain for σ.
    pub rho: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Solved(FingerSolution),
    Unsolvable { certificate: String },
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub ring: SolveRing,
    pub outcome: SolveOutcome,
    /// Finger-move completeness of the reduction is only guaranteed for
    /// d ≠ 2.
    pub d2_caveat: bool,
}

impl SolveReport {
    pub fn solved(&self) -> bool {
        matches!(self.outcome, SolveOutcome::Solved(_))
    }

    pub fn solution(&self) -> Option<&FingerSolution> {
        match &self.outcome {
            SolveOutcome::Solved(s) => Some(s),
            SolveOutcome::Unsolvable { .. } => None,
        }
    }
}

/// Solve V_{σ,τ} + ρ_σ(∂τ) + (-1)^d ρ_τ(∂σ) = 0 over all unordered
/// disjoint pairs, over ℤ (Smith normal form) or 𝔽₂ (elimination).
/// When solvable, applying the finger move ρ_σ to every σ kills V.
pub fn vankampen_solve(
    l: &SimplicialComplex,
    v: &IntersectionVector,
    ring: SolveRing,
) -> Result<SolveReport, EmbedError> {
    let d = v.d;
    if l.dim() != d as isize {
        return Err(EmbedError::DimensionMismatch(l.dim(), d));
    }
    let tops = l.simplices(d);
    let lower_count = l.simplex_count(d - 1);
    let t = tops.len();
    let sign = if d % 2 == 0 { 1i64 } else { -1 };
    // unknown (σ, e) -> column σ*lower_count + e
    let mut pairs = Vec::new();
    for i in 0..t {
        for j in i + 1..t {
            if tops[i].iter().any(|u| tops[j].contains(u)) {
                continue;
            }
            pairs.push((i, j));
        }
    }
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(pairs.len());
    let mut rhs: Vec<i64> = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        let mut row = vec![0i64; t * lower_count];
        // ρ_σ(∂τ): coefficients of the faces of τ in σ's block
        for (pos, x) in boundary_coeffs(l, &tops[j]) {
            row[i * lower_count + pos] += x;
        }
        for (pos, x) in boundary_coeffs(l, &tops[i]) {
            row[j * lower_count + pos] += sign * x;
        }
        rows.push(row);
        rhs.push(-v.get(i, j));
    }
    let d2_caveat = d == 2;
    let outcome = match ring {
        SolveRing::F2 => {
            let a: Vec<Vec<Fp>> = rows
                .iter()
                .map(|r| r.iter().map(|&x| Fp::new(x, 2)).collect())
                .collect();
            let b: Vec<Fp> = rhs.iter().map(|&x| Fp::new(x, 2)).collect();
            match solve_dense(&a, &b) {
                Some(x) => {
                    let rho = unpack(&x.iter().map(|f| f.value() as i64).collect::<Vec<_>>(), t, lower_count);
                    SolveOutcome::Solved(FingerSolution {
                        ring: SolveRing::F2,
                        rho,
                    })
                }
                None => {
                    let row = inconsistent_row(&a, &b).unwrap();
                    SolveOutcome::Unsolvable {
                        certificate: format!(
                            "inconsistent equation for the disjoint pair {:?}",
                            pairs[row]
                        ),
                    }
                }
            }
        }
        SolveRing::Z => {
            let triplets = rows.iter().enumerate().flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(move |(c, &x)| (r, c, Int::from(x)))
            });
            let a = SparseMat::from_triplets(pairs.len(), t * lower_count, triplets);
            let b: Vec<Int> = rhs.iter().map(|&x| Int::from(x)).collect();
            match solve_integer(&a, &b) {
                Some(x) => {
                    let xs: Vec<i64> = x
                        .iter()
                        .map(|v| i64::try_from(v).expect("solution exceeds i64"))
                        .collect();
                    SolveOutcome::Solved(FingerSolution {
                        ring: SolveRing::Z,
                        rho: unpack(&xs, t, lower_count),
                    })
                }
                None => SolveOutcome::Unsolvable {
                    certificate: "no integral solution (Smith normal form divisibility fails)"
                        .into(),
                },
            }
        }
    };
    // A solution must kill the vector: verify by applying the moves.
    if let SolveOutcome::Solved(sol) = &outcome {
        let mut cur = v.clone();
        for (s, rho) in sol.rho.iter().enumerate() {
            cur = finger_move(l, &cur, s, rho);
        }
        let ok = match ring {
            SolveRing::F2 => cur.is_zero_mod2(),
            SolveRing::Z => cur.is_zero(),
        };
        assert!(ok, "solver produced a non-cancelling solution");
    }
    Ok(SolveReport {
        ring,
        outcome,
        d2_caveat,
    })
}

fn boundary_coeffs(l: &SimplicialComplex, tau: &[Vertex]) -> Vec<(usize, i64)> {
    let d = tau.len() - 1;
    let lower = l.simplices(d - 1);
    (0..tau.len())
        .map(|i| {
            let mut face = tau.to_vec();
            face.remove(i);
            let idx = lower.binary_search(&face).unwrap();
            (idx, if i % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

fn unpack(flat: &[i64], t: usize, e: usize) -> Vec<Vec<i64>> {
    (0..t).map(|i| flat[i * e..(i + 1) * e].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::super::immersion::{intersection_vector, moment_immersion};
    use super::*;

    fn graph(edges: &[(&str, &str)]) -> SimplicialComplex {
        SimplicialComplex::build(
            &edges
                .iter()
                .map(|&(a, b)| vec![a, b])
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn k33() -> SimplicialComplex {
        let mut edges = Vec::new();
        for a in ["x", "y", "z"] {
            for b in ["u", "v", "w"] {
                edges.push((a, b));
            }
        }
        graph(&edges)
    }

    fn k5() -> SimplicialComplex {
        let names = ["a", "b", "c", "d", "e"];
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                edges.push((names[i], names[j]));
            }
        }
        graph(&edges)
    }

    fn k4() -> SimplicialComplex {
        let names = ["a", "b", "c", "d"];
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((names[i], names[j]));
            }
        }
        graph(&edges)
    }

    #[test]
    fn finger_move_identity_and_inverse() {
        let l = k33();
        let f = moment_immersion(&l, 1).unwrap();
        let v = intersection_vector(&f).unwrap();
        let zero_rho = vec![0i64; l.simplex_count(0)];
        assert_eq!(finger_move(&l, &v, 0, &zero_rho), v);
        let mut rho = zero_rho.clone();
        rho[2] = 3;
        rho[4] = -1;
        let moved = finger_move(&l, &v, 1, &rho);
        let neg: Vec<i64> = rho.iter().map(|x| -x).collect();
        assert_eq!(finger_move(&l, &moved, 1, &neg), v);
    }

    #[test]
    fn finger_move_changes_by_boundary() {
        // d=1, rho = indicator of one vertex: adds ±1 on edges with that
        // vertex in their boundary.
        let l = k33();
        let f = moment_immersion(&l, 1).unwrap();
        let v = intersection_vector(&f).unwrap();
        let w = 3; // some vertex index
        let mut rho = vec![0i64; l.simplex_count(0)];
        rho[w] = 1;
        let moved = finger_move(&l, &v, 0, &rho);
        let tops = l.simplices(1);
        for (j, tau) in tops.iter().enumerate() {
            if j == 0 || tau.iter().any(|u| tops[0].contains(u)) {
                continue;
            }
            let expected = if tau[1] == w as u32 {
                1
            } else if tau[0] == w as u32 {
                -1
            } else {
                0
            };
            assert_eq!(moved.get(0, j) - v.get(0, j), expected);
        }
    }

    #[test]
    fn obstruction_values() {
        let f = moment_immersion(&k33(), 1).unwrap();
        let v = intersection_vector(&f).unwrap();
        assert_eq!(mod2_graph_obstruction(&v).unwrap(), 1);
        let f = moment_immersion(&k5(), 1).unwrap();
        let v = intersection_vector(&f).unwrap();
        assert_eq!(mod2_graph_obstruction(&v).unwrap(), 1);
    }

    #[test]
    fn obstruction_invariant_under_moves() {
        let l = k5();
        let f = moment_immersion(&l, 1).unwrap();
        let mut v = intersection_vector(&f).unwrap();
        let before = mod2_graph_obstruction(&v).unwrap();
        for (s, w, val) in [(0usize, 1usize, 1i64), (3, 4, -2), (7, 0, 3)] {
            let mut rho = vec![0i64; l.simplex_count(0)];
            rho[w] = val;
            v = finger_move(&l, &v, s, &rho);
            assert!(v.symmetry_holds());
        }
        assert_eq!(mod2_graph_obstruction(&v).unwrap(), before);
    }

    #[test]
    fn solver_outcomes() {
        // K4 is planar: solvable over F2
        let l = k4();
        let f = moment_immersion(&l, 1).unwrap();
        let v = intersection_vector(&f).unwrap();
        let r = vankampen_solve(&l, &v, SolveRing::F2).unwrap();
        assert!(r.solved());
        assert!(!r.d2_caveat);
        // K33 and K5 are not: unsolvable
        for l in [k33(), k5()] {
            let f = moment_immersion(&l, 1).unwrap();
            let v = intersection_vector(&f).unwrap();
            let r = vankampen_solve(&l, &v, SolveRing::F2).unwrap();
            assert!(!r.solved());
        }
        // V = 0 has the zero solution
        let l = k4();
        let f = moment_immersion(&l, 1).unwrap();
        let v = intersection_vector(&f).unwrap().zero_like();
        let r = vankampen_solve(&l, &v, SolveRing::Z).unwrap();
        let sol = r.solution().unwrap();
        assert!(sol.rho.iter().all(|rho| rho.iter().all(|&x| x == 0)));
    }

    #[test]
    fn finger_moves_preserve_solvability() {
        // the move is invertible, so solvability over either ring is
        // unchanged in both directions
        for (l, expect) in [(k4(), true), (k33(), false)] {
            let f = moment_immersion(&l, 1).unwrap();
            let mut v = intersection_vector(&f).unwrap();
            for (s, w, val) in [(0usize, 3usize, 2i64), (2, 0, -1)] {
                let mut rho = vec![0i64; l.simplex_count(0)];
                rho[w] = val;
                v = finger_move(&l, &v, s, &rho);
            }
            let r = vankampen_solve(&l, &v, SolveRing::F2).unwrap();
            assert_eq!(r.solved(), expect);
        }
    }

    #[test]
    fn odd_scaling_preserves_f2_solvability() {
        for (l, expect) in [(k4(), true), (k33(), false), (k5(), false)] {
            let f = moment_immersion(&l, 1).unwrap();
            let v = intersection_vector(&f).unwrap();
            for k in [0u64, 1, 3] {
                let scaled = odd_scale(&v, k);
                let r = vankampen_solve(&l, &scaled, SolveRing::F2).unwrap();
                assert_eq!(r.solved(), expect);
            }
        }
    }

    #[test]
    fn geometric_detour_matches_algebraic_move() {
        use super::super::immersion::detour_intersection_vector;
        let l = k33();
        let f = moment_immersion(&l, 1).unwrap();
        let v = intersection_vector(&f).unwrap();
        let tops = l.simplices(1).to_vec();
        for (sigma, w, winding) in [(0usize, 4u32, 1i64), (4, 0, -1), (8, 2, 2)] {
            if tops[sigma].contains(&w) {
                continue;
            }
            let geo = detour_intersection_vector(&f, sigma, w, winding).unwrap();
            let mut rho = vec![0i64; l.simplex_count(0)];
            rho[w as usize] = winding;
            let alg = finger_move(&l, &v, sigma, &rho);
            assert_eq!(geo, alg, "sigma={sigma} w={w} winding={winding}");
        }
    }
}
