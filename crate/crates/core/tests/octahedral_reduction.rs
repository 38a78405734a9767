//! End-to-end octahedral embedding reductions in dimension 2, driving the
//! odd-torsion and even-torsion branches that graphs cannot reach: the
//! top integral cohomology of a graph is free, so only a 2-complex
//! exercises the scaled reduction.

use homgrow_core::complexes::SimplicialComplex;
use homgrow_core::embedding::{
    moment_immersion, octahedral_obstruction_reduce, perturbed_octahedral_immersion,
    IntersectionVector, OctaOutcome,
};
use homgrow_core::homology::integral_homology;
use homgrow_core::{rat, Int, Rat};

/// S¹ ∪₃ e²: a 9-gon disk whose boundary is identified with period 3.
/// Its first homology is Z/3, so its top cohomology is Z/3: finite of odd
/// order, the exact hypothesis of the embedding reduction.
fn moore_z3() -> SimplicialComplex {
    let c = |k: usize| format!("c{}", k % 3);
    let i = |k: usize| format!("i{}", k % 9);
    let mut faces: Vec<Vec<String>> = Vec::new();
    for k in 0..9 {
        faces.push(vec![c(k), c(k + 1), i(k)]);
        faces.push(vec![c(k + 1), i(k), i(k + 1)]);
        faces.push(vec![i(k), i(k + 1), "z".to_string()]);
    }
    SimplicialComplex::build(&faces).unwrap()
}

fn deterministic_perturbation(l: &SimplicialComplex, width: usize) -> Vec<Vec<Rat>> {
    (0..l.vertex_count())
        .map(|i| {
            let seeds = [
                ((i * 7 + 3) % 11) as i64 - 5,
                ((i * 5 + 1) % 13) as i64 - 6,
                ((i * 3 + 2) % 7) as i64 - 3,
                ((i * 11 + 5) % 17) as i64 - 8,
            ];
            (0..width).map(|j| rat(2 * seeds[j % 4] + 1 + j as i64, 1)).collect()
        })
        .collect()
}

#[test]
fn moore_space_reduces_with_odd_scaling() {
    let l = moore_z3();
    let chain = l.chain_complex();
    let h1 = integral_homology(&chain, 1);
    assert_eq!((h1.betti, h1.torsion.clone()), (0, vec![Int::from(3)]));
    assert_eq!(integral_homology(&chain, 2).betti, 0);

    let f = moment_immersion(&l, 2).unwrap();
    let x = deterministic_perturbation(&l, 4);
    let p = perturbed_octahedral_immersion(&l, &f, &x, &rat(1, 256)).unwrap();
    assert!(!p.vector.is_zero(), "perturbed immersion should self-intersect");
    let out =
        octahedral_obstruction_reduce(&l, &p.octahedralization, &p.projection, &p.vector)
            .unwrap();
    match out {
        OctaOutcome::Reduced {
            scaled_by,
            d2_caveat,
            ..
        } => {
            assert_eq!(scaled_by, 3);
            assert!(d2_caveat);
        }
        OctaOutcome::Obstructed { certificate } => panic!("unexpected: {certificate}"),
    }
}

#[test]
fn projective_plane_is_obstructed_by_even_torsion() {
    // 6-vertex projective plane: top cohomology Z/2, even order
    let l = SimplicialComplex::build(&[
        vec!["1", "2", "3"],
        vec!["1", "2", "4"],
        vec!["1", "3", "5"],
        vec!["1", "4", "6"],
        vec!["1", "5", "6"],
        vec!["2", "3", "6"],
        vec!["2", "4", "5"],
        vec!["2", "5", "6"],
        vec!["3", "4", "5"],
        vec!["3", "4", "6"],
    ])
    .unwrap();
    let (ol, proj) = l.octahedralize();
    // the zero vector is vacuously invariant; the cohomology test rejects
    // before any solving happens
    let tops = ol.simplices(2);
    let mut entries = std::collections::BTreeMap::new();
    for (i, sigma) in tops.iter().enumerate() {
        for (j, tau) in tops.iter().enumerate() {
            if i != j && sigma.iter().all(|v| !tau.contains(v)) {
                entries.insert((i, j), 0);
            }
        }
    }
    let zero = IntersectionVector { d: 2, entries };
    let out = octahedral_obstruction_reduce(&l, &ol, &proj, &zero).unwrap();
    match out {
        OctaOutcome::Obstructed { certificate } => {
            assert!(certificate.contains("even order 2"), "{certificate}");
        }
        OctaOutcome::Reduced { .. } => panic!("even torsion must obstruct"),
    }
}
