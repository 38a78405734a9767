//! Property suite for the spec-level invariants: closure and counting laws
//! of the combinatorial constructions, the dual-route Betti computations,
//! eigenvalue counting, and the finger-move calculus.

use std::collections::BTreeSet;

use proptest::prelude::*;

use homgrow_core::complexes::{davis_chamber, SimplicialComplex};
use homgrow_core::covers::{
    build_cover, building_quotient, restrict_cover, CellComplex, CellComplexBuilder, CoverMap,
    GraphProductSpec, QuotientTarget,
};
use homgrow_core::embedding::{
    finger_move, intersection_vector, mod2_graph_obstruction, moment_immersion,
};
use homgrow_core::homology::{
    betti, integral_homology, laplacian, operator_norm_bound, pinch_trace,
    small_eigenvalue_check, uct_inequality_check,
};
use homgrow_core::linalg::sparse::rank_int;
use homgrow_core::linalg::SparseMat;
use homgrow_core::{rat, CoeffField, Int, Rat};

fn vertex_name(v: u32) -> String {
    format!("v{v}")
}

/// Random small complexes from maximal simplex candidates.
fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(prop::collection::btree_set(0u32..6, 1..4), 1..6).prop_map(|maximal| {
        let named: Vec<Vec<String>> = maximal
            .into_iter()
            .map(|s| s.into_iter().map(vertex_name).collect())
            .collect();
        SimplicialComplex::build(&named).unwrap()
    })
}

/// Random flag complexes: clique complexes of random graphs on ≤ 6 vertices.
fn arb_flag_complex() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::btree_set((0u32..6, 0u32..6), 0..12).prop_map(|edges| {
        let mut maximal: Vec<Vec<String>> = (0..6).map(|v| vec![vertex_name(v)]).collect();
        let edge_set: BTreeSet<(u32, u32)> = edges
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        // add all cliques (size ≤ 4 is enough on 6 vertices for this test)
        let adj = |a: u32, b: u32| edge_set.contains(&(a.min(b), a.max(b)));
        let mut cliques: Vec<Vec<u32>> = edge_set.iter().map(|&(a, b)| vec![a, b]).collect();
        let mut level = cliques.clone();
        while !level.is_empty() {
            let mut next = Vec::new();
            for c in &level {
                for v in c.last().unwrap() + 1..6 {
                    if c.iter().all(|&u| adj(u, v)) {
                        let mut bigger = c.clone();
                        bigger.push(v);
                        next.push(bigger);
                    }
                }
            }
            cliques.extend(next.iter().cloned());
            level = next;
        }
        maximal.extend(
            cliques
                .into_iter()
                .map(|c| c.into_iter().map(vertex_name).collect::<Vec<_>>()),
        );
        SimplicialComplex::build(&maximal).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn downward_closure_holds(k in arb_complex()) {
        for spx in k.all_simplices() {
            for i in 0..spx.len() {
                let mut face = spx.clone();
                face.remove(i);
                if !face.is_empty() {
                    prop_assert!(k.contains(&face));
                }
            }
        }
        for v in 0..k.vertex_count() as u32 {
            prop_assert!(k.contains(&[v]));
        }
    }

    #[test]
    fn barycentric_subdivisions_are_flag(k in arb_complex()) {
        prop_assert!(k.barycentric_subdivision().is_flag());
    }

    #[test]
    fn octahedralization_counts_and_flagness(k in arb_flag_complex()) {
        let (ok, _) = k.octahedralize();
        let f = k.f_vector();
        let of = ok.f_vector();
        prop_assert_eq!(f.len(), of.len());
        for (d, &count) in f.iter().enumerate() {
            prop_assert_eq!(of[d], (1usize << (d + 1)) * count);
        }
        prop_assert!(ok.is_flag());
    }

    #[test]
    fn octahedralization_commutes_with_full_subcomplex(
        k in arb_complex(),
        keep in prop::collection::btree_set(0u32..6, 1..6),
    ) {
        let verts: Vec<u32> = keep
            .into_iter()
            .filter(|&v| (v as usize) < k.vertex_count())
            .collect();
        prop_assume!(!verts.is_empty());
        let (ok, proj) = k.octahedralize();
        let lifted: Vec<u32> = (0..ok.vertex_count() as u32)
            .filter(|&w| verts.contains(&proj[w as usize]))
            .collect();
        let a = ok.full_subcomplex(&lifted).unwrap();
        let b = k.full_subcomplex(&verts).unwrap().octahedralize().0;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn chamber_counts(k in arb_flag_complex()) {
        let chamber = davis_chamber(&k).unwrap();
        let expected: usize = 1 + k
            .all_simplices()
            .map(|s| 1usize << s.len())
            .sum::<usize>();
        prop_assert_eq!(chamber.cube_count(), expected);
        prop_assert_eq!(chamber.euler_characteristic(), 1);
    }

    #[test]
    fn quotient_cell_counts(
        edges in prop::collection::btree_set((0u32..3, 0u32..3), 0..3),
        m in 2u64..4,
    ) {
        let mut maximal: Vec<Vec<String>> = (0..3).map(|v| vec![vertex_name(v)]).collect();
        maximal.extend(
            edges
                .into_iter()
                .filter(|&(a, b)| a != b)
                .map(|(a, b)| vec![vertex_name(a.min(b)), vertex_name(a.max(b))]),
        );
        let l = SimplicialComplex::build(&maximal).unwrap();
        prop_assume!(l.is_flag());
        let spec = GraphProductSpec::uniform(l, m).unwrap();
        let target = QuotientTarget::full(&spec);
        let x = building_quotient(&spec, &target).unwrap();
        let chamber = davis_chamber(&spec.complex).unwrap();
        let q = target.order();
        for d in 0..=chamber.dim() {
            for (pos, cube) in chamber.cubes(d).iter().enumerate() {
                let expected = q / m.pow(cube.sigma.len() as u32);
                let count = x
                    .cells(d)
                    .iter()
                    .filter(|cell| cell.base == Some(pos))
                    .count() as u64;
                prop_assert_eq!(count, expected);
            }
        }
        prop_assert!(x.is_connected());
    }

    #[test]
    fn betti_routes_agree_and_uct_passes(k in arb_complex(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let c = k.chain_complex();
        for deg in 0..=(k.dim().max(0) as usize) {
            let via_rank = betti(&c, deg, CoeffField::Q).unwrap();
            let via_snf = integral_homology(&c, deg).betti;
            prop_assert_eq!(via_rank, via_snf);
            let bp = betti(&c, deg, CoeffField::Fp(p)).unwrap();
            prop_assert!(bp >= via_rank);
            let report = uct_inequality_check(&c, deg, p).unwrap();
            prop_assert!(report.pass());
        }
    }

    #[test]
    fn laplacian_kernel_is_rational_betti(k in arb_complex()) {
        let c = k.chain_complex();
        for deg in 0..=(k.dim().max(0) as usize) {
            let lap = laplacian(&c, deg);
            let kernel = lap.nrows() - rank_int(&lap);
            prop_assert_eq!(kernel, betti(&c, deg, CoeffField::Q).unwrap());
        }
    }

    #[test]
    fn pinch_trace_bounds_betti(k in arb_complex(), r in 1u32..5) {
        let c = k.chain_complex();
        for deg in 0..=(k.dim().max(0) as usize) {
            let lap = laplacian(&c, deg);
            let d = operator_norm_bound(&c, deg);
            if d == rat(0, 1) {
                continue;
            }
            let b = betti(&c, deg, CoeffField::Q).unwrap();
            let t1 = pinch_trace(&lap, &d, r).unwrap();
            let t2 = pinch_trace(&lap, &d, r + 1).unwrap();
            prop_assert!(t1 >= Rat::from(Int::from(b as i64)));
            prop_assert!(t2 <= t1);
        }
    }

    #[test]
    fn small_eigenvalue_bound_holds(
        entries in prop::collection::vec(-9i64..=9, 36),
        eps in prop::sample::select(vec![rat(1, 2), rat(1, 4), rat(1, 8)]),
    ) {
        let n = 6;
        let mut triplets = Vec::new();
        for i in 0..n {
            for j in i..n {
                let v = entries[i * n + j];
                if v != 0 {
                    triplets.push((i, j, Int::from(v)));
                    if i != j {
                        triplets.push((j, i, Int::from(v)));
                    }
                }
            }
        }
        let m = SparseMat::from_triplets(n, n, triplets);
        let report = small_eigenvalue_check(&m, &eps).unwrap();
        prop_assert!(report.pass);
    }

    #[test]
    fn cover_euler_multiplicativity(
        perm_seeds in prop::collection::vec(0usize..6, 2),
        loops in 1usize..3,
    ) {
        let mut b = CellComplexBuilder::new();
        let v = b.vertex("v");
        for i in 0..loops {
            b.edge(format!("e{i}"), v, v);
        }
        let x = b.build();
        let n = 3;
        let all: Vec<Vec<usize>> = vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ];
        let perms: Vec<Vec<usize>> = (0..loops)
            .map(|i| all[perm_seeds[i % perm_seeds.len()] % all.len()].clone())
            .collect();
        let cover = CoverMap { degree: n, perms };
        let built = build_cover(&x, &cover).unwrap();
        prop_assert_eq!(built.euler_characteristic(), n as i64 * x.euler_characteristic());
        // identity covers give n times the Betti numbers
        let trivial = build_cover(&x, &CoverMap::trivial(n, loops)).unwrap();
        let cb = betti(&trivial.chain_complex(), 1, CoeffField::Q).unwrap();
        let bb = betti(&x.chain_complex(), 1, CoeffField::Q).unwrap();
        prop_assert_eq!(cb, n * bb);
    }

    #[test]
    fn restrict_commutes_with_build(
        perm_seed in 0usize..6,
        keep_edge in 0usize..2,
    ) {
        // wedge of two circles, cover of degree 3, restrict to one circle
        let mut b = CellComplexBuilder::new();
        let v = b.vertex("v");
        b.edge("e0", v, v);
        b.edge("e1", v, v);
        let x = b.build();
        let all: Vec<Vec<usize>> = vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ];
        let cover = CoverMap {
            degree: 3,
            perms: vec![all[perm_seed].clone(), all[(perm_seed + 2) % 6].clone()],
        };
        let sub = x.closure_of(1, keep_edge);
        let restricted = restrict_cover(&x, &cover, &sub).unwrap();
        let rebuilt = build_cover(&restricted.base, restricted.map.as_ref().unwrap()).unwrap();
        prop_assert_eq!(rebuilt.f_vector(), restricted.preimage.f_vector());
        let a = betti(&rebuilt.chain_complex(), 1, CoeffField::Q).unwrap();
        let c = betti(&restricted.preimage.chain_complex(), 1, CoeffField::Q).unwrap();
        prop_assert_eq!(a, c);
    }

    #[test]
    fn finger_moves_preserve_structure(
        sigma in 0usize..9,
        support in prop::collection::vec((0usize..6, -3i64..=3), 1..4),
    ) {
        let mut edges = Vec::new();
        for a in ["x", "y", "z"] {
            for b in ["u", "v", "w"] {
                edges.push(vec![a, b]);
            }
        }
        let l = SimplicialComplex::build(&edges).unwrap();
        let f = moment_immersion(&l, 1).unwrap();
        let v = intersection_vector(&f).unwrap();
        let before = mod2_graph_obstruction(&v).unwrap();
        let mut rho = vec![0i64; l.simplex_count(0)];
        for (w, val) in support {
            rho[w] += val;
        }
        let moved = finger_move(&l, &v, sigma, &rho);
        prop_assert!(moved.symmetry_holds());
        prop_assert_eq!(mod2_graph_obstruction(&moved).unwrap(), before);
        // the move is invertible
        let neg: Vec<i64> = rho.iter().map(|x| -x).collect();
        prop_assert_eq!(finger_move(&l, &moved, sigma, &neg), v);
    }
}

/// Disconnected complexes: Betti numbers (and hence sampled growth values)
/// add over components.
#[test]
fn betti_adds_over_disjoint_unions() {
    fn circle(tag: &str, n: usize) -> Vec<Vec<String>> {
        (0..n)
            .map(|i| vec![format!("{tag}{}", i), format!("{tag}{}", (i + 1) % n)])
            .collect()
    }
    let mut maximal = circle("a", 3);
    maximal.extend(circle("b", 4));
    let both = SimplicialComplex::build(&maximal).unwrap();
    let c = both.chain_complex();
    assert_eq!(betti(&c, 0, CoeffField::Q).unwrap(), 2);
    assert_eq!(betti(&c, 1, CoeffField::Q).unwrap(), 2);
}

/// Extracting the full subcomplex is the identity on homology.
#[test]
fn extract_full_is_identity() {
    let k = SimplicialComplex::build(&[vec!["a", "b", "c"], vec!["c", "d"]]).unwrap();
    let x = CellComplex::from_simplicial(&k);
    let full = x.full();
    let y = x.extract(&full).unwrap();
    assert_eq!(x.f_vector(), y.f_vector());
}
