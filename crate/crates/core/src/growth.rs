//! Normalized Betti numbers over cover families, observed growth brackets,
//! closed-form growth of right-angled Artin groups, the graph-product
//! bound, and Mayer–Vietoris / nerve verifiers.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::complexes::SimplicialComplex;
use crate::covers::{
    building_quotient, mapping_torus_cover, CellComplex, CoverError, GraphProductSpec,
    QuotientTarget, SimplicialMap, SubComplex,
};
use crate::homology::{betti, ChainComplex, HomologyError};
use crate::linalg::SparseMat;
use crate::{CoeffField, Int, Rat};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GrowthError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("decomposition does not cover the complex")]
    BadDecomposition,
    #[error("piece intersection for nerve simplex {0:?} is neither flagged acyclic nor a point")]
    NerveIntersection(Vec<usize>),
    #[error("refinement edge ({0}, {1}) out of range")]
    BadRefinement(usize, usize),
    #[error("empty cover family")]
    EmptyFamily,
}

/// One normalized Betti number sample: b_k(X')/|X' -> X|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthSample {
    pub cover: String,
    pub degree: u64,
    pub k: usize,
    pub field: CoeffField,
    pub value: Rat,
}

/// Exact normalized Betti number of a cover (or building quotient),
/// normalized by its degree metadata. The value is checked against the
/// boundedness invariant: it never exceeds the k-cell count of the base.
pub fn normalized_betti(
    base: &CellComplex,
    cover: &CellComplex,
    k: usize,
    field: CoeffField,
) -> Result<GrowthSample, GrowthError> {
    let b = betti(&cover.chain_complex(), k, field)?;
    let degree = cover.degree();
    let value = Rat::new(Int::from(b as i64), Int::from(degree as i64));
    assert!(
        value <= Rat::from(Int::from(base.cell_count(k) as i64)),
        "normalized Betti number exceeds the base cell count"
    );
    Ok(GrowthSample {
        cover: format!("degree-{degree}"),
        degree,
        k,
        field,
        value,
    })
}

/// A member of a sampled cover family.
#[derive(Clone, Debug)]
pub struct FamilySample {
    pub id: String,
    pub degree: u64,
    pub value: Rat,
}

/// Observed growth interval over a finite sampled sub-poset. The true
/// upper/lower limits range over the infinite poset of all finite covers;
/// these numbers only bracket observations, hence the permanent caveat.
#[derive(Clone, Debug)]
pub struct GrowthBracket {
    pub observed_min: Rat,
    pub observed_max: Rat,
    /// min over members of (max over sampled refinements); the sampled
    /// analogue of the upper limit.
    pub inf_of_sup: Rat,
    /// max over members of (min over sampled refinements).
    pub sup_of_inf: Rat,
    pub family: String,
    /// Always true: a finite family never computes the true limits.
    pub sampled: bool,
}

/// Observed bracket over a family with its sampled refinement relation
/// (`refinements` lists (coarser, finer) index pairs; reflexive-transitive
/// closure is taken).
pub fn growth_bracket(
    samples: &[FamilySample],
    refinements: &[(usize, usize)],
    family: &str,
) -> Result<GrowthBracket, GrowthError> {
    if samples.is_empty() {
        return Err(GrowthError::EmptyFamily);
    }
    let n = samples.len();
    let mut above: Vec<BTreeSet<usize>> = (0..n).map(|i| BTreeSet::from([i])).collect();
    for &(lo, hi) in refinements {
        if lo >= n || hi >= n {
            return Err(GrowthError::BadRefinement(lo, hi));
        }
        above[lo].insert(hi);
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            let mut extra = BTreeSet::new();
            for &j in &above[i] {
                for &k in &above[j] {
                    if !above[i].contains(&k) {
                        extra.insert(k);
                    }
                }
            }
            if !extra.is_empty() {
                above[i].extend(extra);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let values: Vec<&Rat> = samples.iter().map(|s| &s.value).collect();
    let observed_min = values.iter().min().unwrap();
    let observed_max = values.iter().max().unwrap();
    let sup_over = |set: &BTreeSet<usize>| set.iter().map(|&i| values[i].clone()).max().unwrap();
    let inf_over = |set: &BTreeSet<usize>| set.iter().map(|&i| values[i].clone()).min().unwrap();
    let inf_of_sup = (0..n).map(|i| sup_over(&above[i])).min().unwrap();
    let sup_of_inf = (0..n).map(|i| inf_over(&above[i])).max().unwrap();
    Ok(GrowthBracket {
        observed_min: (*observed_min).clone(),
        observed_max: (*observed_max).clone(),
        inf_of_sup,
        sup_of_inf,
        family: family.to_owned(),
        sampled: true,
    })
}

/// Reduced Betti number of L in degree k-1: the common value of the upper
/// and lower growth of the right-angled Artin group A_L in degree k.
/// Convention: the reduced Betti number in degree -1 is 1 for the empty
/// complex and 0 otherwise.
pub fn raag_growth(
    l: &SimplicialComplex,
    k: usize,
    field: CoeffField,
) -> Result<usize, GrowthError> {
    if k == 0 {
        return Ok(if l.is_empty() { 1 } else { 0 });
    }
    if l.is_empty() {
        return Ok(0);
    }
    let c = l.chain_complex();
    let b = betti(&c, k - 1, field)?;
    Ok(if k == 1 { b - 1 } else { b })
}

/// Center and error of the graph-product growth estimate: the growth of
/// G_L in degree k lies within 2|∂K_L| / min m_v of the reduced Betti
/// number of L in degree k-1.
pub fn graph_product_growth_estimate(
    spec: &GraphProductSpec,
    k: usize,
    field: CoeffField,
) -> Result<(usize, Rat), GrowthError> {
    let chamber = crate::complexes::davis_chamber(&spec.complex).map_err(CoverError::from)?;
    let center = raag_growth(&spec.complex, k, field)?;
    let error = Rat::new(
        Int::from(2 * chamber.boundary_cube_count() as i64),
        Int::from(spec.min_order() as i64),
    );
    Ok((center, error))
}

#[derive(Clone, Debug)]
pub struct GpBoundReport {
    pub k: usize,
    pub field: CoeffField,
    pub degree: u64,
    pub betti: usize,
    pub value: Rat,
    pub center: usize,
    pub error: Rat,
    pub pass: bool,
    /// For k = dim L + 1: the one-sided bound b_k/n ≤ b_{k-1}(L), with the
    /// plain (unreduced) Betti number.
    pub top_dimension_pass: Option<bool>,
}

impl GpBoundReport {
    pub fn pass(&self) -> bool {
        self.pass && self.top_dimension_pass.unwrap_or(true)
    }
}

/// Build the quotient cover for the target and check the graph-product
/// bound |b_k/n - center| ≤ error at degree k.
pub fn verify_graph_product_bound(
    spec: &GraphProductSpec,
    target: &QuotientTarget,
    k: usize,
    field: CoeffField,
) -> Result<GpBoundReport, GrowthError> {
    let x = building_quotient(spec, target)?;
    verify_graph_product_bound_on(spec, &x, k, field)
}

/// Same check against an already-built quotient complex (avoids
/// rebuilding when several degrees and fields are verified).
pub fn verify_graph_product_bound_on(
    spec: &GraphProductSpec,
    x: &CellComplex,
    k: usize,
    field: CoeffField,
) -> Result<GpBoundReport, GrowthError> {
    let degree = x.degree();
    let b = betti(&x.chain_complex(), k, field)?;
    let value = Rat::new(Int::from(b as i64), Int::from(degree as i64));
    let (center, error) = graph_product_growth_estimate(spec, k, field)?;
    let diff = (value.clone() - Rat::from(Int::from(center as i64))).abs();
    let pass = diff <= error;
    let top_dimension_pass = if k as isize == spec.complex.dim() + 1 && k > 0 {
        let bl = betti(&spec.complex.chain_complex(), k - 1, field)?;
        Some(value <= Rat::from(Int::from(bl as i64)))
    } else {
        None
    };
    Ok(GpBoundReport {
        k,
        field,
        degree,
        betti: b,
        value,
        center,
        error,
        pass,
        top_dimension_pass,
    })
}

/// Decomposition X = A₁ ∪_B A₂ with B = A₁ ∩ A₂.
#[derive(Clone, Debug)]
pub struct MvDecomposition {
    pub a1: SubComplex,
    pub a2: SubComplex,
    pub b: SubComplex,
}

pub fn mv_decomposition(
    x: &CellComplex,
    a1: SubComplex,
    a2: SubComplex,
) -> Result<MvDecomposition, GrowthError> {
    a1.validate(x).map_err(GrowthError::Cover)?;
    a2.validate(x).map_err(GrowthError::Cover)?;
    if !a1.union(&a2).is_all_of(x) {
        return Err(GrowthError::BadDecomposition);
    }
    let b = a1.intersection(&a2);
    Ok(MvDecomposition { a1, a2, b })
}

/// Per-cover Mayer–Vietoris inequalities, all values normalized by the
/// cover degree.
#[derive(Clone, Debug)]
pub struct MvCoverCheck {
    pub cover: String,
    pub degree: u64,
    pub x_k: Rat,
    pub a1_k: Rat,
    pub a2_k: Rat,
    pub b_k: Rat,
    pub b_km1: Rat,
    /// β_k(X) ≤ β_k(A₁) + β_k(A₂) + β_{k-1}(B)
    pub first_ok: bool,
    /// β_k(A₁) + β_k(A₂) ≤ β_k(B) + β_k(X)
    pub second_ok: bool,
}

#[derive(Clone, Debug)]
pub struct MvReport {
    pub k: usize,
    pub field: CoeffField,
    pub checks: Vec<MvCoverCheck>,
    /// Observed-bracket aggregation of the absolute inequalities, present
    /// when the caller declares the pieces to be (virtual) retracts of X.
    pub aggregate: Option<MvAggregate>,
}

impl MvReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.first_ok && c.second_ok)
    }
}

/// Observed sup-level aggregation of the per-cover inequalities.
#[derive(Clone, Debug)]
pub struct MvAggregate {
    pub sup_x: Rat,
    pub sup_a1: Rat,
    pub sup_a2: Rat,
    pub sup_b_km1: Rat,
    /// sup β_k(X) ≤ sup β_k(A₁) + sup β_k(A₂) + sup β_{k-1}(B) over the
    /// sampled covers; an observation, not a limit statement.
    pub first_observed: bool,
}

/// Check both Mayer–Vietoris inequalities on every sampled cover. Covers
/// are given as built complexes carrying base projections into `x`; pass
/// [`with_identity_base`]`(x)` for the trivial cover.
pub fn mv_inequality_check(
    x: &CellComplex,
    dec: &MvDecomposition,
    covers: &[(String, CellComplex)],
    k: usize,
    field: CoeffField,
    pieces_are_retracts: bool,
) -> Result<MvReport, GrowthError> {
    let _ = x;
    let mut checks = Vec::new();
    for (name, cover) in covers {
        let deg = Int::from(cover.degree() as i64);
        let norm = |b: usize| Rat::new(Int::from(b as i64), deg.clone());
        let piece = |sub: &SubComplex, deg_k: usize| -> Result<Rat, GrowthError> {
            let pre = cover.preimage(sub);
            let complex = cover.extract(&pre).map_err(GrowthError::Cover)?;
            Ok(norm(betti(&complex.chain_complex(), deg_k, field)?))
        };
        let x_k = norm(betti(&cover.chain_complex(), k, field)?);
        let a1_k = piece(&dec.a1, k)?;
        let a2_k = piece(&dec.a2, k)?;
        let b_k = piece(&dec.b, k)?;
        let b_km1 = if k == 0 {
            Rat::zero()
        } else {
            piece(&dec.b, k - 1)?
        };
        let first_ok = x_k <= a1_k.clone() + a2_k.clone() + b_km1.clone();
        let second_ok = a1_k.clone() + a2_k.clone() <= b_k.clone() + x_k.clone();
        checks.push(MvCoverCheck {
            cover: name.clone(),
            degree: cover.degree(),
            x_k,
            a1_k,
            a2_k,
            b_k,
            b_km1,
            first_ok,
            second_ok,
        });
    }
    let aggregate = if pieces_are_retracts && !checks.is_empty() {
        let sup = |f: fn(&MvCoverCheck) -> &Rat| checks.iter().map(f).max().unwrap().clone();
        let sup_x = sup(|c| &c.x_k);
        let sup_a1 = sup(|c| &c.a1_k);
        let sup_a2 = sup(|c| &c.a2_k);
        let sup_b_km1 = sup(|c| &c.b_km1);
        let first_observed = sup_x <= sup_a1.clone() + sup_a2.clone() + sup_b_km1.clone();
        Some(MvAggregate {
            sup_x,
            sup_a1,
            sup_a2,
            sup_b_km1,
            first_observed,
        })
    } else {
        None
    };
    Ok(MvReport {
        k,
        field,
        checks,
        aggregate,
    })
}

/// Attach identity base projections, making a complex its own degree-1
/// cover for restriction bookkeeping.
pub fn with_identity_base(x: &CellComplex) -> CellComplex {
    let mut out = x.clone();
    out.set_identity_base();
    out
}

/// Relative Betti number b_k(𝒩, 𝓛) of the nerve of a cover of X by
/// subcomplexes, where 𝓛 consists of the simplices whose piece
/// intersection is flagged acyclic. Every intersection must be flagged or
/// be a single point; under the covering lemma's hypotheses this equals
/// both growth limits of X.
pub fn nerve_relative_betti(
    x: &CellComplex,
    pieces: &[SubComplex],
    acyclic: &BTreeSet<Vec<usize>>,
    k: usize,
    field: CoeffField,
) -> Result<usize, GrowthError> {
    assert!(pieces.len() <= 20, "nerve limited to 20 pieces");
    for p in pieces {
        p.validate(x).map_err(GrowthError::Cover)?;
    }
    let union = pieces
        .iter()
        .fold(SubComplex { cells: Vec::new() }, |acc, p| acc.union(p));
    if !union.is_all_of(x) {
        return Err(GrowthError::BadDecomposition);
    }
    let n = pieces.len();
    let mut nerve: Vec<Vec<(Vec<usize>, bool)>> = Vec::new();
    for mask in 1u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let inter = subset
            .iter()
            .skip(1)
            .fold(pieces[subset[0]].clone(), |acc, &i| {
                acc.intersection(&pieces[i])
            });
        let total: usize = inter.cells.iter().map(|s| s.len()).sum();
        if total == 0 {
            continue;
        }
        let flagged = acyclic.contains(&subset);
        let is_point = total == 1 && inter.cells.first().map(|s| s.len()).unwrap_or(0) == 1;
        if !flagged && !is_point {
            return Err(GrowthError::NerveIntersection(subset));
        }
        let d = subset.len() - 1;
        while nerve.len() <= d {
            nerve.push(Vec::new());
        }
        nerve[d].push((subset, flagged));
    }
    for level in nerve.iter_mut() {
        level.sort();
    }
    // relative chain complex: basis = nerve simplices not in L
    let basis: Vec<Vec<&Vec<usize>>> = nerve
        .iter()
        .map(|level| {
            level
                .iter()
                .filter(|(_, flagged)| !flagged)
                .map(|(s, _)| s)
                .collect()
        })
        .collect();
    let mut counts = Vec::new();
    let mut boundaries = Vec::new();
    for (d, level) in basis.iter().enumerate() {
        counts.push(level.len());
        let rows = if d == 0 { 0 } else { counts[d - 1] };
        let mut triplets = Vec::new();
        if d > 0 {
            let lower: std::collections::HashMap<&Vec<usize>, usize> = basis[d - 1]
                .iter()
                .enumerate()
                .map(|(i, s)| (*s, i))
                .collect();
            for (j, spx) in level.iter().enumerate() {
                for (i, _) in spx.iter().enumerate() {
                    let mut face = (*spx).clone();
                    face.remove(i);
                    if let Some(&row) = lower.get(&face) {
                        triplets.push((row, j, Int::from(if i % 2 == 0 { 1 } else { -1 })));
                    }
                }
            }
        }
        boundaries.push(SparseMat::from_triplets(rows, counts[d], triplets));
    }
    if counts.is_empty() {
        return Ok(0);
    }
    let c = ChainComplex::new(counts, boundaries);
    Ok(betti(&c, k, field)?)
}

#[derive(Clone, Debug)]
pub struct DecayReport {
    pub k: usize,
    pub field: CoeffField,
    pub values: Vec<(usize, Rat)>,
    pub non_increasing: bool,
}

/// Normalized b_k of the degree-m cyclic covers of the mapping torus in
/// the circle direction, for each listed m. Consistent with the vanishing
/// of the upper growth of mapping tori: values head toward 0 as m grows.
pub fn mapping_torus_decay(
    x: &SimplicialComplex,
    f: &SimplicialMap,
    k: usize,
    field: CoeffField,
    degrees: &[usize],
) -> Result<DecayReport, GrowthError> {
    let mut values = Vec::new();
    for &m in degrees {
        let t = mapping_torus_cover(x, f, m)?;
        let b = betti(&t.chain_complex(), k, field)?;
        values.push((m, Rat::new(Int::from(b as i64), Int::from(m as i64))));
    }
    let non_increasing = values.windows(2).all(|w| w[0].1 >= w[1].1);
    Ok(DecayReport {
        k,
        field,
        values,
        non_increasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::{build_cover, enumerate_covers, CellComplexBuilder, CoverMap};
    use crate::rat;

    fn cx(max: &[&[&str]]) -> SimplicialComplex {
        SimplicialComplex::build(&max.iter().map(|s| s.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn wedge(n: usize) -> CellComplex {
        let mut b = CellComplexBuilder::new();
        let v = b.vertex("v");
        for i in 0..n {
            b.edge(format!("e{i}"), v, v);
        }
        b.build()
    }

    #[test]
    fn normalized_betti_wedge() {
        let w = wedge(2);
        for n in [2usize, 3] {
            let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let cover = CoverMap {
                degree: n,
                perms: vec![rot, (0..n).collect()],
            };
            let built = build_cover(&w, &cover).unwrap();
            let s = normalized_betti(&w, &built, 1, CoeffField::Q).unwrap();
            assert_eq!(
                s.value,
                Rat::new(Int::from(n as i64 + 1), Int::from(n as i64))
            );
        }
        // trivial cover: the plain Betti number
        let s = normalized_betti(&w, &w, 1, CoeffField::Q).unwrap();
        assert_eq!(s.value, rat(2, 1));
        // disjoint double cover: normalization cancels
        let double = build_cover(&w, &CoverMap::trivial(2, 2)).unwrap();
        let s = normalized_betti(&w, &double, 1, CoeffField::Q).unwrap();
        assert_eq!(s.value, rat(2, 1));
    }

    #[test]
    fn bracket_wedge_connected_family() {
        let w = wedge(2);
        let mut samples = Vec::new();
        for n in 1..=4usize {
            for cover in enumerate_covers(&w, n).unwrap() {
                if !cover.is_transitive() {
                    continue;
                }
                let built = build_cover(&w, &cover).unwrap();
                let s = normalized_betti(&w, &built, 1, CoeffField::Q).unwrap();
                samples.push(FamilySample {
                    id: format!("deg{n}"),
                    degree: n as u64,
                    value: s.value,
                });
            }
        }
        let bracket = growth_bracket(&samples, &[], "wedge connected covers <= 4").unwrap();
        assert_eq!(bracket.observed_max, rat(2, 1));
        assert_eq!(bracket.observed_min, rat(5, 4));
        assert!(bracket.sampled);
    }

    #[test]
    fn bracket_circle_decays() {
        let w = wedge(1);
        let mut samples = Vec::new();
        for n in 1..=4usize {
            let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let built = build_cover(
                &w,
                &CoverMap {
                    degree: n,
                    perms: vec![rot],
                },
            )
            .unwrap();
            let s = normalized_betti(&w, &built, 1, CoeffField::Q).unwrap();
            samples.push(FamilySample {
                id: format!("deg{n}"),
                degree: n as u64,
                value: s.value,
            });
        }
        // refinement chain 1 -> 2 -> 4, 1 -> 3
        let bracket =
            growth_bracket(&samples, &[(0, 1), (1, 3), (0, 2)], "circle cyclic covers").unwrap();
        assert_eq!(bracket.observed_min, rat(1, 4));
        assert_eq!(bracket.observed_max, rat(1, 1));
        assert_eq!(bracket.inf_of_sup, rat(1, 4));
    }

    #[test]
    fn connected_cover_convexity() {
        // the normalized value of a disconnected cover is a convex
        // combination of its components' values, so the minimum component
        // value is a lower bound
        let w = wedge(2);
        // degree 3: one 2-cycle + fixed point on the first generator
        let cover = CoverMap {
            degree: 3,
            perms: vec![vec![1, 0, 2], vec![0, 1, 2]],
        };
        let built = build_cover(&w, &cover).unwrap();
        assert_eq!(built.component_count(), 2);
        let whole = normalized_betti(&w, &built, 1, CoeffField::Q).unwrap().value;
        // components: a degree-2 connected cover (value 3/2) and a copy of
        // the base (value 2)
        let labels = built.vertex_components();
        let mut min_value: Option<Rat> = None;
        for comp in 0..2 {
            let mut cells: Vec<std::collections::BTreeSet<usize>> =
                vec![Default::default(); 2];
            for (v, &l) in labels.iter().enumerate() {
                if l == comp {
                    cells[0].insert(v);
                }
            }
            for (e, cell) in built.cells(1).iter().enumerate() {
                if labels[cell.ends.unwrap().0] == comp {
                    cells[1].insert(e);
                }
            }
            let sub = crate::covers::SubComplex { cells };
            let piece = built.extract(&sub).unwrap();
            let b = betti(&piece.chain_complex(), 1, CoeffField::Q).unwrap();
            let deg = piece.cell_count(0); // sheets of this component
            let v = Rat::new(Int::from(b as i64), Int::from(deg as i64));
            min_value = Some(match min_value {
                None => v,
                Some(m) => m.min(v),
            });
        }
        assert!(min_value.unwrap() <= whole);
    }

    #[test]
    fn brackets_add_on_disjoint_unions() {
        // one loop and two loops; cyclic covers of matching degrees
        let values = |loops: usize, n: i64| -> Rat {
            // b1 of the connected degree-n cover of a wedge of `loops`
            // circles is n(loops-1)+1
            rat(n * (loops as i64 - 1) + 1, n)
        };
        let family = |loops: usize| -> Vec<FamilySample> {
            (1..=3)
                .map(|n| FamilySample {
                    id: format!("deg{n}"),
                    degree: n as u64,
                    value: values(loops, n as i64),
                })
                .collect()
        };
        let union_family: Vec<FamilySample> = (1..=3)
            .map(|n| FamilySample {
                id: format!("deg{n}"),
                degree: n as u64,
                value: values(1, n as i64) + values(2, n as i64),
            })
            .collect();
        let refinements = [(0usize, 1usize), (1, 2)];
        let a = growth_bracket(&family(1), &refinements, "one circle").unwrap();
        let b = growth_bracket(&family(2), &refinements, "two circles").unwrap();
        let u = growth_bracket(&union_family, &refinements, "disjoint union").unwrap();
        assert_eq!(u.observed_min, a.observed_min + b.observed_min);
        assert_eq!(u.observed_max, a.observed_max + b.observed_max);
        assert_eq!(u.inf_of_sup, a.inf_of_sup + b.inf_of_sup);
        assert_eq!(u.sup_of_inf, a.sup_of_inf + b.sup_of_inf);
    }

    #[test]
    fn raag_examples() {
        let two_points = cx(&[&["a"], &["b"]]);
        assert_eq!(raag_growth(&two_points, 1, CoeffField::Q).unwrap(), 1);
        let pentagon = cx(&[
            &["a", "b"],
            &["b", "c"],
            &["c", "d"],
            &["d", "e"],
            &["e", "a"],
        ]);
        assert_eq!(raag_growth(&pentagon, 2, CoeffField::Q).unwrap(), 1);
        let triangle = cx(&[&["a", "b", "c"]]);
        for k in 1..4 {
            assert_eq!(raag_growth(&triangle, k, CoeffField::Q).unwrap(), 0);
        }
        assert_eq!(
            raag_growth(&SimplicialComplex::empty(), 0, CoeffField::Q).unwrap(),
            1
        );
        assert_eq!(raag_growth(&two_points, 0, CoeffField::Q).unwrap(), 0);
    }

    #[test]
    fn estimate_examples() {
        let spec = GraphProductSpec::uniform(cx(&[&["a"], &["b"]]), 5).unwrap();
        let (center, error) = graph_product_growth_estimate(&spec, 1, CoeffField::Q).unwrap();
        assert_eq!(center, 1);
        assert_eq!(error, rat(4, 5));
        let pentagon = cx(&[
            &["a", "b"],
            &["b", "c"],
            &["c", "d"],
            &["d", "e"],
            &["e", "a"],
        ]);
        let spec = GraphProductSpec::uniform(pentagon, 3).unwrap();
        let (center, error) = graph_product_growth_estimate(&spec, 2, CoeffField::Q).unwrap();
        assert_eq!(center, 1);
        assert_eq!(error, rat(40, 3));
    }

    #[test]
    fn verify_bound_examples() {
        let two = cx(&[&["a"], &["b"]]);
        for (m, expect) in [(2u64, rat(1, 4)), (5, rat(16, 25))] {
            let spec = GraphProductSpec::uniform(two.clone(), m).unwrap();
            let r =
                verify_graph_product_bound(&spec, &QuotientTarget::full(&spec), 1, CoeffField::Q)
                    .unwrap();
            assert_eq!(r.value, expect);
            assert!(r.pass);
        }
        // degenerate L = point: k = dim L + 1 = 1 also checks the one-sided
        // bound b_1/n <= b_0(L) = 1
        let spec = GraphProductSpec::uniform(cx(&[&["a"]]), 3).unwrap();
        let r = verify_graph_product_bound(&spec, &QuotientTarget::full(&spec), 1, CoeffField::Q)
            .unwrap();
        assert_eq!(r.value, rat(0, 1));
        assert!(r.pass);
        assert_eq!(r.top_dimension_pass, Some(true));
    }

    #[test]
    fn mv_on_torus_annuli() {
        let mut b = CellComplexBuilder::new();
        let w1 = b.vertex("w1");
        let w2 = b.vertex("w2");
        let e1 = b.edge("e1", w1, w1);
        let e2 = b.edge("e2", w2, w2);
        let h1 = b.edge("h1", w1, w2);
        let h2 = b.edge("h2", w2, w1);
        b.face("f1", vec![(h1, false), (e2, false), (h1, true), (e1, true)]);
        b.face("f2", vec![(h2, false), (e1, false), (h2, true), (e2, true)]);
        let torus = b.build();
        let f1 = torus.cells(2).iter().position(|c| c.id == "f1").unwrap();
        let f2 = torus.cells(2).iter().position(|c| c.id == "f2").unwrap();
        let a1 = torus.closure_of(2, f1);
        let a2 = torus.closure_of(2, f2);
        let dec = mv_decomposition(&torus, a1, a2).unwrap();

        let m = 3;
        let rot: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        let cover = CoverMap {
            degree: m,
            perms: vec![rot.clone(), rot, vec![0, 1, 2]],
        };
        let built = build_cover(&torus, &cover).unwrap();
        let covers = vec![
            ("trivial".to_owned(), with_identity_base(&torus)),
            ("fiber3".to_owned(), built),
        ];
        let report = mv_inequality_check(&torus, &dec, &covers, 1, CoeffField::Q, true).unwrap();
        assert!(report.pass());
        let fiber = &report.checks[1];
        assert_eq!(fiber.x_k, rat(2, 3));
        assert_eq!(fiber.a1_k, rat(1, 3));
        assert_eq!(fiber.b_km1, rat(2, 3));
        assert!(report.aggregate.unwrap().first_observed);
    }

    #[test]
    fn mv_degenerate_decompositions() {
        // disjoint union: B = empty, additivity
        let mut b = CellComplexBuilder::new();
        let u = b.vertex("u");
        let v = b.vertex("v");
        b.edge("eu", u, u);
        b.edge("ev", v, v);
        let x = b.build();
        let a1 = x.closure_of(1, 0);
        let a2 = x.closure_of(1, 1);
        let dec = mv_decomposition(&x, a1, a2).unwrap();
        let covers = vec![("trivial".to_owned(), with_identity_base(&x))];
        let r = mv_inequality_check(&x, &dec, &covers, 1, CoeffField::Q, false).unwrap();
        assert!(r.pass());
        // total overlap X = A1 = A2 = B
        let dec = mv_decomposition(&x, x.full(), x.full()).unwrap();
        let r = mv_inequality_check(&x, &dec, &covers, 1, CoeffField::Q, false).unwrap();
        assert!(r.pass());
    }

    #[test]
    fn nerve_wedge_of_circles() {
        let w = wedge(2);
        let c0 = w.closure_of(1, 0);
        let c1 = w.closure_of(1, 1);
        let mut acyclic = BTreeSet::new();
        acyclic.insert(vec![0]);
        acyclic.insert(vec![1]);
        let b1 = nerve_relative_betti(&w, &[c0, c1], &acyclic, 1, CoeffField::Q).unwrap();
        assert_eq!(b1, 1);
        let two_points = cx(&[&["a"], &["b"]]);
        assert_eq!(b1, raag_growth(&two_points, 1, CoeffField::Q).unwrap());
        // a single acyclic piece covering everything
        let mut acyclic = BTreeSet::new();
        acyclic.insert(vec![0]);
        let b = nerve_relative_betti(&w, &[w.full()], &acyclic, 1, CoeffField::Q).unwrap();
        assert_eq!(b, 0);
        // unflagged non-point intersection is an error
        let err = nerve_relative_betti(&w, &[w.full()], &BTreeSet::new(), 1, CoeffField::Q);
        assert!(matches!(err, Err(GrowthError::NerveIntersection(_))));
    }

    #[test]
    fn torus_decay() {
        let circle = cx(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        let f = SimplicialMap::identity(&circle);
        let report = mapping_torus_decay(&circle, &f, 1, CoeffField::Q, &[1, 2, 4, 8]).unwrap();
        let expect: Vec<Rat> = [1, 2, 4, 8].iter().map(|&m| rat(2, m)).collect();
        let got: Vec<Rat> = report.values.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(got, expect);
        assert!(report.non_increasing);
        // identity on a point: the circle, values 1/m
        let pt = cx(&[&["a"]]);
        let f = SimplicialMap::identity(&pt);
        let report = mapping_torus_decay(&pt, &f, 1, CoeffField::Q, &[1, 3]).unwrap();
        assert_eq!(report.values[1].1, rat(1, 3));
    }
}
