//! Finite abstract simplicial complexes and the cubical Davis chamber of a
//! flag complex.
//!
//! Vertices are externally strings and internally dense indices in
//! construction order. A simplex is a sorted vector of vertex indices; the
//! global vertex order also fixes orientations: the incidence number of the
//! codimension-one face obtained by deleting the i-th vertex is `(-1)^i`.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use thiserror::Error;

use crate::homology::ChainComplex;
use crate::linalg::SparseMat;
use crate::Int;

pub type Vertex = u32;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("duplicate vertex `{0}` within one simplex")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("simplex not in complex: {0:?}")]
    MissingSimplex(Vec<String>),
    #[error("complex is not flag, witness clique {0:?}")]
    NotFlag(Vec<String>),
}

/// Finite abstract simplicial complex: a downward-closed set of sorted
/// vertex subsets. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    /// Simplices by dimension, each list sorted lexicographically.
    by_dim: Vec<Vec<Vec<Vertex>>>,
    set: BTreeSet<Vec<Vertex>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex {
            names: Vec::new(),
            index: HashMap::new(),
            by_dim: Vec::new(),
            set: BTreeSet::new(),
        }
    }

    /// Downward closure of the given maximal simplices (they need not
    /// actually be maximal). Vertices are numbered in order of first
    /// appearance, scanning the simplices in input order and the vertices
    /// of each simplex lexicographically.
    pub fn build<S: AsRef<str>>(maximal: &[Vec<S>]) -> Result<Self, ComplexError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, Vertex> = HashMap::new();
        let mut simplices: Vec<Vec<Vertex>> = Vec::new();
        for spx in maximal {
            let mut seen = BTreeSet::new();
            for v in spx {
                if !seen.insert(v.as_ref().to_owned()) {
                    return Err(ComplexError::DuplicateVertex(v.as_ref().to_owned()));
                }
            }
            for name in &seen {
                if !index.contains_key(name) {
                    index.insert(name.clone(), names.len() as Vertex);
                    names.push(name.clone());
                }
            }
            simplices.push(spx.iter().map(|v| index[v.as_ref()]).sorted().collect());
        }
        Ok(Self::from_closure(names, index, &simplices))
    }

    /// Register explicit vertices first (in order), then take the closure
    /// of the simplices. Used by the text-format parser.
    pub fn build_with_vertices<S: AsRef<str>>(
        vertices: &[S],
        maximal: &[Vec<S>],
    ) -> Result<Self, ComplexError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, Vertex> = HashMap::new();
        for v in vertices {
            let name = v.as_ref().to_owned();
            if !index.contains_key(&name) {
                index.insert(name.clone(), names.len() as Vertex);
                names.push(name);
            }
        }
        let mut simplices: Vec<Vec<Vertex>> = Vec::new();
        for spx in maximal {
            let mut seen = BTreeSet::new();
            for v in spx {
                if !seen.insert(v.as_ref().to_owned()) {
                    return Err(ComplexError::DuplicateVertex(v.as_ref().to_owned()));
                }
            }
            for name in &seen {
                if !index.contains_key(name) {
                    index.insert(name.clone(), names.len() as Vertex);
                    names.push(name.clone());
                }
            }
            simplices.push(spx.iter().map(|v| index[v.as_ref()]).sorted().collect());
        }
        Ok(Self::from_closure(names, index, &simplices))
    }

    fn from_closure(
        names: Vec<String>,
        index: HashMap<String, Vertex>,
        simplices: &[Vec<Vertex>],
    ) -> Self {
        let mut set: BTreeSet<Vec<Vertex>> = BTreeSet::new();
        for v in 0..names.len() {
            set.insert(vec![v as Vertex]);
        }
        for spx in simplices {
            for k in 1..=spx.len() {
                for face in spx.iter().copied().combinations(k) {
                    set.insert(face);
                }
            }
        }
        Self::from_closed_set(names, index, set)
    }

    /// `set` must already be downward closed and contain every singleton.
    fn from_closed_set(
        names: Vec<String>,
        index: HashMap<String, Vertex>,
        set: BTreeSet<Vec<Vertex>>,
    ) -> Self {
        let mut by_dim: Vec<Vec<Vec<Vertex>>> = Vec::new();
        for spx in &set {
            let d = spx.len() - 1;
            while by_dim.len() <= d {
                by_dim.push(Vec::new());
            }
            by_dim[d].push(spx.clone());
        }
        for level in &mut by_dim {
            level.sort();
        }
        SimplicialComplex {
            names,
            index,
            by_dim,
            set,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        &self.names[v as usize]
    }

    pub fn vertex_index(&self, name: &str) -> Result<Vertex, ComplexError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ComplexError::UnknownVertex(name.to_owned()))
    }

    /// Dimension; -1 for the empty complex.
    pub fn dim(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn simplices(&self, dim: usize) -> &[Vec<Vertex>] {
        self.by_dim.get(dim).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn simplex_count(&self, dim: usize) -> usize {
        self.simplices(dim).len()
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Vec<Vertex>> {
        self.set.iter()
    }

    pub fn contains(&self, simplex: &[Vertex]) -> bool {
        self.set.contains(simplex)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, s)| if d % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }

    pub fn adjacent(&self, a: Vertex, b: Vertex) -> bool {
        a != b && {
            let e = if a < b { vec![a, b] } else { vec![b, a] };
            self.set.contains(&e)
        }
    }

    fn names_of(&self, simplex: &[Vertex]) -> Vec<String> {
        simplex.iter().map(|&v| self.names[v as usize].clone()).collect()
    }

    /// `None` when flag; otherwise a minimal set of pairwise-adjacent
    /// vertices that spans no simplex.
    pub fn flag_witness(&self) -> Option<Vec<Vertex>> {
        let n = self.vertex_count();
        let mut current: Vec<Vec<Vertex>> = self.simplices(1).to_vec();
        while !current.is_empty() {
            let mut next = Vec::new();
            for clique in &current {
                let top = *clique.last().unwrap();
                for v in top + 1..n as Vertex {
                    if clique.iter().all(|&u| self.adjacent(u, v)) {
                        let mut ext = clique.clone();
                        ext.push(v);
                        if !self.set.contains(&ext) {
                            return Some(ext);
                        }
                        next.push(ext);
                    }
                }
            }
            current = next;
        }
        None
    }

    pub fn is_flag(&self) -> bool {
        self.flag_witness().is_none()
    }

    /// `Ok(None)` when no empty square exists; otherwise the induced
    /// 4-cycle in cycle order. Rejects non-flag input.
    pub fn no_square_witness(&self) -> Result<Option<[Vertex; 4]>, ComplexError> {
        if let Some(w) = self.flag_witness() {
            return Err(ComplexError::NotFlag(self.names_of(&w)));
        }
        let n = self.vertex_count() as Vertex;
        for a in 0..n {
            for c in a + 1..n {
                if self.adjacent(a, c) {
                    continue;
                }
                let common: Vec<Vertex> = (0..n)
                    .filter(|&v| v != a && v != c && self.adjacent(v, a) && self.adjacent(v, c))
                    .collect();
                for (i, &b) in common.iter().enumerate() {
                    for &d in &common[i + 1..] {
                        if !self.adjacent(b, d) {
                            return Ok(Some([a, b, c, d]));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_no_square(&self) -> Result<bool, ComplexError> {
        Ok(self.no_square_witness()?.is_none())
    }

    /// Lk(σ) = {τ : τ∩σ = ∅, τ∪σ ∈ K}, with the inherited vertex order.
    pub fn link(&self, simplex: &[Vertex]) -> Result<SimplicialComplex, ComplexError> {
        for &v in simplex {
            if v as usize >= self.names.len() {
                return Err(ComplexError::UnknownVertex(format!("#{v}")));
            }
        }
        let sorted: Vec<Vertex> = simplex.iter().copied().sorted().collect();
        if !self.set.contains(&sorted) {
            return Err(ComplexError::MissingSimplex(self.names_of(&sorted)));
        }
        let link_simplices: Vec<&Vec<Vertex>> = self
            .set
            .iter()
            .filter(|tau| {
                tau.iter().all(|v| !sorted.contains(v)) && {
                    let union: Vec<Vertex> =
                        tau.iter().chain(&sorted).copied().sorted().collect();
                    self.set.contains(&union)
                }
            })
            .collect();
        Ok(self.induced(&link_simplices))
    }

    /// All simplices of the complex with vertices in `verts`.
    pub fn full_subcomplex(&self, verts: &[Vertex]) -> Result<SimplicialComplex, ComplexError> {
        for &v in verts {
            if v as usize >= self.names.len() {
                return Err(ComplexError::UnknownVertex(format!("#{v}")));
            }
        }
        let keep: BTreeSet<Vertex> = verts.iter().copied().collect();
        let sub: Vec<&Vec<Vertex>> = self
            .set
            .iter()
            .filter(|s| s.iter().all(|v| keep.contains(v)))
            .collect();
        Ok(self.induced(&sub))
    }

    /// Subcomplex on a closed set of simplices, renumbering vertices but
    /// keeping their relative order and names.
    fn induced(&self, simplices: &[&Vec<Vertex>]) -> SimplicialComplex {
        let verts: BTreeSet<Vertex> = simplices.iter().flat_map(|s| s.iter().copied()).collect();
        let mut names = Vec::new();
        let mut index = HashMap::new();
        let mut remap = HashMap::new();
        for v in verts {
            remap.insert(v, names.len() as Vertex);
            index.insert(self.names[v as usize].clone(), names.len() as Vertex);
            names.push(self.names[v as usize].clone());
        }
        let set: BTreeSet<Vec<Vertex>> = simplices
            .iter()
            .map(|s| s.iter().map(|v| remap[v]).collect())
            .collect();
        SimplicialComplex::from_closed_set(names, index, set)
    }

    /// Vertices are the simplices of `self`, simplices are the chains of
    /// the face poset. Vertex names join the original names with `.`.
    pub fn barycentric_subdivision(&self) -> SimplicialComplex {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        let mut spx_id: HashMap<&Vec<Vertex>, Vertex> = HashMap::new();
        for spx in &self.set {
            let name = spx
                .iter()
                .map(|&v| self.names[v as usize].as_str())
                .join(".");
            spx_id.insert(spx, names.len() as Vertex);
            index.insert(name.clone(), names.len() as Vertex);
            names.push(name);
        }
        // Chains: extend every chain ending at a proper face of tau.
        let mut chains: BTreeSet<Vec<Vertex>> = BTreeSet::new();
        let mut ending_at: HashMap<Vertex, Vec<Vec<Vertex>>> = HashMap::new();
        let ordered: Vec<&Vec<Vertex>> = {
            // by dimension, then lexicographically
            let mut v: Vec<&Vec<Vertex>> = self.set.iter().collect();
            v.sort_by_key(|s| (s.len(), (*s).clone()));
            v
        };
        for tau in ordered {
            let id = spx_id[tau];
            let mut here: Vec<Vec<Vertex>> = vec![vec![id]];
            if tau.len() > 1 {
                for k in 1..tau.len() {
                    for face in tau.iter().copied().combinations(k) {
                        let fid = spx_id[&face];
                        for chain in &ending_at[&fid] {
                            let mut ext = chain.clone();
                            ext.push(id);
                            here.push(ext);
                        }
                    }
                }
            }
            for chain in &here {
                chains.insert(chain.iter().copied().sorted().collect());
            }
            ending_at.insert(id, here);
        }
        SimplicialComplex::from_closed_set(names, index, chains)
    }

    /// Doubles every vertex `v` to `v+`, `v-` and replaces each k-simplex
    /// by its `2^(k+1)` sign choices. Returns the projection, as a map from
    /// new vertex index to old.
    pub fn octahedralize(&self) -> (SimplicialComplex, Vec<Vertex>) {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        let mut projection = Vec::new();
        for (v, name) in self.names.iter().enumerate() {
            for sign in ["+", "-"] {
                let n = format!("{name}{sign}");
                index.insert(n.clone(), names.len() as Vertex);
                names.push(n);
                projection.push(v as Vertex);
            }
        }
        let mut set: BTreeSet<Vec<Vertex>> = BTreeSet::new();
        for spx in &self.set {
            let k = spx.len();
            for signs in 0..(1u32 << k) {
                let lifted: Vec<Vertex> = spx
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| 2 * v + ((signs >> i) & 1))
                    .sorted()
                    .collect();
                set.insert(lifted);
            }
        }
        (
            SimplicialComplex::from_closed_set(names, index, set),
            projection,
        )
    }

    /// Simplicial chain complex with the global-vertex-order orientation.
    pub fn chain_complex(&self) -> ChainComplex {
        let counts: Vec<usize> = self.f_vector();
        let mut boundaries = Vec::new();
        for k in 0..counts.len() {
            if k == 0 {
                boundaries.push(SparseMat::zero(0, counts[0]));
                continue;
            }
            let lower: HashMap<&Vec<Vertex>, usize> = self.by_dim[k - 1]
                .iter()
                .enumerate()
                .map(|(i, s)| (s, i))
                .collect();
            let mut triplets = Vec::new();
            for (j, spx) in self.by_dim[k].iter().enumerate() {
                for (i, _) in spx.iter().enumerate() {
                    let mut face = spx.clone();
                    face.remove(i);
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    triplets.push((lower[&face], j, Int::from(sign)));
                }
            }
            boundaries.push(SparseMat::from_triplets(counts[k - 1], counts[k], triplets));
        }
        ChainComplex::new(counts, boundaries)
    }
}

/// A cube of the Davis chamber: a pair σ ⊆ τ of simplices of L ∪ {∅}.
/// Its dimension is |τ| - |σ| and its mirror labels are the vertices of σ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cube {
    pub sigma: Vec<Vertex>,
    pub tau: Vec<Vertex>,
}

impl Cube {
    pub fn dim(&self) -> usize {
        self.tau.len() - self.sigma.len()
    }

    /// Cube coordinate directions: the sorted list τ∖σ.
    pub fn directions(&self) -> Vec<Vertex> {
        self.tau
            .iter()
            .copied()
            .filter(|v| !self.sigma.contains(v))
            .collect()
    }

    pub fn is_boundary(&self) -> bool {
        !self.sigma.is_empty()
    }
}

/// The Davis chamber K_L of a flag complex L: the cone on the barycentric
/// subdivision, as a cubical complex. Cubes with σ ≠ ∅ form ∂K_L, and the
/// s-mirror K_s consists of the cubes with s ∈ σ.
#[derive(Clone, Debug)]
pub struct CubicalChamber {
    base: SimplicialComplex,
    /// Cubes by dimension, each level sorted.
    cubes: Vec<Vec<Cube>>,
}

impl CubicalChamber {
    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn cubes(&self, dim: usize) -> &[Cube] {
        self.cubes.get(dim).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn dim(&self) -> usize {
        self.cubes.len() - 1
    }

    pub fn cube_count(&self) -> usize {
        self.cubes.iter().map(Vec::len).sum()
    }

    /// |∂K_L|: the number of cubes with σ ≠ ∅.
    pub fn boundary_cube_count(&self) -> usize {
        self.cubes
            .iter()
            .flatten()
            .filter(|c| c.is_boundary())
            .count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cubes
            .iter()
            .enumerate()
            .map(|(d, c)| if d % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    /// The s-mirror K_s = {(σ,τ) : s ∈ σ}.
    pub fn mirror(&self, s: Vertex) -> Vec<&Cube> {
        self.cubes
            .iter()
            .flatten()
            .filter(|c| c.sigma.contains(&s))
            .collect()
    }
}

/// The Davis chamber of a flag complex; rejects non-flag input.
pub fn davis_chamber(base: &SimplicialComplex) -> Result<CubicalChamber, ComplexError> {
    if let Some(w) = base.flag_witness() {
        return Err(ComplexError::NotFlag(base.names_of(&w)));
    }
    let mut cubes: Vec<Vec<Cube>> = Vec::new();
    let mut push = |sigma: Vec<Vertex>, tau: Vec<Vertex>| {
        let cube = Cube { sigma, tau };
        let d = cube.dim();
        while cubes.len() <= d {
            cubes.push(Vec::new());
        }
        cubes[d].push(cube);
    };
    push(Vec::new(), Vec::new());
    for tau in base.all_simplices() {
        for k in 0..=tau.len() {
            for sigma in tau.iter().copied().combinations(k) {
                push(sigma, tau.clone());
            }
        }
    }
    for level in &mut cubes {
        level.sort();
    }
    Ok(CubicalChamber {
        base: base.clone(),
        cubes,
    })
}
