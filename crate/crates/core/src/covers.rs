//! Finite covers: quotients of the right-angled building 𝒰(G_L, K_L) by
//! finite-index kernels, permutation-representation covers of cell
//! complexes, and mapping tori with their cyclic covers.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use itertools::Itertools;
use thiserror::Error;

use crate::complexes::{davis_chamber, ComplexError, SimplicialComplex, Vertex};
use crate::homology::ChainComplex;
use crate::linalg::SparseMat;
use crate::Int;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("vertex order {0} for `{1}` must be at least 2")]
    BadOrder(u64, String),
    #[error("divisor {0} of `{1}` does not divide the vertex order {2}")]
    DivisibilityViolation(u64, String, u64),
    #[error("complex is disconnected")]
    Disconnected,
    #[error("covering a complex of dimension {0} is unsupported (2-skeleton suffices)")]
    DimensionTooHigh(usize),
    #[error("cover has {0} permutations but the base has {1} generators")]
    GeneratorMismatch(usize, usize),
    #[error("entry {0} is not a permutation of 0..{1}")]
    BadPermutation(usize, usize),
    #[error("relator {0} does not evaluate to the identity permutation")]
    RelatorCheckFailed(usize),
    #[error("2-cell `{0}` has no attaching walk")]
    MissingWalk(String),
    #[error("subcomplex is not closed under faces")]
    NotClosed,
    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),
}

/// A cell of a [`CellComplex`].
///
/// `boundary` lists faces with signs, *without* summing repeated faces, so
/// that closure checks see faces whose incidences cancel. The chain complex
/// sums them. Edges also carry endpoints and 2-cells may carry the closed
/// edge walk along which they attach (needed for covers).
#[derive(Clone, Debug)]
pub struct Cell {
    pub id: String,
    pub boundary: Vec<(usize, i64)>,
    pub ends: Option<(usize, usize)>,
    pub walk: Option<Vec<(usize, bool)>>,
    /// Projection to the base complex, for covers: index in the same
    /// dimension of the base.
    pub base: Option<usize>,
}

/// Finite cell complex graded by dimension, immutable once built.
#[derive(Clone, Debug)]
pub struct CellComplex {
    dims: Vec<Vec<Cell>>,
    degree: u64,
}

impl CellComplex {
    pub fn dim(&self) -> isize {
        self.dims.len() as isize - 1
    }

    pub fn cells(&self, dim: usize) -> &[Cell] {
        self.dims.get(dim).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn cell_count(&self, dim: usize) -> usize {
        self.cells(dim).len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.dims.iter().map(Vec::len).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.dims.iter().map(Vec::len).sum()
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(d, c)| if d % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    pub fn chain_complex(&self) -> ChainComplex {
        let counts: Vec<usize> = self.f_vector();
        let mut boundaries = Vec::new();
        for k in 0..counts.len() {
            let rows = if k == 0 { 0 } else { counts[k - 1] };
            let triplets: Vec<(usize, usize, Int)> = self.dims[k]
                .iter()
                .enumerate()
                .flat_map(|(j, cell)| {
                    cell.boundary
                        .iter()
                        .map(move |&(f, s)| (f, j, Int::from(s)))
                })
                .collect();
            boundaries.push(SparseMat::from_triplets(rows, counts[k], triplets));
        }
        ChainComplex::new(counts, boundaries)
    }

    /// Component label per vertex.
    pub fn vertex_components(&self) -> Vec<usize> {
        let n = self.cell_count(0);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            let mut root = x;
            while parent[root] != root {
                root = parent[root];
            }
            let mut cur = x;
            while parent[cur] != root {
                let next = parent[cur];
                parent[cur] = root;
                cur = next;
            }
            root
        }
        for edge in self.cells(1) {
            let (t, h) = edge.ends.expect("edge without ends");
            let (rt, rh) = (find(&mut parent, t), find(&mut parent, h));
            if rt != rh {
                parent[rt] = rh;
            }
        }
        let mut labels = vec![0usize; n];
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            let root = find(&mut parent, v);
            let next = seen.len();
            let label = *seen.entry(root).or_insert(next);
            labels[v] = label;
        }
        labels
    }

    pub fn component_count(&self) -> usize {
        if self.cell_count(0) == 0 {
            return 0;
        }
        self.vertex_components().iter().max().unwrap() + 1
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// The closed star of a vertex: every cell containing it in its
    /// closure, together with all faces of those cells.
    pub fn star(&self, vertex: usize) -> SubComplex {
        let touch = self.cells_containing_vertex(vertex);
        let mut cells: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.dims.len()];
        for (k, level) in touch.iter().enumerate() {
            for (i, contains) in level.iter().enumerate() {
                if *contains {
                    self.close_down(k, i, &mut cells);
                }
            }
        }
        SubComplex { cells }
    }

    /// All cells whose closure avoids the given vertex.
    pub fn complement_of_star(&self, vertex: usize) -> SubComplex {
        let touch = self.cells_containing_vertex(vertex);
        let cells = touch
            .iter()
            .map(|level| {
                level
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !**c)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        SubComplex { cells }
    }

    fn cells_containing_vertex(&self, vertex: usize) -> Vec<Vec<bool>> {
        let mut touch: Vec<Vec<bool>> = Vec::new();
        for (k, level) in self.dims.iter().enumerate() {
            let mut this = vec![false; level.len()];
            for (i, cell) in level.iter().enumerate() {
                if k == 0 {
                    this[i] = i == vertex;
                } else {
                    this[i] = cell.boundary.iter().any(|&(f, _)| touch[k - 1][f]);
                }
            }
            touch.push(this);
        }
        touch
    }

    pub(crate) fn close_down(&self, dim: usize, idx: usize, out: &mut [BTreeSet<usize>]) {
        if !out[dim].insert(idx) {
            return;
        }
        if dim == 0 {
            return;
        }
        for &(f, _) in &self.dims[dim][idx].boundary {
            self.close_down(dim - 1, f, out);
        }
    }

    /// Extract a closed subcomplex as a complex of its own. Cell ids and
    /// base projections are inherited.
    pub fn extract(&self, sub: &SubComplex) -> Result<CellComplex, CoverError> {
        sub.validate(self)?;
        let mut remap: Vec<HashMap<usize, usize>> = Vec::new();
        let mut dims: Vec<Vec<Cell>> = Vec::new();
        for (k, level) in sub.cells.iter().enumerate() {
            let mut map = HashMap::new();
            let mut cells = Vec::new();
            for &i in level {
                let old = &self.dims[k][i];
                map.insert(i, cells.len());
                let boundary = old
                    .boundary
                    .iter()
                    .map(|&(f, s)| (remap[k - 1][&f], s))
                    .collect::<Vec<_>>();
                let ends = old.ends.map(|(t, h)| (remap[k - 1][&t], remap[k - 1][&h]));
                let walk = old
                    .walk
                    .as_ref()
                    .map(|w| w.iter().map(|&(e, r)| (remap[k - 1][&e], r)).collect());
                cells.push(Cell {
                    id: old.id.clone(),
                    boundary,
                    ends,
                    walk,
                    base: old.base,
                });
            }
            remap.push(map);
            dims.push(cells);
        }
        while dims.last().map(|v| v.is_empty()).unwrap_or(false) {
            dims.pop();
        }
        Ok(CellComplex {
            dims,
            degree: self.degree,
        })
    }

    /// Cells of this cover lying over a subcomplex of its base (matched
    /// through the `base` projections).
    pub fn preimage(&self, base_sub: &SubComplex) -> SubComplex {
        let cells = self
            .dims
            .iter()
            .enumerate()
            .map(|(k, level)| {
                level
                    .iter()
                    .enumerate()
                    .filter(|(_, cell)| {
                        cell.base
                            .map(|b| {
                                base_sub
                                    .cells
                                    .get(k)
                                    .map(|s| s.contains(&b))
                                    .unwrap_or(false)
                            })
                            .unwrap_or(false)
                    })
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        SubComplex { cells }
    }

    /// The subcomplex containing every cell.
    pub fn full(&self) -> SubComplex {
        SubComplex {
            cells: self
                .dims
                .iter()
                .map(|level| (0..level.len()).collect())
                .collect(),
        }
    }

    /// Point every cell at itself as its own base, making the complex its
    /// own degree-1 cover.
    pub fn set_identity_base(&mut self) {
        for level in self.dims.iter_mut() {
            for (i, cell) in level.iter_mut().enumerate() {
                cell.base = Some(i);
            }
        }
    }

    /// Closure of a single cell.
    pub fn closure_of(&self, dim: usize, idx: usize) -> SubComplex {
        let mut cells: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.dims.len()];
        self.close_down(dim, idx, &mut cells);
        SubComplex { cells }
    }
}

/// Selection of cells, per dimension, expected to be closed under faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubComplex {
    pub cells: Vec<BTreeSet<usize>>,
}

impl SubComplex {
    pub fn validate(&self, of: &CellComplex) -> Result<(), CoverError> {
        for (k, level) in self.cells.iter().enumerate() {
            for &i in level {
                if i >= of.cell_count(k) {
                    return Err(CoverError::NotClosed);
                }
                if k > 0 {
                    for &(f, _) in &of.dims[k][i].boundary {
                        if !self.cells[k - 1].contains(&f) {
                            return Err(CoverError::NotClosed);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn intersection(&self, other: &SubComplex) -> SubComplex {
        let n = self.cells.len().max(other.cells.len());
        let mut cells = Vec::new();
        for k in 0..n {
            let a = self.cells.get(k).cloned().unwrap_or_default();
            let b = other.cells.get(k).cloned().unwrap_or_default();
            cells.push(a.intersection(&b).copied().collect());
        }
        SubComplex { cells }
    }

    pub fn union(&self, other: &SubComplex) -> SubComplex {
        let n = self.cells.len().max(other.cells.len());
        let mut cells = Vec::new();
        for k in 0..n {
            let a = self.cells.get(k).cloned().unwrap_or_default();
            let b = other.cells.get(k).cloned().unwrap_or_default();
            cells.push(a.union(&b).copied().collect());
        }
        SubComplex { cells }
    }

    pub fn is_all_of(&self, x: &CellComplex) -> bool {
        (0..x.dims.len())
            .all(|k| self.cells.get(k).map(|s| s.len()).unwrap_or(0) == x.cell_count(k))
    }
}

/// Incremental construction of a [`CellComplex`]. Cells are sorted by
/// identifier per dimension when finishing, so identical content yields
/// identical complexes regardless of insertion order.
pub struct CellComplexBuilder {
    dims: Vec<Vec<Cell>>,
    ids: Vec<HashMap<String, usize>>,
    degree: u64,
}

impl Default for CellComplexBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl CellComplexBuilder {
    pub fn new() -> Self {
        CellComplexBuilder {
            dims: Vec::new(),
            ids: Vec::new(),
            degree: 1,
        }
    }

    pub fn degree(mut self, degree: u64) -> Self {
        self.degree = degree;
        self
    }

    fn level(&mut self, dim: usize) -> &mut Vec<Cell> {
        while self.dims.len() <= dim {
            self.dims.push(Vec::new());
            self.ids.push(HashMap::new());
        }
        &mut self.dims[dim]
    }

    fn insert(&mut self, dim: usize, cell: Cell) -> usize {
        let id = cell.id.clone();
        self.level(dim).push(cell);
        let idx = self.dims[dim].len() - 1;
        let prev = self.ids[dim].insert(id.clone(), idx);
        assert!(prev.is_none(), "duplicate cell id `{id}` in dimension {dim}");
        idx
    }

    pub fn vertex(&mut self, id: impl Into<String>) -> usize {
        self.insert(
            0,
            Cell {
                id: id.into(),
                boundary: Vec::new(),
                ends: None,
                walk: None,
                base: None,
            },
        )
    }

    pub fn edge(&mut self, id: impl Into<String>, tail: usize, head: usize) -> usize {
        self.insert(
            1,
            Cell {
                id: id.into(),
                boundary: vec![(head, 1), (tail, -1)],
                ends: Some((tail, head)),
                walk: None,
                base: None,
            },
        )
    }

    /// 2-cell attached along a closed edge walk; `true` = reversed edge.
    pub fn face(&mut self, id: impl Into<String>, walk: Vec<(usize, bool)>) -> usize {
        let boundary = walk
            .iter()
            .map(|&(e, rev)| (e, if rev { -1 } else { 1 }))
            .collect();
        self.insert(
            2,
            Cell {
                id: id.into(),
                boundary,
                ends: None,
                walk: Some(walk),
                base: None,
            },
        )
    }

    /// Higher cell with an explicit signed face list.
    pub fn cell(
        &mut self,
        dim: usize,
        id: impl Into<String>,
        boundary: Vec<(usize, i64)>,
    ) -> usize {
        assert!(dim >= 2);
        self.insert(
            dim,
            Cell {
                id: id.into(),
                boundary,
                ends: None,
                walk: None,
                base: None,
            },
        )
    }

    pub fn set_base(&mut self, dim: usize, idx: usize, base: usize) {
        self.dims[dim][idx].base = Some(base);
    }

    pub(crate) fn edge_ends(&self, e: usize) -> (usize, usize) {
        self.dims[1][e].ends.unwrap()
    }

    pub fn build(mut self) -> CellComplex {
        // Sort by id within each dimension, remapping references.
        let mut perms: Vec<Vec<usize>> = Vec::new();
        for k in 0..self.dims.len() {
            if k > 0 {
                let perm = &perms[k - 1];
                for cell in &mut self.dims[k] {
                    for (f, _) in cell.boundary.iter_mut() {
                        *f = perm[*f];
                    }
                    if let Some((t, h)) = cell.ends.as_mut() {
                        *t = perm[*t];
                        *h = perm[*h];
                    }
                    if let Some(walk) = cell.walk.as_mut() {
                        for (e, _) in walk.iter_mut() {
                            *e = perm[*e];
                        }
                    }
                }
            }
            let mut order: Vec<usize> = (0..self.dims[k].len()).collect();
            order.sort_by(|&a, &b| self.dims[k][a].id.cmp(&self.dims[k][b].id));
            let mut perm = vec![0usize; order.len()];
            for (new, &old) in order.iter().enumerate() {
                perm[old] = new;
            }
            let mut sorted: Vec<Cell> = Vec::with_capacity(order.len());
            for &old in &order {
                sorted.push(self.dims[k][old].clone());
            }
            self.dims[k] = sorted;
            perms.push(perm);
        }
        let complex = CellComplex {
            dims: self.dims,
            degree: self.degree,
        };
        complex.validate();
        complex
    }
}

impl CellComplex {
    fn validate(&self) {
        for (k, level) in self.dims.iter().enumerate() {
            for cell in level {
                for &(f, _) in &cell.boundary {
                    assert!(k > 0 && f < self.dims[k - 1].len(), "face out of range");
                }
                if k == 1 {
                    let (t, h) = cell.ends.expect("edge without ends");
                    assert!(t < self.dims[0].len() && h < self.dims[0].len());
                }
                if let Some(walk) = &cell.walk {
                    let mut at: Option<usize> = None;
                    let mut start: Option<usize> = None;
                    for &(e, rev) in walk {
                        let (t, h) = self.dims[1][e].ends.unwrap();
                        let (from, to) = if rev { (h, t) } else { (t, h) };
                        if let Some(cur) = at {
                            assert_eq!(cur, from, "walk does not chain in `{}`", cell.id);
                        } else {
                            start = Some(from);
                        }
                        at = Some(to);
                    }
                    if let (Some(s), Some(e)) = (start, at) {
                        assert_eq!(s, e, "walk does not close in `{}`", cell.id);
                    }
                }
            }
        }
        // ∂∘∂ = 0 is asserted by the chain complex constructor.
        let _ = self.chain_complex();
    }

    /// Simplicial complexes as cell complexes; 2-cells get their boundary
    /// walks so that covers of 2-dimensional complexes work.
    pub fn from_simplicial(k: &SimplicialComplex) -> CellComplex {
        let mut b = CellComplexBuilder::new();
        let name = |spx: &[Vertex]| spx.iter().map(|&v| k.vertex_name(v)).join(".");
        let mut index: Vec<HashMap<Vec<Vertex>, usize>> = Vec::new();
        let top = if k.dim() < 0 { -1 } else { k.dim() };
        for d in 0..=top.max(-1) {
            let d = d as usize;
            let mut level = HashMap::new();
            for spx in k.simplices(d) {
                let idx = match d {
                    0 => b.vertex(name(spx)),
                    1 => {
                        let tail = index[0][&vec![spx[0]]];
                        let head = index[0][&vec![spx[1]]];
                        b.edge(name(spx), tail, head)
                    }
                    2 => {
                        let e01 = index[1][&vec![spx[0], spx[1]]];
                        let e12 = index[1][&vec![spx[1], spx[2]]];
                        let e02 = index[1][&vec![spx[0], spx[2]]];
                        b.face(name(spx), vec![(e01, false), (e12, false), (e02, true)])
                    }
                    _ => {
                        let boundary = (0..spx.len())
                            .map(|i| {
                                let mut face = spx.clone();
                                face.remove(i);
                                (index[d - 1][&face], if i % 2 == 0 { 1 } else { -1 })
                            })
                            .collect();
                        b.cell(d, name(spx), boundary)
                    }
                };
                level.insert(spx.clone(), idx);
            }
            index.push(level);
        }
        b.build()
    }
}

/// Graph product data: a flag complex L with a finite cyclic order per
/// vertex.
#[derive(Clone, Debug)]
pub struct GraphProductSpec {
    pub complex: SimplicialComplex,
    pub orders: Vec<u64>,
}

impl GraphProductSpec {
    pub fn new(complex: SimplicialComplex, orders: Vec<u64>) -> Result<Self, CoverError> {
        assert_eq!(orders.len(), complex.vertex_count());
        if let Some(w) = complex.flag_witness() {
            let names = w
                .iter()
                .map(|&v| complex.vertex_name(v).to_owned())
                .collect();
            return Err(CoverError::Complex(ComplexError::NotFlag(names)));
        }
        for (v, &m) in orders.iter().enumerate() {
            if m < 2 {
                return Err(CoverError::BadOrder(
                    m,
                    complex.vertex_name(v as Vertex).to_owned(),
                ));
            }
        }
        Ok(GraphProductSpec { complex, orders })
    }

    pub fn uniform(complex: SimplicialComplex, m: u64) -> Result<Self, CoverError> {
        let n = complex.vertex_count();
        Self::new(complex, vec![m; n])
    }

    pub fn min_order(&self) -> u64 {
        self.orders.iter().copied().min().unwrap_or(2)
    }
}

/// Finite abelian quotient ∏_v ℤ/k_v of the graph product, with k_v | m_v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientTarget {
    pub divisors: Vec<u64>,
}

impl QuotientTarget {
    pub fn full(spec: &GraphProductSpec) -> Self {
        QuotientTarget {
            divisors: spec.orders.clone(),
        }
    }

    pub fn trivial(spec: &GraphProductSpec) -> Self {
        QuotientTarget {
            divisors: vec![1; spec.orders.len()],
        }
    }

    pub fn validate(&self, spec: &GraphProductSpec) -> Result<(), CoverError> {
        assert_eq!(self.divisors.len(), spec.orders.len());
        for (v, (&k, &m)) in self.divisors.iter().zip(&spec.orders).enumerate() {
            if k == 0 || m % k != 0 {
                return Err(CoverError::DivisibilityViolation(
                    k,
                    spec.complex.vertex_name(v as Vertex).to_owned(),
                    m,
                ));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }
}

fn coset_id(q: &[u64], sigma: &[Vertex]) -> String {
    q.iter()
        .enumerate()
        .map(|(v, &x)| {
            if sigma.contains(&(v as Vertex)) {
                "*".to_owned()
            } else {
                x.to_string()
            }
        })
        .join(".")
}

fn simplex_id(k: &SimplicialComplex, spx: &[Vertex]) -> String {
    if spx.is_empty() {
        "@".to_owned()
    } else {
        spx.iter().map(|&v| k.vertex_name(v)).join(".")
    }
}

fn cube_key(base: &SimplicialComplex, sigma: &[Vertex], tau: &[Vertex]) -> String {
    format!("[{}|{}]", simplex_id(base, sigma), simplex_id(base, tau))
}

fn sorted_with(s: &[Vertex], v: Vertex) -> Vec<Vertex> {
    let mut out = s.to_vec();
    out.push(v);
    out.sort();
    out
}

fn sorted_without(s: &[Vertex], v: Vertex) -> Vec<Vertex> {
    s.iter().copied().filter(|&u| u != v).collect()
}

/// The quotient of the right-angled building 𝒰(G_L, K_L) by the kernel of
/// G_L → ∏_v ℤ/k_v. Cells are pairs (coset of ∏_{v∈σ} ℤ/k_v, chamber cube
/// (σ,τ)); the count of cells over a cube is |Q| / ∏_{v∈σ} k_v. Boundaries
/// come from the chamber, with coset enlargement across mirrors. The base
/// projection of a cell is the index of its cube in the chamber.
pub fn building_quotient(
    spec: &GraphProductSpec,
    target: &QuotientTarget,
) -> Result<CellComplex, CoverError> {
    target.validate(spec)?;
    let chamber = davis_chamber(&spec.complex)?;
    let base = &spec.complex;
    let nv = base.vertex_count();
    let k = &target.divisors;

    // Enumerate Q = ∏ Z/k_v in mixed-radix order.
    let mut elements: Vec<Vec<u64>> = vec![vec![0; nv]];
    for v in 0..nv {
        let mut next = Vec::new();
        for q in &elements {
            for x in 0..k[v] {
                let mut q2 = q.clone();
                q2[v] = x;
                next.push(q2);
            }
        }
        elements = next;
    }

    // Canonical representative of q·φ(G_σ): zero out the σ-coordinates.
    let canon = |q: &[u64], sigma: &[Vertex]| -> Vec<u64> {
        let mut out = q.to_vec();
        for &v in sigma {
            out[v as usize] = 0;
        }
        out
    };

    let mut builder = CellComplexBuilder::new().degree(target.order());
    let mut index: Vec<HashMap<(Vec<u64>, String), usize>> = Vec::new();
    for d in 0..=chamber.dim() {
        let mut level: HashMap<(Vec<u64>, String), usize> = HashMap::new();
        for (cube_pos, cube) in chamber.cubes(d).iter().enumerate() {
            let ckey = cube_key(base, &cube.sigma, &cube.tau);
            let dirs = cube.directions();
            for q in &elements {
                let rep = canon(q, &cube.sigma);
                if rep != *q {
                    continue;
                }
                let id = format!("{}{}", coset_id(q, &cube.sigma), ckey);
                let idx = match d {
                    0 => builder.vertex(id),
                    1 => {
                        // tail: x_v = 0 face (σ,σ); head: x_v = 1 face (τ,τ)
                        let tail =
                            index[0][&(rep.clone(), cube_key(base, &cube.sigma, &cube.sigma))];
                        let head_rep = canon(&rep, &cube.tau);
                        let head = index[0][&(head_rep, cube_key(base, &cube.tau, &cube.tau))];
                        builder.edge(id, tail, head)
                    }
                    2 => {
                        let (u, w) = (dirs[0], dirs[1]);
                        let sigma_u = sorted_with(&cube.sigma, u);
                        let sigma_w = sorted_with(&cube.sigma, w);
                        let tau_wo_u = sorted_without(&cube.tau, u);
                        let tau_wo_w = sorted_without(&cube.tau, w);
                        let e_u0 =
                            index[1][&(rep.clone(), cube_key(base, &cube.sigma, &tau_wo_u))];
                        let e_w0 =
                            index[1][&(rep.clone(), cube_key(base, &cube.sigma, &tau_wo_w))];
                        let e_u1 =
                            index[1][&(canon(&rep, &[u]), cube_key(base, &sigma_u, &cube.tau))];
                        let e_w1 =
                            index[1][&(canon(&rep, &[w]), cube_key(base, &sigma_w, &cube.tau))];
                        builder.face(
                            id,
                            vec![(e_w0, false), (e_u1, false), (e_w1, true), (e_u0, true)],
                        )
                    }
                    _ => {
                        let mut boundary = Vec::new();
                        for (pos, &v) in dirs.iter().enumerate() {
                            // 1-based position parity
                            let sign = if (pos + 1) % 2 == 0 { 1 } else { -1 };
                            let tau_wo = sorted_without(&cube.tau, v);
                            let sigma_with = sorted_with(&cube.sigma, v);
                            let f0 = index[d - 1]
                                [&(rep.clone(), cube_key(base, &cube.sigma, &tau_wo))];
                            let f1 = index[d - 1]
                                [&(canon(&rep, &[v]), cube_key(base, &sigma_with, &cube.tau))];
                            boundary.push((f0, sign));
                            boundary.push((f1, -sign));
                        }
                        builder.cell(d, id, boundary)
                    }
                };
                builder.set_base(d, idx, cube_pos);
                level.insert((rep, ckey.clone()), idx);
            }
        }
        index.push(level);
    }
    Ok(builder.build())
}

/// Presentation of π₁ read from a connected cell complex: a BFS spanning
/// tree from the least vertex id, one generator per non-tree edge, one
/// relator per 2-cell attaching walk.
#[derive(Clone, Debug)]
pub struct Pi1 {
    pub root: usize,
    pub tree_edges: Vec<bool>,
    /// Non-tree edge indices, sorted; generator g is `generators[g]`.
    pub generators: Vec<usize>,
    pub edge_to_gen: Vec<Option<usize>>,
    /// Words in the generators, signs ±1.
    pub relators: Vec<Vec<(usize, i8)>>,
    /// Tree path from the root to each vertex, as (edge, reversed) steps.
    paths: Vec<Vec<(usize, bool)>>,
}

pub fn pi1_presentation(x: &CellComplex) -> Result<Pi1, CoverError> {
    if x.cell_count(0) == 0 || !x.is_connected() {
        return Err(CoverError::Disconnected);
    }
    let nv = x.cell_count(0);
    // Cells are sorted by id, so vertex 0 has the least identifier.
    let root = 0usize;
    let mut adjacency: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); nv];
    for (e, cell) in x.cells(1).iter().enumerate() {
        let (t, h) = cell.ends.unwrap();
        adjacency[t].push((e, h, false));
        adjacency[h].push((e, t, true));
    }
    for adj in &mut adjacency {
        adj.sort();
    }
    let mut tree_edges = vec![false; x.cell_count(1)];
    let mut paths: Vec<Option<Vec<(usize, bool)>>> = vec![None; nv];
    paths[root] = Some(Vec::new());
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &(e, to, rev) in &adjacency[v] {
            if paths[to].is_none() {
                tree_edges[e] = true;
                let mut p = paths[v].clone().unwrap();
                p.push((e, rev));
                paths[to] = Some(p);
                queue.push_back(to);
            }
        }
    }
    let paths: Vec<Vec<(usize, bool)>> = paths.into_iter().map(Option::unwrap).collect();
    let generators: Vec<usize> = (0..x.cell_count(1)).filter(|&e| !tree_edges[e]).collect();
    let mut edge_to_gen = vec![None; x.cell_count(1)];
    for (g, &e) in generators.iter().enumerate() {
        edge_to_gen[e] = Some(g);
    }
    let mut relators = Vec::new();
    for cell in x.cells(2) {
        let walk = cell
            .walk
            .as_ref()
            .ok_or_else(|| CoverError::MissingWalk(cell.id.clone()))?;
        let word: Vec<(usize, i8)> = walk
            .iter()
            .filter_map(|&(e, rev)| edge_to_gen[e].map(|g| (g, if rev { -1 } else { 1 })))
            .collect();
        relators.push(word);
    }
    Ok(Pi1 {
        root,
        tree_edges,
        generators,
        edge_to_gen,
        relators,
        paths,
    })
}

pub type Perm = Vec<usize>;

pub fn perm_identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn perm_inverse(p: &Perm) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x] = i;
    }
    out
}

fn is_permutation(p: &Perm, n: usize) -> bool {
    p.len() == n && {
        let mut seen = vec![false; n];
        p.iter().all(|&x| {
            x < n && {
                let fresh = !seen[x];
                seen[x] = true;
                fresh
            }
        })
    }
}

/// Evaluate a word in the generators to a sheet permutation.
fn eval_word(word: &[(usize, i8)], perms: &[Perm], n: usize) -> Perm {
    let mut out = perm_identity(n);
    for &(g, s) in word {
        let p = if s > 0 {
            perms[g].clone()
        } else {
            perm_inverse(&perms[g])
        };
        out = out.into_iter().map(|x| p[x]).collect();
    }
    out
}

/// A finite cover of a cell complex, given by one sheet permutation per
/// π₁ generator (non-tree edge). Valid when every relator evaluates to
/// the identity permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverMap {
    pub degree: usize,
    pub perms: Vec<Perm>,
}

impl CoverMap {
    pub fn trivial(degree: usize, generators: usize) -> Self {
        CoverMap {
            degree,
            perms: vec![perm_identity(degree); generators],
        }
    }

    pub fn validate(&self, pi1: &Pi1) -> Result<(), CoverError> {
        if self.perms.len() != pi1.generators.len() {
            return Err(CoverError::GeneratorMismatch(
                self.perms.len(),
                pi1.generators.len(),
            ));
        }
        for (i, p) in self.perms.iter().enumerate() {
            if !is_permutation(p, self.degree) {
                return Err(CoverError::BadPermutation(i, self.degree));
            }
        }
        for (i, relator) in pi1.relators.iter().enumerate() {
            if eval_word(relator, &self.perms, self.degree) != perm_identity(self.degree) {
                return Err(CoverError::RelatorCheckFailed(i));
            }
        }
        Ok(())
    }

    /// Whether the sheets form a single orbit (connected cover).
    pub fn is_transitive(&self) -> bool {
        if self.degree == 0 {
            return false;
        }
        let mut seen = vec![false; self.degree];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(s) = stack.pop() {
            for p in &self.perms {
                let pinv = perm_inverse(p);
                for t in [p[s], pinv[s]] {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        seen.into_iter().all(|b| b)
    }
}

/// Build the cover complex: n sheets per cell, boundaries lifted through
/// the permutation action. Only complexes of dimension ≤ 2 are supported.
pub fn build_cover(x: &CellComplex, cover: &CoverMap) -> Result<CellComplex, CoverError> {
    if x.dim() > 2 {
        return Err(CoverError::DimensionTooHigh(x.dim() as usize));
    }
    let pi1 = pi1_presentation(x)?;
    cover.validate(&pi1)?;
    let n = cover.degree;
    let edge_perm = |e: usize| -> Perm {
        match pi1.edge_to_gen[e] {
            Some(g) => cover.perms[g].clone(),
            None => perm_identity(n),
        }
    };
    let mut b = CellComplexBuilder::new().degree(x.degree() * n as u64);
    let sheet_id = |id: &str, s: usize| format!("{id}#{s}");
    let mut vidx = vec![vec![0usize; n]; x.cell_count(0)];
    for (v, cell) in x.cells(0).iter().enumerate() {
        for s in 0..n {
            let idx = b.vertex(sheet_id(&cell.id, s));
            b.set_base(0, idx, v);
            vidx[v][s] = idx;
        }
    }
    let mut eidx = vec![vec![0usize; n]; x.cell_count(1)];
    for (e, cell) in x.cells(1).iter().enumerate() {
        let (t, h) = cell.ends.unwrap();
        let p = edge_perm(e);
        for s in 0..n {
            let idx = b.edge(sheet_id(&cell.id, s), vidx[t][s], vidx[h][p[s]]);
            b.set_base(1, idx, e);
            eidx[e][s] = idx;
        }
    }
    for (c, cell) in x.cells(2).iter().enumerate() {
        let walk = cell
            .walk
            .as_ref()
            .ok_or_else(|| CoverError::MissingWalk(cell.id.clone()))?;
        for s in 0..n {
            let mut t = s;
            let mut lifted = Vec::with_capacity(walk.len());
            for &(e, rev) in walk {
                let p = edge_perm(e);
                if rev {
                    let tp = perm_inverse(&p)[t];
                    lifted.push((eidx[e][tp], true));
                    t = tp;
                } else {
                    lifted.push((eidx[e][t], false));
                    t = p[t];
                }
            }
            assert_eq!(t, s, "walk lift did not close");
            let idx = b.face(sheet_id(&cell.id, s), lifted);
            b.set_base(2, idx, c);
        }
    }
    Ok(b.build())
}

fn all_perms(n: usize) -> Vec<Perm> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (0..n).permutations(n).collect()
}

fn conjugate(c: &Perm, p: &Perm) -> Perm {
    let cinv = perm_inverse(c);
    (0..p.len()).map(|x| c[p[cinv[x]]]).collect()
}

/// All degree-n permutation representations of π₁(X), up to simultaneous
/// conjugacy, in deterministic order. Intended for small degree (≤ 6
/// documented); the raw tuple space is (n!)^generators.
pub fn enumerate_covers(x: &CellComplex, degree: usize) -> Result<Vec<CoverMap>, CoverError> {
    let pi1 = pi1_presentation(x)?;
    let g = pi1.generators.len();
    let perms = all_perms(degree);
    let conjugators = all_perms(degree);
    let mut out = Vec::new();
    let mut indices = vec![0usize; g];
    loop {
        let tuple: Vec<Perm> = indices.iter().map(|&i| perms[i].clone()).collect();
        let cm = CoverMap {
            degree,
            perms: tuple.clone(),
        };
        if cm.validate(&pi1).is_ok() {
            let minimal = conjugators.iter().all(|c| {
                let conj: Vec<Perm> = tuple.iter().map(|p| conjugate(c, p)).collect();
                conj >= tuple
            });
            if minimal {
                out.push(cm);
            }
        }
        // increment mixed-radix counter
        let mut pos = g;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < perms.len() {
                break;
            }
            indices[pos] = 0;
        }
        if g == 0 {
            return Ok(out);
        }
    }
}

/// Result of restricting a cover to a subcomplex of the base.
#[derive(Clone, Debug)]
pub struct RestrictedCover {
    /// The subcomplex, extracted as a complex of its own.
    pub base: CellComplex,
    /// Cover map over `base`, present when `base` is connected.
    pub map: Option<CoverMap>,
    /// The preimage complex inside the built cover.
    pub preimage: CellComplex,
    pub components: usize,
}

/// Pull a cover back along the inclusion of a subcomplex: the preimage of
/// `sub` in the cover of `x`, of the same degree.
pub fn restrict_cover(
    x: &CellComplex,
    cover: &CoverMap,
    sub: &SubComplex,
) -> Result<RestrictedCover, CoverError> {
    sub.validate(x)?;
    let total = build_cover(x, cover)?;
    let preimage_sub = total.preimage(sub);
    let preimage = total.extract(&preimage_sub)?;
    let base = x.extract(sub)?;
    let map = if base.cell_count(0) > 0 && base.is_connected() {
        let pi1_x = pi1_presentation(x)?;
        let pi1_a = pi1_presentation(&base)?;
        let n = cover.degree;
        let xid: HashMap<&str, usize> = x
            .cells(1)
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.as_str(), i))
            .collect();
        let edge_perm = |e_in_x: usize| -> Perm {
            match pi1_x.edge_to_gen[e_in_x] {
                Some(g) => cover.perms[g].clone(),
                None => perm_identity(n),
            }
        };
        let path_perm = |path: &[(usize, bool)]| -> Perm {
            let mut out = perm_identity(n);
            for &(e_in_a, rev) in path {
                let e = xid[base.cells(1)[e_in_a].id.as_str()];
                let p = if rev {
                    perm_inverse(&edge_perm(e))
                } else {
                    edge_perm(e)
                };
                out = out.into_iter().map(|s| p[s]).collect();
            }
            out
        };
        let mut perms = Vec::new();
        for &gen_edge in &pi1_a.generators {
            let (t, h) = base.cells(1)[gen_edge].ends.unwrap();
            let e = xid[base.cells(1)[gen_edge].id.as_str()];
            let to_tail = path_perm(&pi1_a.paths[t]);
            let e_p = edge_perm(e);
            let from_head = perm_inverse(&path_perm(&pi1_a.paths[h]));
            let composed: Perm = (0..n).map(|s| from_head[e_p[to_tail[s]]]).collect();
            perms.push(composed);
        }
        let cm = CoverMap { degree: n, perms };
        cm.validate(&pi1_a)?;
        Some(cm)
    } else {
        None
    };
    let components = preimage.component_count();
    Ok(RestrictedCover {
        base,
        map,
        preimage,
        components,
    })
}

/// Simplicial self-map, given by vertex images. Must carry simplices to
/// simplices without collapsing them.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub images: Vec<Vertex>,
}

impl SimplicialMap {
    pub fn identity(x: &SimplicialComplex) -> Self {
        SimplicialMap {
            images: (0..x.vertex_count() as Vertex).collect(),
        }
    }

    pub fn new(x: &SimplicialComplex, images: Vec<Vertex>) -> Result<Self, CoverError> {
        if images.len() != x.vertex_count() {
            return Err(CoverError::NotSimplicial(
                "image not defined on every vertex".into(),
            ));
        }
        for spx in x.all_simplices() {
            let img: Vec<Vertex> = spx.iter().map(|&v| images[v as usize]).sorted().collect();
            if img.windows(2).any(|w| w[0] == w[1]) {
                return Err(CoverError::NotSimplicial(format!(
                    "simplex {spx:?} is collapsed"
                )));
            }
            if !x.contains(&img) {
                return Err(CoverError::NotSimplicial(format!(
                    "image of {spx:?} is not a simplex"
                )));
            }
        }
        Ok(SimplicialMap { images })
    }

    fn apply(&self, spx: &[Vertex]) -> Vec<Vertex> {
        spx.iter().map(|&v| self.images[v as usize]).collect()
    }

    /// Sorted image with the sign of the sorting permutation.
    fn apply_sign(&self, spx: &[Vertex]) -> (Vec<Vertex>, i64) {
        let img = self.apply(spx);
        let mut sign = 1i64;
        for i in 0..img.len() {
            for j in i + 1..img.len() {
                if img[i] > img[j] {
                    sign = -sign;
                }
            }
        }
        let mut sorted = img;
        sorted.sort();
        (sorted, sign)
    }
}

/// Cells of the m-layer mapping torus: horizontal simplices per layer and
/// prism/staircase cells with A at a layer and B at the next.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum TorusKey {
    Horizontal(usize, Vec<Vertex>),
    Mixed(usize, Vec<Vertex>, Vec<Vertex>),
}

/// Prism decomposition of the mapping torus of a simplicial self-map.
pub fn mapping_torus(x: &SimplicialComplex, f: &SimplicialMap) -> Result<CellComplex, CoverError> {
    mapping_torus_cover(x, f, 1)
}

/// The degree-m cyclic cover of the mapping torus in the circle direction:
/// m prism layers glued in a cycle, the last one through f. Cells project
/// to the 1-layer torus by forgetting the layer.
pub fn mapping_torus_cover(
    x: &SimplicialComplex,
    f: &SimplicialMap,
    m: usize,
) -> Result<CellComplex, CoverError> {
    assert!(m >= 1);
    let f = SimplicialMap::new(x, f.images.clone())?;
    let mut keys: BTreeSet<TorusKey> = BTreeSet::new();
    for layer in 0..m {
        for spx in x.all_simplices() {
            keys.insert(TorusKey::Horizontal(layer, spx.clone()));
            let k = spx.len();
            for j in 0..k {
                keys.insert(TorusKey::Mixed(
                    layer,
                    spx[..=j].to_vec(),
                    spx[j..].to_vec(),
                ));
                if j + 1 < k {
                    keys.insert(TorusKey::Mixed(
                        layer,
                        spx[..=j].to_vec(),
                        spx[j + 1..].to_vec(),
                    ));
                }
            }
        }
    }
    let dim_of = |key: &TorusKey| -> usize {
        match key {
            TorusKey::Horizontal(_, s) => s.len() - 1,
            TorusKey::Mixed(_, a, b) => a.len() + b.len() - 1,
        }
    };
    let id_of = |key: &TorusKey| -> String {
        match key {
            TorusKey::Horizontal(i, s) => format!("h{i}:{}", simplex_id(x, s)),
            TorusKey::Mixed(i, a, b) => {
                format!("p{i}:{}|{}", simplex_id(x, a), simplex_id(x, b))
            }
        }
    };
    let top_horizontal = |layer: usize, b: &[Vertex]| -> (TorusKey, i64) {
        if layer + 1 == m {
            let (img, sign) = f.apply_sign(b);
            (TorusKey::Horizontal(0, img), sign)
        } else {
            (TorusKey::Horizontal(layer + 1, b.to_vec()), 1)
        }
    };
    let faces_of = |key: &TorusKey| -> Vec<(TorusKey, i64)> {
        match key {
            TorusKey::Horizontal(i, s) => {
                if s.len() == 1 {
                    return Vec::new();
                }
                (0..s.len())
                    .map(|j| {
                        let mut face = s.clone();
                        face.remove(j);
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        (TorusKey::Horizontal(*i, face), sign)
                    })
                    .collect()
            }
            TorusKey::Mixed(i, a, b) => {
                let mut out = Vec::new();
                let la = a.len();
                for p in 0..la + b.len() {
                    let sign = if p % 2 == 0 { 1 } else { -1 };
                    if p < la {
                        let mut a2 = a.clone();
                        a2.remove(p);
                        if a2.is_empty() {
                            let (k, extra) = top_horizontal(*i, b);
                            out.push((k, sign * extra));
                        } else {
                            out.push((TorusKey::Mixed(*i, a2, b.clone()), sign));
                        }
                    } else {
                        let mut b2 = b.clone();
                        b2.remove(p - la);
                        if b2.is_empty() {
                            out.push((TorusKey::Horizontal(*i, a.clone()), sign));
                        } else {
                            out.push((TorusKey::Mixed(*i, a.clone(), b2), sign));
                        }
                    }
                }
                out
            }
        }
    };

    let mut by_dim: Vec<Vec<&TorusKey>> = Vec::new();
    for key in &keys {
        let d = dim_of(key);
        while by_dim.len() <= d {
            by_dim.push(Vec::new());
        }
        by_dim[d].push(key);
    }
    let mut builder = CellComplexBuilder::new().degree(m as u64);
    let mut index: HashMap<&TorusKey, usize> = HashMap::new();
    let mut base_index: HashMap<String, usize> = HashMap::new();
    for (d, level) in by_dim.iter().enumerate() {
        let mut ordered = level.clone();
        ordered.sort_by_key(|k| id_of(k));
        for key in ordered {
            let id = id_of(key);
            let fs = faces_of(key);
            let idx = match d {
                0 => builder.vertex(id.clone()),
                1 => {
                    let head = fs.iter().find(|(_, s)| *s > 0).unwrap();
                    let tail = fs.iter().find(|(_, s)| *s < 0).unwrap();
                    builder.edge(
                        id.clone(),
                        index[keys.get(&tail.0).unwrap()],
                        index[keys.get(&head.0).unwrap()],
                    )
                }
                2 => {
                    let signed: Vec<(usize, i64)> = fs
                        .iter()
                        .map(|(k, s)| (index[keys.get(k).unwrap()], *s))
                        .collect();
                    let walk = chain_walk(&signed, &builder);
                    builder.face(id.clone(), walk)
                }
                _ => {
                    let boundary = fs
                        .into_iter()
                        .map(|(k, s)| (index[keys.get(&k).unwrap()], s))
                        .collect();
                    builder.cell(d, id.clone(), boundary)
                }
            };
            index.insert(key, idx);
            let base_key = match key {
                TorusKey::Horizontal(_, s) => format!("{d}:h0:{}", simplex_id(x, s)),
                TorusKey::Mixed(_, a, b) => {
                    format!("{d}:p0:{}|{}", simplex_id(x, a), simplex_id(x, b))
                }
            };
            let fresh = base_index.len();
            let entry = *base_index.entry(base_key).or_insert(fresh);
            builder.set_base(d, idx, entry);
        }
    }
    // Base references above enumerate layer-0 keys in the same id order
    // that the m = 1 construction sorts them, so they agree with the cells
    // of `mapping_torus(x, f)` dimension by dimension.
    Ok(rebase_per_dim(builder))
}

/// Base ids in `mapping_torus_cover` are assigned from a global counter;
/// renumber them densely within each dimension, in first-seen order.
fn rebase_per_dim(builder: CellComplexBuilder) -> CellComplex {
    let mut builder = builder;
    for level in builder.dims.iter_mut() {
        let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut ordered: Vec<usize> = level.iter().filter_map(|c| c.base).collect();
        ordered.sort_unstable();
        ordered.dedup();
        for (new, old) in ordered.into_iter().enumerate() {
            remap.insert(old, new);
        }
        for cell in level.iter_mut() {
            if let Some(b) = cell.base.as_mut() {
                *b = remap[b];
            }
        }
    }
    builder.build()
}

/// Chain the signed boundary edges of a 2-cell into a closed walk.
fn chain_walk(signed: &[(usize, i64)], builder: &CellComplexBuilder) -> Vec<(usize, bool)> {
    let ends = |e: usize| builder.edge_ends(e);
    let mut remaining: Vec<(usize, bool)> = signed.iter().map(|&(e, s)| (e, s < 0)).collect();
    let first = remaining.remove(0);
    let mut walk = vec![first];
    let mut at = {
        let (t, h) = ends(first.0);
        if first.1 {
            t
        } else {
            h
        }
    };
    while !remaining.is_empty() {
        let pos = remaining
            .iter()
            .position(|&(e, rev)| {
                let (t, h) = ends(e);
                let from = if rev { h } else { t };
                from == at
            })
            .expect("2-cell boundary does not chain");
        let step = remaining.remove(pos);
        let (t, h) = ends(step.0);
        at = if step.1 { t } else { h };
        walk.push(step);
    }
    walk
}
