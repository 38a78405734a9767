//! Exact embedding obstructions: generic linear immersions into ℝ^{2d},
//! signed intersection vectors of disjoint top simplices, finger-move
//! calculus, the van Kampen linear system, and the perturbed immersions of
//! octahedralizations with their obstruction-level embedding reduction.
//!
//! All geometry is exact rational; "small enough ε" is made operational by
//! halving until two successive halvings agree.

mod immersion;
mod moves;
mod octa;

use thiserror::Error;

use crate::complexes::Vertex;

pub use immersion::{
    detour_intersection_vector, generic_check, intersection_vector, moment_immersion, Immersion,
};
pub use moves::{
    finger_move, mod2_graph_obstruction, odd_scale, vankampen_solve, FingerSolution, SolveOutcome,
    SolveReport, SolveRing,
};
pub use octa::{
    invariance_check, octahedral_obstruction_reduce, perturbed_octahedral_immersion, OctaOutcome,
    PerturbedImmersion,
};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("complex of dimension {0} does not fit target dimension parameter d = {1}")]
    DimensionMismatch(isize, usize),
    #[error("simplex {0:?} is degenerate (not affinely independent)")]
    DegenerateSimplex(Vec<String>),
    #[error("not generic: {0}")]
    NotGeneric(String),
    #[error("coordinates for vertex {0} have wrong length")]
    BadCoordinates(Vertex),
    #[error("intersection vector is over a different ring")]
    RingMismatch,
    #[error("invariance property violated: {0}")]
    InvarianceViolated(String),
    #[error("perturbation stayed degenerate after {0} halvings; pick different vectors")]
    PerturbationDegenerate(u32),
    #[error("operation requires d = 1 (graphs in the plane)")]
    NotAGraph,
    #[error("detour construction failed to reach general position")]
    DetourDegenerate,
}

/// Signed intersection data V_{σ,τ} over ordered pairs of disjoint top
/// simplices, satisfying V_{σ,τ} = (-1)^d V_{τ,σ}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionVector {
    pub d: usize,
    /// Indexed by ordered pairs of top-simplex positions.
    pub entries: std::collections::BTreeMap<(usize, usize), i64>,
}

impl IntersectionVector {
    pub fn zero_like(&self) -> IntersectionVector {
        IntersectionVector {
            d: self.d,
            entries: self.entries.keys().map(|&k| (k, 0)).collect(),
        }
    }

    pub fn get(&self, sigma: usize, tau: usize) -> i64 {
        self.entries.get(&(sigma, tau)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|&v| v == 0)
    }

    pub fn is_zero_mod2(&self) -> bool {
        self.entries.values().all(|&v| v % 2 == 0)
    }

    /// V_{σ,τ} = (-1)^d V_{τ,σ} on every ordered pair.
    pub fn symmetry_holds(&self) -> bool {
        let sign = if self.d % 2 == 0 { 1 } else { -1 };
        self.entries
            .iter()
            .all(|(&(s, t), &v)| self.get(t, s) == sign * v)
    }
}
