//! Exact deciders for toughness, Hamiltonicity and independence number.
//!
//! All exact searches work on `u64` adjacency masks, so they accept graphs
//! with at most 64 vertices on top of their own configurable limits.

mod hamilton;
mod independence;
mod toughness;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{components, Graph, VertexSet};
use crate::rational::Rational;

pub use hamilton::{
    has_hamilton_path, hamilton_path_backtrack, hamilton_path_dp, hamiltonian_backtrack,
    hamiltonian_dp, is_hamiltonian, HamiltonLimits, HamiltonResult, Method, Verdict,
};
pub use independence::independence_number;
pub use toughness::{toughness_exact, toughness_upper_search, Toughness, ToughnessResult};

pub const DEFAULT_TOUGHNESS_MAX_N: usize = 26;
pub const MASK_LIMIT: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, above the exact-search limit of {max}; use the heuristic or structural verification")]
    SizeLimit { n: usize, max: usize },
    #[error("vertex {0} is not in the graph")]
    BadVertex(usize),
}

pub(crate) fn check_size(n: usize, max: usize) -> Result<(), OracleError> {
    let max = max.min(MASK_LIMIT);
    if n > max {
        return Err(OracleError::SizeLimit { n, max });
    }
    Ok(())
}

/// A vertex cut together with the number of components it leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutsetWitness {
    pub cutset: Vec<usize>,
    pub component_count: usize,
    pub ratio: Rational,
}

impl CutsetWitness {
    /// Measures `cutset` on `g`. Returns `None` unless the cutset is in range
    /// and leaves at least two components.
    pub fn evaluate(g: &Graph, cutset: &[usize]) -> Option<Self> {
        let set = VertexSet::from_vertices(g.n(), cutset.iter().copied()).ok()?;
        let count = components(g, &set).count();
        (count >= 2).then(|| CutsetWitness {
            cutset: set.to_vec(),
            component_count: count,
            ratio: Rational::of(set.len() as u64, count as u64),
        })
    }

    /// Re-measures the witness on `g` and checks every stored field.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        Self::evaluate(g, &self.cutset).is_some_and(|w| w == *self)
    }
}

/// Number of components of the subgraph induced by `alive`.
pub(crate) fn count_components(adj: &[u64], alive: u64) -> u32 {
    let mut rest = alive;
    let mut count = 0;
    while rest != 0 {
        let comp = reach(adj, rest & rest.wrapping_neg(), rest);
        rest &= !comp;
        count += 1;
    }
    count
}

/// Vertices of `within` reachable from `seed` inside `within`.
pub(crate) fn reach(adj: &[u64], seed: u64, within: u64) -> u64 {
    let mut comp = seed;
    let mut frontier = seed;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            next |= adj[f.trailing_zeros() as usize];
            f &= f - 1;
        }
        frontier = next & within & !comp;
        comp |= frontier;
    }
    comp
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}
