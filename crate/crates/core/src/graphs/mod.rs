//! Graphs, independent sets, the MIS cost function and the hard-instance
//! generator.

mod census;
mod enumerate;
mod generator;
mod graph;
mod instance;

pub use census::{census, MinimaCensus};
pub use enumerate::{
    enumerate_maximal_sets, find_independent_set_dfs, IndependentSetSearch, SearchStep, DEFAULT_ENUMERATION_CAP,
};
pub use generator::{generate_hard_instance, generate_hard_instance_with, generate_with_retries, GeneratorOptions};
pub use graph::{Graph, Members, NodeSet, MAX_NODES};
pub use instance::{GeneratorParams, ProblemInstance, DEFAULT_PENALTY};

/// True iff no edge of `g` has both endpoints in `s`.
pub fn is_independent(g: &Graph, s: NodeSet) -> crate::Result<bool> {
    g.is_independent(s)
}

/// `E(x) = -|x| + c * (edges inside x)`.
pub fn cost(inst: &ProblemInstance, s: NodeSet) -> f64 {
    inst.cost(s)
}
