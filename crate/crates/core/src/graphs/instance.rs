use super::{Graph, NodeSet};
use crate::{Error, Result};

/// Penalty constant used when none is given. Makes adding a node to a
/// maximal set cost `c - 1 = 1`, the same as removing one.
pub const DEFAULT_PENALTY: f64 = 2.0;

/// Parameters of the hard-instance generator: node count, initial random
/// edge count and the size of the planted unique MIS.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeneratorParams {
    pub n: usize,
    pub e_initial: usize,
    pub m: usize,
}

impl GeneratorParams {
    /// Desk-scale default for generation and census.
    pub const DESK: GeneratorParams = GeneratorParams {
        n: 16,
        e_initial: 24,
        m: 5,
    };

    /// Smaller desk preset for tuning experiments, where every iteration
    /// needs a full gap scan over the `2^n` basis.
    pub const TUNING: GeneratorParams = GeneratorParams {
        n: 12,
        e_initial: 14,
        m: 5,
    };

    /// The 64-node configuration with a planted MIS of size 20.
    pub const FULL_SCALE: GeneratorParams = GeneratorParams {
        n: 64,
        e_initial: 220,
        m: 20,
    };
}

/// A maximum-independent-set problem: the graph, the penalty constant `c`
/// of the cost function and, for generated instances, the planted MIS and
/// the seed that reproduces it.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub graph: Graph,
    c: f64,
    pub known_mis: Option<NodeSet>,
    pub seed: u64,
    pub generator_params: Option<GeneratorParams>,
}

impl ProblemInstance {
    pub fn new(graph: Graph, c: f64) -> Result<Self> {
        Self::with_metadata(graph, c, None, 0, None)
    }

    pub fn with_metadata(
        graph: Graph,
        c: f64,
        known_mis: Option<NodeSet>,
        seed: u64,
        generator_params: Option<GeneratorParams>,
    ) -> Result<Self> {
        if !(c > 1.0) || !c.is_finite() {
            return Err(Error::input(alloc::format!("penalty c must exceed 1, got {c}")));
        }
        if let Some(mis) = known_mis {
            if !graph.is_independent(mis)? {
                return Err(Error::input("known MIS is not an independent set"));
            }
        }
        Ok(ProblemInstance {
            graph,
            c,
            known_mis,
            seed,
            generator_params,
        })
    }

    pub fn penalty(&self) -> f64 {
        self.c
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// `E(x) = -|x| + c * (edges inside x)`.
    pub fn cost(&self, s: NodeSet) -> f64 {
        -(s.len() as f64) + self.c * self.graph.internal_edges(s) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_examples() {
        let k3 = ProblemInstance::new(Graph::complete(3).unwrap(), 2.0).unwrap();
        assert_eq!(k3.cost(NodeSet::EMPTY), 0.0);
        assert_eq!(k3.cost(NodeSet::full(3)), 3.0);
        assert_eq!(k3.cost(NodeSet::from_indices(&[1])), -1.0);
        let p = ProblemInstance::new(Graph::path(5).unwrap(), 3.0).unwrap();
        assert_eq!(p.cost(NodeSet::from_indices(&[0, 2, 4])), -3.0);
    }

    #[test]
    fn penalty_must_exceed_one() {
        let g = Graph::path(2).unwrap();
        assert!(ProblemInstance::new(g.clone(), 1.0).is_err());
        assert!(ProblemInstance::new(g.clone(), f64::NAN).is_err());
        assert!(ProblemInstance::new(g, 1.5).is_ok());
    }

    #[test]
    fn known_mis_must_be_independent() {
        let g = Graph::path(3).unwrap();
        let bad = NodeSet::from_indices(&[0, 1]);
        assert!(ProblemInstance::with_metadata(g, 2.0, Some(bad), 0, None).is_err());
    }
}
