use alloc::vec::Vec;

use super::model::FLIP_EPS;
use super::TransverseFieldModel;
use crate::graphs::NodeSet;

/// The single flip with the most negative cost, lowest index on ties, or
/// `None` at a local minimum.
pub fn steepest_flip(m: &TransverseFieldModel, x: NodeSet) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for i in 0..m.n() {
        let c = m.flip_cost(x, i);
        if c < -FLIP_EPS && best.is_none_or(|(_, b)| c < b - FLIP_EPS) {
            best = Some((i, c));
        }
    }
    best.map(|(i, _)| i)
}

/// Steepest single-flip descent on the classical energy.
pub fn gradient_descent(m: &TransverseFieldModel, x: NodeSet) -> NodeSet {
    let mut x = x;
    while let Some(i) = steepest_flip(m, x) {
        x = x.flipped(i);
    }
    x
}

/// Descent destination of every basis state, indexed by bitmask.
///
/// Each state takes one steepest step, then chains are resolved with
/// memoization, so the cost is one flip scan per state.
pub fn descent_map(m: &TransverseFieldModel) -> Vec<NodeSet> {
    let dim = 1usize << m.n();
    let next: Vec<u64> = (0..dim as u64)
        .map(|b| {
            let x = NodeSet::from_bits(b);
            steepest_flip(m, x).map_or(b, |i| x.flipped(i).bits())
        })
        .collect();
    let mut dest = alloc::vec![u64::MAX; dim];
    let mut chain = Vec::new();
    for start in 0..dim {
        let mut cur = start;
        while dest[cur] == u64::MAX && next[cur] as usize != cur {
            chain.push(cur);
            cur = next[cur] as usize;
        }
        let end = if dest[cur] == u64::MAX { cur as u64 } else { dest[cur] };
        dest[cur] = end;
        for k in chain.drain(..) {
            dest[k] = end;
        }
    }
    dest.into_iter().map(NodeSet::from_bits).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{Graph, ProblemInstance};

    fn model(g: Graph) -> TransverseFieldModel {
        TransverseFieldModel::from_instance(&ProblemInstance::new(g, 2.0).unwrap(), None).unwrap()
    }

    #[test]
    fn fixed_point_and_edgeless() {
        let m = model(Graph::path(3).unwrap());
        let s = NodeSet::from_indices(&[0, 2]);
        assert_eq!(gradient_descent(&m, s), s);
        let e = model(Graph::new(3).unwrap());
        assert_eq!(gradient_descent(&e, NodeSet::EMPTY), NodeSet::full(3));
    }

    #[test]
    fn dependent_pair_on_path() {
        // {0,1}: cost -2+2 = 0. Flips: 0 off -> -1 (Δ=-1), 1 off -> -1 (Δ=-1),
        // 2 on -> 1 (Δ=+1). Tie between 0 and 1 goes to 0, leaving {1},
        // which is maximal on the path.
        let m = model(Graph::path(3).unwrap());
        let out = gradient_descent(&m, NodeSet::from_indices(&[0, 1]));
        assert_eq!(out, NodeSet::from_indices(&[1]));
        assert!(m.diagonal_energy(out) < 0.0);
        assert!(m.is_local_minimum(out));
    }

    #[test]
    fn map_agrees_with_direct_descent() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0), (0, 3)]).unwrap();
        let m = model(g);
        let map = descent_map(&m);
        for b in 0u64..128 {
            let x = NodeSet::from_bits(b);
            assert_eq!(map[b as usize], gradient_descent(&m, x));
        }
    }
}
