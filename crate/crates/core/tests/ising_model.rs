mod common;

use aqo_core::graphs::{Graph, NodeSet};
use aqo_core::ising::{descent_map, gradient_descent};
use common::{brute_cost, graphs, model};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagonal_energy_is_the_cost(g in graphs(1, 9, 0.4)) {
        let m = model(&g, None);
        for b in 0..1u64 << g.node_count() {
            let x = NodeSet::from_bits(b);
            prop_assert!((m.diagonal_energy(x) - brute_cost(&g, 2.0, x)).abs() < 1e-12);
        }
    }

    #[test]
    fn flip_cost_is_an_energy_difference(g in graphs(1, 9, 0.4), bits in any::<u64>()) {
        let m = model(&g, None);
        let x = NodeSet::from_bits(bits & ((1u64 << g.node_count()) - 1));
        for i in 0..g.node_count() {
            let d = m.diagonal_energy(x.flipped(i)) - m.diagonal_energy(x);
            prop_assert!((m.flip_cost(x, i) - d).abs() < 1e-12);
        }
    }

    #[test]
    fn descent_ends_in_a_maximal_independent_set(g in graphs(1, 9, 0.4)) {
        let m = model(&g, None);
        let map = descent_map(&m);
        for (b, &y) in map.iter().enumerate() {
            prop_assert_eq!(y, gradient_descent(&m, NodeSet::from_bits(b as u64)));
            prop_assert!(m.is_local_minimum(y));
            prop_assert!(g.is_maximal_independent(y).unwrap());
            prop_assert!(m.diagonal_energy(y) <= m.diagonal_energy(NodeSet::from_bits(b as u64)) + 1e-12);
        }
    }

    #[test]
    fn local_minima_are_exactly_the_maximal_sets(g in graphs(1, 9, 0.4)) {
        let m = model(&g, None);
        for b in 0..1u64 << g.node_count() {
            let x = NodeSet::from_bits(b);
            prop_assert_eq!(m.is_local_minimum(x), g.is_maximal_independent(x).unwrap());
        }
    }
}

#[test]
fn path_of_three() {
    let g = Graph::path(3).unwrap();
    let m = model(&g, None);
    assert_eq!(m.diagonal_energy(NodeSet::from_indices(&[0, 2])), -2.0);
    assert_eq!(m.diagonal_energy(NodeSet::from_indices(&[1])), -1.0);
    assert_eq!(m.diagonal_energy(NodeSet::full(3)), 1.0);
}
