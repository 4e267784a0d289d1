#![allow(dead_code)]

use aqo_core::graphs::{Graph, NodeSet, ProblemInstance};
use aqo_core::ising::TransverseFieldModel;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

/// Graphs with `lo..=hi` nodes and each edge present with probability ~`density`.
pub fn graphs(lo: usize, hi: usize, density: f64) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(move |n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(proptest::bool::weighted(density), pairs).prop_map(move |bits| {
            let mut g = Graph::new(n).unwrap();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        g.add_edge(i, j).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

/// `-|x| + c * (edges inside x)`, straight from the definition.
pub fn brute_cost(g: &Graph, c: f64, x: NodeSet) -> f64 {
    let mut inside = 0;
    for (i, j) in g.edges() {
        if x.contains(i) && x.contains(j) {
            inside += 1;
        }
    }
    -(x.len() as f64) + c * inside as f64
}

pub fn model(g: &Graph, delta: Option<&[f64]>) -> TransverseFieldModel {
    TransverseFieldModel::from_instance(&ProblemInstance::new(g.clone(), 2.0).unwrap(), delta).unwrap()
}

/// `a * (-Σ Δ_i σx_i) + b * diag(cost)` built entry by entry.
pub fn dense_hamiltonian(g: &Graph, delta: &[f64], a: f64, b: f64) -> DMatrix<f64> {
    let n = g.node_count();
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        h[(x, x)] = b * brute_cost(g, 2.0, NodeSet::from_bits(x as u64));
        for (i, d) in delta.iter().enumerate() {
            h[(x, x ^ (1 << i))] -= a * d;
        }
    }
    h
}

pub fn sorted_eigenvalues(h: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}
