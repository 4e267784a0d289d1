mod common;

use aqo_core::graphs::{enumerate_maximal_sets, generate_hard_instance, GeneratorParams, Graph, NodeSet};
use aqo_core::ising::TransverseFieldModel;
use aqo_core::perturbation::{
    cluster_state, curvature_at, effective_matrix, find_clusters, first_order_correction, Cluster,
};
use common::{brute_cost, dense_hamiltonian, graphs, model, sorted_eigenvalues};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn clusters(g: &Graph, m: &TransverseFieldModel) -> Vec<Cluster> {
    let minima = enumerate_maximal_sets(g, 0, 64).unwrap();
    find_clusters(m, &minima)
}

/// `P V Q (E0 - H0)^-1 Q V P` on the cluster span, with `V = -Σ Δ_i σx_i`
/// and `Q` every basis state off the cluster energy.
fn projector_matrix(g: &Graph, delta: &[f64], cluster: &Cluster) -> DMatrix<f64> {
    let n = g.node_count();
    let e0 = cluster.energy;
    let k = cluster.members.len();
    let mut a = DMatrix::zeros(k, k);
    for (r, x) in cluster.members.iter().enumerate() {
        for (c, y) in cluster.members.iter().enumerate() {
            let mut sum = 0.0;
            for mb in 0..1u64 << n {
                let mid = NodeSet::from_bits(mb);
                let em = brute_cost(g, 2.0, mid);
                if (em - e0).abs() < 1e-9 {
                    continue;
                }
                let vx = if x.hamming(mid) == 1 {
                    -delta[(x.bits() ^ mb).trailing_zeros() as usize]
                } else {
                    0.0
                };
                let vy = if y.hamming(mid) == 1 {
                    -delta[(y.bits() ^ mb).trailing_zeros() as usize]
                } else {
                    0.0
                };
                sum += vy * vx / (e0 - em);
            }
            a[(c, r)] = sum;
        }
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn effective_matrix_matches_the_projector_formula(
        g in graphs(2, 9, 0.35),
        d in proptest::collection::vec(0.25f64..8.0, 9),
    ) {
        let delta = &d[..g.node_count()];
        let m = model(&g, Some(delta));
        for c in clusters(&g, &m) {
            let got = effective_matrix(&m, &c).unwrap();
            let want = projector_matrix(&g, delta, &c);
            prop_assert!((got - want).amax() < 1e-12);
        }
    }

    #[test]
    fn curvature_identity_and_vanishing_first_order(
        g in graphs(2, 10, 0.35),
        d in proptest::collection::vec(0.25f64..8.0, 10),
    ) {
        let delta = &d[..g.node_count()];
        let m = model(&g, Some(delta));
        for c in clusters(&g, &m) {
            let st = cluster_state(&m, &c).unwrap();
            let path_sum = curvature_at(&m, &st.members, &st.coefficients).unwrap();
            prop_assert!((path_sum - st.e2).abs() < 1e-10);
            prop_assert_eq!(first_order_correction(&m, &st).unwrap(), 0.0);
        }
    }

    #[test]
    fn ground_state_curvature_matches_exact_diagonalization(
        g in graphs(2, 9, 0.35),
        d in proptest::collection::vec(0.25f64..4.0, 9),
    ) {
        let n = g.node_count();
        let delta = &d[..n];
        let m = model(&g, Some(delta));
        let cl = clusters(&g, &m);
        let e0 = cl[0].energy;
        let ground: Vec<NodeSet> = cl.iter().filter(|c| (c.energy - e0).abs() < 1e-9).flat_map(|c| c.members.clone()).collect();
        let st = cluster_state(&m, &aqo_core::perturbation::cluster_from_members(&m, ground)).unwrap();
        // H_P + λ H_B, scaled: a = λ, b = 1.
        let lam = 1e-2;
        let exact = sorted_eigenvalues(dense_hamiltonian(&g, delta, lam, 1.0))[0];
        let fit = (exact - e0) / (lam * lam);
        prop_assert!((fit - st.e2).abs() <= 0.05 * st.e2.abs(), "fit {} vs E2 {}", fit, st.e2);
    }
}

#[test]
fn hard_instance_clusters_obey_the_identity() {
    let inst = generate_hard_instance(
        GeneratorParams {
            n: 10,
            e_initial: 10,
            m: 4,
        },
        3,
    )
    .unwrap();
    let m = aqo_core::ising::build_model(&inst, None).unwrap();
    let cl = clusters(&inst.graph, &m);
    assert!(cl.iter().any(|c| c.members.len() >= 2));
    for c in cl {
        let st = cluster_state(&m, &c).unwrap();
        let a = effective_matrix(&m, &c).unwrap();
        let min = sorted_eigenvalues(a)[0];
        assert!((st.e2 - min).abs() < 1e-10);
    }
}
