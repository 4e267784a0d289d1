mod common;

use aqo_core::graphs::Graph;
use aqo_core::ising::Schedule;
use aqo_core::spectrum::{gap_profile, lowest_eigenpairs, z_expectations, Method, ProfileConfig, SolverConfig};
use common::{dense_hamiltonian, graphs, model, sorted_eigenvalues};
use proptest::prelude::*;

fn solver(method: Method) -> SolverConfig {
    SolverConfig {
        method,
        ..SolverConfig::default()
    }
}

fn permuted(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<(usize, usize)> = g.edges().into_iter().map(|(i, j)| (perm[i], perm[j])).collect();
    Graph::from_edges(g.node_count(), &edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn both_solvers_match_an_independent_dense_build(
        g in graphs(2, 8, 0.35),
        s in 0.0f64..=1.0,
        d in proptest::collection::vec(0.25f64..8.0, 8),
    ) {
        let n = g.node_count();
        let delta = &d[..n];
        let m = model(&g, Some(delta));
        let want = sorted_eigenvalues(dense_hamiltonian(&g, delta, 1.0 - s, s));
        let sch = Schedule::linear();
        for method in [Method::Dense, Method::Iterative] {
            let got = lowest_eigenpairs(&m, &sch, s, 3, &solver(method)).unwrap();
            for (k, (g, w)) in got.values.iter().zip(&want).enumerate() {
                prop_assert!((g - w).abs() < 1e-7, "{:?} level {}: {} vs {}", method, k, g, w);
            }
        }
    }

    #[test]
    fn spectrum_is_invariant_under_relabeling(g in graphs(2, 8, 0.35), s in 0.05f64..0.95, rot in 1usize..8) {
        let n = g.node_count();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let sch = Schedule::linear();
        let a = lowest_eigenpairs(&model(&g, None), &sch, s, 3, &solver(Method::Dense)).unwrap();
        let b = lowest_eigenpairs(&model(&permuted(&g, &perm), None), &sch, s, 3, &solver(Method::Dense)).unwrap();
        for k in 0..3 {
            prop_assert!((a.values[k] - b.values[k]).abs() < 1e-9);
        }
        let za = z_expectations(n, &a.vectors[0]);
        let zb = z_expectations(n, &b.vectors[0]);
        if a.gap() > 1e-6 {
            for i in 0..n {
                prop_assert!((za[i] - zb[perm[i]]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn profile_gap_is_the_difference_of_the_two_lowest_levels(g in graphs(2, 7, 0.35)) {
        let cfg = ProfileConfig { grid_size: 11, ..ProfileConfig::default() };
        let p = gap_profile(&model(&g, None), &Schedule::linear(), &cfg).unwrap();
        for k in 0..p.s_grid.len() {
            prop_assert!(p.gap[k] >= 0.0);
            prop_assert!((p.gap[k] - (p.energies[k][1] - p.energies[k][0])).abs() < 1e-12);
        }
        prop_assert!(p.g_min <= p.gap.iter().copied().fold(f64::INFINITY, f64::min) + 1e-9);
    }
}

#[test]
fn single_qubit_closed_form() {
    // Energies 0 and -1 give gap sqrt(4(1-s)^2 + s^2): minimum 2/sqrt(5) at s = 0.8.
    let m = model(&Graph::new(1).unwrap(), None);
    let cfg = ProfileConfig {
        levels: 2,
        ..ProfileConfig::default()
    };
    let p = gap_profile(&m, &Schedule::linear(), &cfg).unwrap();
    assert!((p.g_min - 2.0 / 5f64.sqrt()).abs() < 1e-9);
    assert!((p.s_star - 0.8).abs() < 1e-6);
    for (k, s) in p.s_grid.iter().enumerate() {
        let want = (4.0 * (1.0 - s) * (1.0 - s) + s * s).sqrt();
        assert!((p.gap[k] - want).abs() < 1e-9);
    }
}

#[test]
fn end_points_are_the_uniform_and_classical_states() {
    let g = Graph::path(5).unwrap();
    let m = model(&g, None);
    let sch = Schedule::linear();
    let start = lowest_eigenpairs(&m, &sch, 0.0, 2, &solver(Method::Dense)).unwrap();
    assert!(z_expectations(5, &start.vectors[0]).iter().all(|z| z.abs() < 1e-9));
    let end = lowest_eigenpairs(&m, &sch, 1.0, 2, &solver(Method::Dense)).unwrap();
    let z = z_expectations(5, &end.vectors[0]);
    let want = [1.0, -1.0, 1.0, -1.0, 1.0];
    for i in 0..5 {
        assert!((z[i] - want[i]).abs() < 1e-9);
    }
}
