use alloc::string::String;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::clusters::{two_flip_paths, Cluster};
use crate::graphs::NodeSet;
use crate::ising::TransverseFieldModel;
use crate::math;
use crate::{Error, Result};

/// Tolerance for the check that the curvature recomputed from the path sum
/// equals the effective-matrix eigenvalue.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Predictions above this `λ*` are flagged as outside the perturbative
/// regime.
pub const PERTURBATIVE_LIMIT: f64 = 1.0;

/// Diagnostic flags on a cluster analysis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClusterFlags {
    /// The lowest eigenvalue of the effective matrix is degenerate; the
    /// coefficients are the normalized projection of the uniform vector.
    pub degenerate_eigenspace: bool,
    /// Some coefficient is not strictly positive.
    pub mixed_signs: bool,
}

/// Lowest second-order state `|M> = Σ C_k |M_k>` of a degenerate cluster.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClusterState {
    pub members: Vec<NodeSet>,
    /// Unperturbed energy `E^(0)` shared by all members.
    pub e0: f64,
    pub coefficients: Vec<f64>,
    /// Second-order curvature `E^(2)` in `E(λ) ≈ E^(0) + λ² E^(2)`.
    pub e2: f64,
    pub adjacency: Vec<(usize, usize)>,
    pub flags: ClusterFlags,
}

/// Second-order comparison of the global-minimum state with a local one.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CrossingPrediction {
    pub lambda_star: Option<f64>,
    pub cluster_global: ClusterState,
    pub cluster_local: ClusterState,
    /// `E'^(2) < E^(2)`: the local state bends down faster.
    pub condition_met: bool,
    /// `λ* > PERTURBATIVE_LIMIT`.
    pub outside_perturbative_regime: bool,
}

fn flip_denominator(m: &TransverseFieldModel, x: NodeSet, i: usize) -> Result<f64> {
    let b = m.flip_cost(x, i);
    if b <= 0.0 {
        return Err(Error::invariant(alloc::format!(
            "flip cost {b} of qubit {i} out of {x:?} is not positive; not a local minimum"
        )));
    }
    Ok(b)
}

/// `A_kk' = -Σ_(i,j) Δ_i Δ_j / B_(k,i)` over the two-flip paths from `M_k`
/// to `M_k'`; the second-order effective Hamiltonian in units of `λ²`.
pub fn effective_matrix(m: &TransverseFieldModel, cluster: &Cluster) -> Result<DMatrix<f64>> {
    let k = cluster.members.len();
    let mut a = DMatrix::zeros(k, k);
    for (r, &x) in cluster.members.iter().enumerate() {
        a[(r, r)] = path_sum(m, x, x)?;
    }
    for &(r, c) in &cluster.adjacency {
        let (x, y) = (cluster.members[r], cluster.members[c]);
        a[(r, c)] = path_sum(m, x, y)?;
        a[(c, r)] = path_sum(m, y, x)?;
    }
    Ok(a)
}

fn path_sum(m: &TransverseFieldModel, x: NodeSet, y: NodeSet) -> Result<f64> {
    let d = m.delta();
    let mut total = 0.0;
    for (i, j) in two_flip_paths(m, x, y) {
        total -= d[i] * d[j] / flip_denominator(m, x, i)?;
    }
    Ok(total)
}

/// `E^(2) = -Σ_k Σ_k' C_k C_k' Σ_paths Δ_i Δ_j / B_(k,i)`, summed directly
/// over member pairs.
pub fn curvature_at(m: &TransverseFieldModel, members: &[NodeSet], coefficients: &[f64]) -> Result<f64> {
    let mut e2 = 0.0;
    for (x, cx) in members.iter().zip(coefficients) {
        for (y, cy) in members.iter().zip(coefficients) {
            if x.hamming(*y) <= 2 {
                e2 += cx * cy * path_sum(m, *x, *y)?;
            }
        }
    }
    Ok(e2)
}

pub fn cluster_state(m: &TransverseFieldModel, cluster: &Cluster) -> Result<ClusterState> {
    let k = cluster.members.len();
    if k == 0 {
        return Err(Error::input("empty cluster"));
    }
    let a = effective_matrix(m, cluster)?;
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let lowest = eig.eigenvalues[order[0]];
    let scale = a.amax().max(1.0);
    let space: Vec<usize> = order
        .iter()
        .copied()
        .take_while(|&c| eig.eigenvalues[c] - lowest <= 1e-9 * scale)
        .collect();

    let mut flags = ClusterFlags::default();
    let mut c: DVector<f64> = if space.len() == 1 {
        eig.eigenvectors.column(space[0]).into_owned()
    } else {
        flags.degenerate_eigenspace = true;
        let uniform = DVector::from_element(k, 1.0 / math::sqrt(k as f64));
        let mut p = DVector::zeros(k);
        for &col in &space {
            let v = eig.eigenvectors.column(col);
            p += v * v.dot(&uniform);
        }
        if p.norm() < 1e-12 {
            eig.eigenvectors.column(space[0]).into_owned()
        } else {
            p
        }
    };
    c /= c.norm();
    if c.sum() < 0.0 {
        c = -c;
    }
    flags.mixed_signs = c.iter().any(|v| !(*v > 0.0));
    let coefficients: Vec<f64> = c.iter().copied().collect();
    let e2 = (c.transpose() * &a * &c)[(0, 0)];
    let check = curvature_at(m, &cluster.members, &coefficients)?;
    if math::abs(check - lowest) > IDENTITY_TOL * scale || math::abs(e2 - lowest) > IDENTITY_TOL * scale {
        return Err(Error::invariant(alloc::format!(
            "curvature identity failed: eigenvalue {lowest}, path sum {check}"
        )));
    }
    Ok(ClusterState {
        members: cluster.members.clone(),
        e0: cluster.energy,
        coefficients,
        e2: lowest,
        adjacency: cluster.adjacency.clone(),
        flags,
    })
}

/// `<M|H_B|M>` for the cluster state. Zero for equal-size members, since no
/// two of them differ by a single flip; mixed sizes are rejected.
pub fn first_order_correction(m: &TransverseFieldModel, state: &ClusterState) -> Result<f64> {
    if let Some(first) = state.members.first() {
        if state.members.iter().any(|x| x.len() != first.len()) {
            return Err(Error::input(String::from(
                "cluster members differ in size; first-order term does not vanish",
            )));
        }
    }
    let d = m.delta();
    let mut e1 = 0.0;
    for (x, cx) in state.members.iter().zip(&state.coefficients) {
        for (y, cy) in state.members.iter().zip(&state.coefficients) {
            if x.hamming(*y) == 1 {
                let i = (x.bits() ^ y.bits()).trailing_zeros() as usize;
                e1 -= cx * cy * d[i];
            }
        }
    }
    Ok(e1)
}

/// `λ* = sqrt(-(E'^(0) - E^(0)) / (E'^(2) - E^(2)))` when the local state
/// curves down faster than the global one.
pub fn predict_crossing(global: &ClusterState, local: &ClusterState) -> Result<CrossingPrediction> {
    if !(global.e0 < local.e0) {
        return Err(Error::input(alloc::format!(
            "global energy {} is not below local energy {}",
            global.e0,
            local.e0
        )));
    }
    let condition_met = local.e2 < global.e2;
    let lambda_star = condition_met.then(|| math::sqrt(-(local.e0 - global.e0) / (local.e2 - global.e2)));
    Ok(CrossingPrediction {
        lambda_star,
        cluster_global: global.clone(),
        cluster_local: local.clone(),
        condition_met,
        outside_perturbative_regime: lambda_star.is_some_and(|l| l > PERTURBATIVE_LIMIT),
    })
}

/// The crossing met first during an anneal (largest `λ*`) among `locals`.
pub fn earliest_crossing(global: &ClusterState, locals: &[ClusterState]) -> Result<Option<CrossingPrediction>> {
    let mut best: Option<CrossingPrediction> = None;
    for local in locals {
        let p = predict_crossing(global, local)?;
        if p.lambda_star > best.as_ref().and_then(|b| b.lambda_star) {
            best = Some(p);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{Graph, ProblemInstance};
    use crate::perturbation::cluster_from_members;

    fn model(g: Graph, delta: Option<&[f64]>) -> TransverseFieldModel {
        TransverseFieldModel::from_instance(&ProblemInstance::new(g, 2.0).unwrap(), delta).unwrap()
    }

    fn state(e0: f64, e2: f64) -> ClusterState {
        ClusterState {
            members: alloc::vec![NodeSet::EMPTY],
            e0,
            coefficients: alloc::vec![1.0],
            e2,
            adjacency: Vec::new(),
            flags: ClusterFlags::default(),
        }
    }

    #[test]
    fn singleton_curvature() {
        let m = model(Graph::path(3).unwrap(), Some(&[1.0, 0.5, 2.0]));
        let x = NodeSet::from_indices(&[0, 2]);
        let cl = cluster_from_members(&m, alloc::vec![x]);
        let s = cluster_state(&m, &cl).unwrap();
        let expect: f64 = -(0..3).map(|i| m.delta()[i].powi(2) / m.flip_cost(x, i)).sum::<f64>();
        assert_eq!(s.coefficients, [1.0]);
        assert!((s.e2 - expect).abs() < 1e-14);
        assert_eq!(first_order_correction(&m, &s).unwrap(), 0.0);
    }

    #[test]
    fn symmetric_pair() {
        // {1,2,3} and {1,2,4}: swapping 3 and 4 is a graph symmetry
        let m = model(Graph::from_edges(5, &[(0, 1), (0, 2), (3, 4)]).unwrap(), None);
        let cl = cluster_from_members(
            &m,
            alloc::vec![NodeSet::from_indices(&[1, 2, 3]), NodeSet::from_indices(&[1, 2, 4])],
        );
        let a = effective_matrix(&m, &cl).unwrap();
        assert_eq!(a[(0, 0)], a[(1, 1)]);
        assert_eq!(a[(0, 1)], a[(1, 0)]);
        let s = cluster_state(&m, &cl).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((s.coefficients[0] - h).abs() < 1e-12 && (s.coefficients[1] - h).abs() < 1e-12);
        assert!(s.e2 < a[(0, 0)]);
        assert_eq!(first_order_correction(&m, &s).unwrap(), 0.0);
    }

    #[test]
    fn mixed_sizes_rejected() {
        let m = model(Graph::path(3).unwrap(), None);
        let s = ClusterState {
            members: alloc::vec![NodeSet::from_indices(&[1]), NodeSet::from_indices(&[0, 1])],
            coefficients: alloc::vec![0.6, 0.8],
            ..state(-1.0, -1.0)
        };
        assert!(matches!(first_order_correction(&m, &s), Err(Error::Input(_))));
    }

    #[test]
    fn crossing_formula() {
        let p = predict_crossing(&state(-2.0, -1.0), &state(-1.0, -3.0)).unwrap();
        assert!(p.condition_met);
        assert!((p.lambda_star.unwrap() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(!p.outside_perturbative_regime);
        let q = predict_crossing(&state(-2.0, -3.0), &state(-1.0, -1.0)).unwrap();
        assert!(!q.condition_met && q.lambda_star.is_none());
        assert!(predict_crossing(&state(-1.0, -3.0), &state(-2.0, -1.0)).is_err());
        let far = predict_crossing(&state(-2.0, -1.0), &state(-1.0, -1.5)).unwrap();
        assert!(far.outside_perturbative_regime);
    }

    #[test]
    fn non_minimum_member_is_an_invariant_error() {
        let m = model(Graph::path(3).unwrap(), None);
        let cl = cluster_from_members(&m, alloc::vec![NodeSet::from_indices(&[0])]);
        assert!(matches!(cluster_state(&m, &cl), Err(Error::Invariant(_))));
    }
}
