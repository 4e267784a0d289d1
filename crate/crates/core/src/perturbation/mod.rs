//! Second-order degenerate perturbation theory for `H_P + λ H_B` around
//! clusters of degenerate local minima.
//!
//! At `λ = 0` every maximal independent set is an eigenstate of `H_P`.
//! Equal-energy minima that are two flips apart mix at second order; the
//! lowest state of each cluster follows the minimum eigenvector of the
//! effective matrix. Comparing the curvatures of the global-minimum state
//! and a local-minimum cluster predicts where their levels cross.

mod analysis;
mod clusters;

pub use analysis::{
    cluster_state, curvature_at, earliest_crossing, effective_matrix, first_order_correction, predict_crossing,
    ClusterFlags, ClusterState, CrossingPrediction, IDENTITY_TOL, PERTURBATIVE_LIMIT,
};
pub use clusters::{cluster_from_members, find_clusters, two_flip_components, two_flip_paths, Cluster, ENERGY_TOL};
