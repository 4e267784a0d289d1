//! Exact low-energy spectra of `H(s) = A(s) H_B + B(s) H_P`.
//!
//! Small systems are diagonalized densely; larger ones use a matrix-free
//! block Krylov solver on the `2^n` basis. On top of the solver sit the gap
//! profile with golden-section refinement of the anticrossing, the
//! adiabatic time scale and ground-state `<σz>` tracks.

mod krylov;
mod operator;
mod profile;
mod solver;
mod tracks;

pub use operator::Hamiltonian;
pub use profile::{
    adiabatic_formula, adiabatic_time, gap_profile, profile_and_tracks, uniform_grid, AdiabaticTimeResult,
    ProfileConfig, SpectrumProfile, DEFAULT_GRID, DEFAULT_LEVELS, DEFAULT_REFINE_TOL, DEGENERACY_TOL, MIN_GAP,
    SCAN_RESIDUAL_TOL,
};
pub(crate) use profile::{adiabatic_time_with, scan};
pub use solver::{
    lowest_eigenpairs, Eigenpairs, Method, SolverConfig, SpectralSolver, AUTO_DENSE_MAX, DEFAULT_DENSE_CAP,
    DEFAULT_ITERATIVE_CAP,
};
pub use tracks::{detect_discontinuity, sigma_z_tracks, z_expectations, Discontinuity, TrackData};
