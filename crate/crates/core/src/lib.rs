//! Desk-scale workbench for adiabatic quantum optimization of the maximum
//! independent set problem.
//!
//! The crate covers the whole pipeline without touching the filesystem:
//!
//! - [`graphs`]: bitmask graphs, the MIS cost function, maximal-set
//!   enumeration and the hard-instance generator.
//! - [`ising`]: the transverse-field Ising model of an instance, annealing
//!   schedules and classical steepest descent.
//! - [`spectrum`]: exact low-lying spectra of `H(s) = A(s) H_B + B(s) H_P`,
//!   gap profiles, the adiabatic time scale and `<σz>` tracks.
//! - [`perturbation`]: second-order degenerate perturbation theory for
//!   clusters of degenerate minima and crossing prediction.
//! - [`sampler`]: ground-state basis sampling (exact and path-integral QMC)
//!   and the success verdict.
//! - [`tuner`]: the iterative transverse-field tuning loop.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub(crate) mod math;

pub mod graphs;
pub mod ising;
pub mod perturbation;
pub mod rng;
pub mod sampler;
pub mod spectrum;
pub mod tuner;

pub use error::{Error, Result};
pub use graphs::{Graph, NodeSet, ProblemInstance};
pub use ising::{Schedule, TransverseFieldModel};
