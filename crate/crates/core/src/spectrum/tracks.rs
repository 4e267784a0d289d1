use alloc::vec::Vec;

use super::profile::{scan, uniform_grid, ProfileConfig};
use super::solver::SpectralSolver;
use crate::ising::{Schedule, TransverseFieldModel};
use crate::Result;

/// Ground-state `<σz_i>` along `s`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrackData {
    pub s_grid: Vec<f64>,
    /// `z_expect[i][k]` is `<0|σz_i|0>` at `s_grid[k]`.
    pub z_expect: Vec<Vec<f64>>,
    /// The ground state was degenerate at this grid point; the expectation
    /// is taken in whichever ground vector the solver returned.
    pub degenerate: Vec<bool>,
}

/// Largest single-qubit jump between adjacent grid columns.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Discontinuity {
    pub found: bool,
    /// Midpoint of the two columns with the largest jump, when found.
    pub s_jump: Option<f64>,
    pub magnitude: f64,
}

pub fn sigma_z_tracks(model: &TransverseFieldModel, schedule: &Schedule, cfg: &ProfileConfig) -> Result<TrackData> {
    uniform_grid(cfg.grid_size)?;
    let solver = SpectralSolver::new(model, schedule, cfg.solver)?;
    Ok(scan(&solver, cfg, true)?.1.expect("tracks requested"))
}

/// `<σz_i>` for every qubit in a state vector over the bitmask basis.
pub fn z_expectations(n: usize, state: &[f64]) -> Vec<f64> {
    let mut z = alloc::vec![0.0; n];
    for (k, amp) in state.iter().enumerate() {
        let p = amp * amp;
        for (i, zi) in z.iter_mut().enumerate() {
            if k >> i & 1 == 1 {
                *zi += p;
            } else {
                *zi -= p;
            }
        }
    }
    for zi in &mut z {
        *zi = zi.clamp(-1.0, 1.0);
    }
    z
}

pub fn detect_discontinuity(tracks: &TrackData, threshold: f64) -> Discontinuity {
    let mut best = (0.0f64, None);
    for k in 1..tracks.s_grid.len() {
        let jump = tracks
            .z_expect
            .iter()
            .map(|row| crate::math::abs(row[k] - row[k - 1]))
            .fold(0.0, f64::max);
        if jump > best.0 {
            best = (jump, Some(0.5 * (tracks.s_grid[k] + tracks.s_grid[k - 1])));
        }
    }
    let found = best.0 > threshold;
    Discontinuity {
        found,
        s_jump: if found { best.1 } else { None },
        magnitude: best.0,
    }
}
