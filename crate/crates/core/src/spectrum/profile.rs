use alloc::vec::Vec;

use super::solver::{Eigenpairs, SolverConfig, SpectralSolver};
use super::tracks::{z_expectations, TrackData};
use crate::ising::{Schedule, TransverseFieldModel};
use crate::math;
use crate::{Error, Result};

pub const DEFAULT_GRID: usize = 101;
pub const DEFAULT_LEVELS: usize = 2;
/// Relative residual tolerance used for grid scans. Eigenvalue errors
/// scale with its square, so gaps are still accurate to about `1e-9`.
pub const SCAN_RESIDUAL_TOL: f64 = 1e-6;
/// Golden-section refinement stops once the bracket is narrower than this.
pub const DEFAULT_REFINE_TOL: f64 = 1e-5;
/// Gaps below this count as exact degeneracies.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Below this gap the adiabatic time is reported as infinite.
pub const MIN_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileConfig {
    pub grid_size: usize,
    pub levels: usize,
    pub refine_tol: f64,
    pub solver: SolverConfig,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            grid_size: DEFAULT_GRID,
            levels: DEFAULT_LEVELS,
            refine_tol: DEFAULT_REFINE_TOL,
            solver: SolverConfig {
                residual_tol: SCAN_RESIDUAL_TOL,
                ..SolverConfig::default()
            },
        }
    }
}

/// Low-lying spectrum of `H(s)` on a uniform grid, with the minimum gap
/// refined off-grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumProfile {
    pub s_grid: Vec<f64>,
    /// `energies[k]` holds the lowest levels at `s_grid[k]`.
    pub energies: Vec<Vec<f64>>,
    pub gap: Vec<f64>,
    pub s_star: f64,
    pub g_min: f64,
    /// The classical ground state at `s = 1` is degenerate.
    pub degenerate_at_end: bool,
}

impl SpectrumProfile {
    /// Grid index with the smallest gap (first on ties).
    pub fn grid_argmin(&self) -> usize {
        let mut best = 0;
        for (k, g) in self.gap.iter().enumerate() {
            if *g < self.gap[best] {
                best = k;
            }
        }
        best
    }
}

/// `t_a = (4/π) |<0|dH/ds|1>| / g_min²` evaluated at `s*`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdiabaticTimeResult {
    /// Infinite when the gap at `s*` is below [`MIN_GAP`].
    pub t_a: f64,
    pub matrix_element: f64,
    pub g_min: f64,
    pub s_star: f64,
}

pub fn uniform_grid(size: usize) -> Result<Vec<f64>> {
    match size {
        0 => Err(Error::input("grid size must be positive")),
        1 => Ok(alloc::vec![0.0]),
        _ => Ok((0..size).map(|k| k as f64 / (size - 1) as f64).collect()),
    }
}

pub fn gap_profile(model: &TransverseFieldModel, schedule: &Schedule, cfg: &ProfileConfig) -> Result<SpectrumProfile> {
    let solver = SpectralSolver::new(model, schedule, cfg.solver)?;
    Ok(scan(&solver, cfg, false)?.0)
}

/// Gap profile and ground-state `<σz>` tracks from one sweep over the grid.
pub fn profile_and_tracks(
    model: &TransverseFieldModel,
    schedule: &Schedule,
    cfg: &ProfileConfig,
) -> Result<(SpectrumProfile, TrackData)> {
    let solver = SpectralSolver::new(model, schedule, cfg.solver)?;
    let (p, t) = scan(&solver, cfg, true)?;
    Ok((p, t.expect("tracks requested")))
}

pub(crate) fn scan(
    solver: &SpectralSolver<'_>,
    cfg: &ProfileConfig,
    with_tracks: bool,
) -> Result<(SpectrumProfile, Option<TrackData>)> {
    let s_grid = uniform_grid(cfg.grid_size)?;
    let levels = cfg.levels.max(2);
    let n = solver.n();
    let mut energies = Vec::with_capacity(s_grid.len());
    let mut gap = Vec::with_capacity(s_grid.len());
    let mut z_expect = alloc::vec![Vec::with_capacity(s_grid.len()); if with_tracks { n } else { 0 }];
    let mut degenerate = Vec::new();
    let mut previous: Vec<Vec<f64>> = Vec::new();
    for &s in &s_grid {
        let pairs = solver.at_with_start(s, levels, &previous)?;
        gap.push(pairs.gap());
        if with_tracks {
            for (row, z) in z_expect.iter_mut().zip(z_expectations(n, &pairs.vectors[0])) {
                row.push(z);
            }
            degenerate.push(pairs.gap() < DEGENERACY_TOL);
        }
        energies.push(pairs.values[..levels.min(pairs.values.len())].to_vec());
        previous = pairs.vectors;
    }
    let degenerate_at_end = *gap.last().unwrap_or(&0.0) < DEGENERACY_TOL && s_grid.last() == Some(&1.0);
    let mut profile = SpectrumProfile {
        s_grid: s_grid.clone(),
        energies,
        gap,
        s_star: 0.0,
        g_min: 0.0,
        degenerate_at_end,
    };
    let (s_star, g_min) = refine_minimum(solver, &profile, cfg.refine_tol)?;
    profile.s_star = s_star;
    profile.g_min = g_min;
    let tracks = with_tracks.then_some(TrackData {
        s_grid,
        z_expect,
        degenerate,
    });
    Ok((profile, tracks))
}

/// Golden-section search for the gap minimum between the grid neighbours
/// of the best grid point. Returns the best point seen, grid included.
fn refine_minimum(solver: &SpectralSolver<'_>, p: &SpectrumProfile, tol: f64) -> Result<(f64, f64)> {
    let k = p.grid_argmin();
    let mut best = (p.s_grid[k], p.gap[k]);
    if p.s_grid.len() < 3 {
        return Ok(best);
    }
    let mut lo = p.s_grid[k.saturating_sub(1)];
    let mut hi = p.s_grid[(k + 1).min(p.s_grid.len() - 1)];
    let gap_at = |s: f64, start: &[Vec<f64>]| -> Result<Eigenpairs> { solver.at_with_start(s, 2, start) };
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let p1 = gap_at(x1, &[])?;
    let mut g1 = p1.gap();
    let p2 = gap_at(x2, &p1.vectors)?;
    let mut g2 = p2.gap();
    let mut warm = p2.vectors;
    for (s, g) in [(x1, g1), (x2, g2)] {
        if g < best.1 {
            best = (s, g);
        }
    }
    while hi - lo > tol {
        if g1 <= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INV_PHI * (hi - lo);
            let e = gap_at(x1, &warm)?;
            g1 = e.gap();
            warm = e.vectors;
            if g1 < best.1 {
                best = (x1, g1);
            }
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INV_PHI * (hi - lo);
            let e = gap_at(x2, &warm)?;
            g2 = e.gap();
            warm = e.vectors;
            if g2 < best.1 {
                best = (x2, g2);
            }
        }
    }
    Ok(best)
}

pub fn adiabatic_time(
    model: &TransverseFieldModel,
    schedule: &Schedule,
    profile: &SpectrumProfile,
    solver: &SolverConfig,
) -> Result<AdiabaticTimeResult> {
    let solver = SpectralSolver::new(model, schedule, *solver)?;
    adiabatic_time_with(&solver, profile.s_star)
}

pub(crate) fn adiabatic_time_with(solver: &SpectralSolver<'_>, s_star: f64) -> Result<AdiabaticTimeResult> {
    let pairs = solver.at(s_star, 2)?;
    let g = pairs.gap();
    let v = solver.schedule().values(s_star)?;
    let mut dh = alloc::vec![0.0; pairs.vectors[1].len()];
    solver.hamiltonian().apply(v.da, v.db, &pairs.vectors[1], &mut dh);
    let w = math::abs(math::dot(&pairs.vectors[0], &dh));
    Ok(AdiabaticTimeResult {
        t_a: adiabatic_formula(w, g),
        matrix_element: w,
        g_min: g,
        s_star,
    })
}

/// `(4/π) w / g²`, infinite for `g < MIN_GAP` unless `w = 0`.
pub fn adiabatic_formula(matrix_element: f64, gap: f64) -> f64 {
    if matrix_element == 0.0 {
        0.0
    } else if gap < MIN_GAP {
        f64::INFINITY
    } else {
        4.0 / core::f64::consts::PI * matrix_element / (gap * gap)
    }
}
