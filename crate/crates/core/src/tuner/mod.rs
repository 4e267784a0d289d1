//! Transverse-field tuning.
//!
//! Each iteration builds the model for the current `Δ`, scans the gap,
//! samples just before the anticrossing and checks the two success tests.
//! Failing iterations estimate `μ_i` from the descended samples and move
//! `Δ` by a weighted geometric average toward `μ^-1`, rescaled into the
//! feasible range.

mod mu;
mod update;

use alloc::vec::Vec;

pub use mu::{compute_mu, MuEstimate};
pub use update::{rescale_delta, update_delta, update_delta_unscaled, BetaRule};

use crate::graphs::{NodeSet, ProblemInstance};
use crate::ising::{build_model, Schedule, TransverseFieldModel};
use crate::rng;
use crate::sampler::{
    choose_sample_point, evaluate_success, sample_qmc, sample_state, SampleSet, SamplerConfig, SamplerKind,
    SuccessThresholds, Verdict, DEFAULT_P_MIN, DEFAULT_SAMPLES,
};
use crate::spectrum::{
    adiabatic_time_with, detect_discontinuity, scan, Discontinuity, ProfileConfig, SpectralSolver, TrackData,
};
use crate::{Error, Result};

pub const DEFAULT_DELTA_MIN: f64 = 0.25;
pub const DEFAULT_DELTA_MAX: f64 = 8.0;
pub const DEFAULT_MAX_ITERATIONS: u32 = 15;
/// Anneal time per sample in the hardware units of the reference schedule.
pub const DEFAULT_T_F: f64 = 0.08;
/// Largest single-qubit `<σz>` jump between grid columns that still counts
/// as a smooth track.
pub const DEFAULT_JUMP_THRESHOLD: f64 = 0.5;
/// Adiabatic-time threshold for the desk presets with the linear schedule,
/// in units of inverse energy. Hard instances at iteration zero sit well
/// above it; instances without a small gap sit below.
pub const DESK_T_A_MAX: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TunerConfig {
    /// Samples per iteration; overrides the sampler's own `r`.
    pub r: usize,
    pub beta_rule: BetaRule,
    pub delta_min: f64,
    pub delta_max: f64,
    /// Largest number of `Δ` updates; a run evaluates at most
    /// `max_iterations + 1` settings.
    pub max_iterations: u32,
    /// `None` disables the adiabatic-time test.
    pub t_a_max: Option<f64>,
    pub p_min: f64,
    /// Recorded for reporting only.
    pub t_f: f64,
    pub profile: ProfileConfig,
    /// Keep ground-state `<σz>` tracks for every iteration.
    pub record_tracks: bool,
    pub jump_threshold: f64,
}

impl Default for TunerConfig {
    fn default() -> Self {
        TunerConfig {
            r: DEFAULT_SAMPLES,
            beta_rule: BetaRule::Harmonic,
            delta_min: DEFAULT_DELTA_MIN,
            delta_max: DEFAULT_DELTA_MAX,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            t_a_max: None,
            p_min: DEFAULT_P_MIN,
            t_f: DEFAULT_T_F,
            profile: ProfileConfig::default(),
            record_tracks: false,
            jump_threshold: DEFAULT_JUMP_THRESHOLD,
        }
    }
}

impl TunerConfig {
    /// Defaults with the adiabatic-time threshold calibrated for desk-scale
    /// instances.
    pub fn desk() -> Self {
        TunerConfig {
            t_a_max: Some(DESK_T_A_MAX),
            ..TunerConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta_min > 0.0 && self.delta_min < self.delta_max && self.delta_max.is_finite()) {
            return Err(Error::input(alloc::format!(
                "feasible range needs 0 < delta_min < delta_max, got [{}, {}]",
                self.delta_min,
                self.delta_max
            )));
        }
        if let BetaRule::Fixed(b) = self.beta_rule {
            if !(b > 0.0 && b <= 1.0) {
                return Err(Error::input(alloc::format!("fixed beta must lie in (0, 1], got {b}")));
            }
        }
        if !(self.p_min > 0.0 && self.p_min < 1.0) {
            return Err(Error::input(alloc::format!(
                "p_min must lie in (0, 1), got {}",
                self.p_min
            )));
        }
        if self.r == 0 {
            return Err(Error::input("sample count r must be at least 1"));
        }
        Ok(())
    }

    pub fn thresholds(&self) -> SuccessThresholds {
        SuccessThresholds {
            t_a_max: self.t_a_max,
            p_min: self.p_min,
        }
    }
}

/// Spectral quantities of one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumSummary {
    pub s_star: f64,
    pub g_min: f64,
    pub t_a: f64,
    pub matrix_element: f64,
    pub sample_point: f64,
    /// The gap-ratio rule found no point and the fixed fallback was used.
    pub sample_point_fallback: bool,
    pub degenerate_at_end: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IterationRecord {
    /// 1 for the initial `Δ = 1` evaluation.
    pub kappa: u32,
    pub delta_before: Vec<f64>,
    pub spectrum: SpectrumSummary,
    pub samples: SampleSet,
    pub verdict: Verdict,
    /// Absent on the solving iteration and on the last allowed one.
    pub mu: Option<MuEstimate>,
    pub delta_after: Option<Vec<f64>>,
    pub discontinuity: Option<Discontinuity>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub tracks: Option<TrackData>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TunerRun {
    pub global_min: NodeSet,
    pub iterations: Vec<IterationRecord>,
    /// `kappa` of the first successful iteration.
    pub solved_at: Option<u32>,
    /// The observer asked to stop before the run finished.
    pub interrupted: bool,
}

impl TunerRun {
    /// `Δ` updates applied before the solving iteration.
    pub fn updates_to_solve(&self) -> Option<u32> {
        self.solved_at.map(|k| k - 1)
    }
}

/// The planted MIS when known, otherwise the lowest-energy basis state of
/// `H_P` (lowest bitmask on ties) found by exhaustive search.
pub fn global_minimum(inst: &ProblemInstance, model: &TransverseFieldModel, cap: usize) -> Result<NodeSet> {
    if let Some(x) = inst.known_mis {
        return Ok(x);
    }
    let n = model.n();
    if n > cap {
        return Err(Error::Size {
            what: "qubit count",
            actual: n,
            cap,
            knob: "iterative_cap",
        });
    }
    let mut best = (f64::INFINITY, NodeSet::EMPTY);
    for b in 0..1u64 << n {
        let e = model.diagonal_energy(NodeSet::from_bits(b));
        if e < best.0 {
            best = (e, NodeSet::from_bits(b));
        }
    }
    Ok(best.1)
}

pub fn run(inst: &ProblemInstance, sch: &Schedule, cfg: &TunerConfig, sampler: &SamplerConfig) -> Result<TunerRun> {
    run_observed(inst, sch, cfg, sampler, &mut |_| true)
}

/// [`run`] that reports each finished iteration to `observe`; returning
/// `false` stops the run after that iteration.
pub fn run_observed(
    inst: &ProblemInstance,
    sch: &Schedule,
    cfg: &TunerConfig,
    sampler: &SamplerConfig,
    observe: &mut dyn FnMut(&IterationRecord) -> bool,
) -> Result<TunerRun> {
    cfg.validate()?;
    let sampler = SamplerConfig { r: cfg.r, ..*sampler };
    sampler.validate()?;
    let n = inst.graph.node_count();
    let mut delta = alloc::vec![1.0; n];
    let mut out = TunerRun {
        global_min: NodeSet::EMPTY,
        iterations: Vec::new(),
        solved_at: None,
        interrupted: false,
    };
    for kappa in 1..=cfg.max_iterations + 1 {
        let model = build_model(inst, Some(&delta))?;
        if kappa == 1 {
            out.global_min = global_minimum(inst, &model, cfg.profile.solver.iterative_cap)?;
        }
        let mut rec = evaluate(&model, sch, cfg, &sampler, kappa, out.global_min)?;
        rec.delta_before = delta.clone();
        let solved = rec.verdict.success;
        if !solved && kappa <= cfg.max_iterations {
            let est = compute_mu(&model, &rec.samples, out.global_min)?;
            let next = update_delta(&delta, &est.mu, kappa, cfg)?;
            rec.mu = Some(est);
            rec.delta_after = Some(next.clone());
            delta = next;
        }
        let keep_going = observe(&rec);
        out.iterations.push(rec);
        if solved {
            out.solved_at = Some(kappa);
            break;
        }
        if !keep_going {
            out.interrupted = true;
            break;
        }
    }
    Ok(out)
}

fn evaluate(
    model: &TransverseFieldModel,
    sch: &Schedule,
    cfg: &TunerConfig,
    sampler: &SamplerConfig,
    kappa: u32,
    global_min: NodeSet,
) -> Result<IterationRecord> {
    let solver = SpectralSolver::new(model, sch, cfg.profile.solver)?;
    let (profile, tracks) = scan(&solver, &cfg.profile, cfg.record_tracks)?;
    let ta = adiabatic_time_with(&solver, profile.s_star)?;
    let point = choose_sample_point(&profile, &sampler.point_rule)?;
    let iter_sampler = SamplerConfig {
        seed: rng::derive_seed(sampler.seed, kappa as u64),
        ..*sampler
    };
    let samples = match sampler.kind {
        SamplerKind::Exact => {
            let ground = solver.at(point.s, 1)?;
            sample_state(model, point.s, &ground.vectors[0], &iter_sampler)?
        }
        SamplerKind::Qmc => sample_qmc(model, sch, point.s, &iter_sampler)?,
    };
    let verdict = evaluate_success(&samples, global_min, Some(&ta), &cfg.thresholds());
    Ok(IterationRecord {
        kappa,
        delta_before: Vec::new(),
        spectrum: SpectrumSummary {
            s_star: profile.s_star,
            g_min: profile.g_min,
            t_a: ta.t_a,
            matrix_element: ta.matrix_element,
            sample_point: point.s,
            sample_point_fallback: point.fallback,
            degenerate_at_end: profile.degenerate_at_end,
        },
        samples,
        verdict,
        mu: None,
        delta_after: None,
        discontinuity: tracks.as_ref().map(|t| detect_discontinuity(t, cfg.jump_threshold)),
        tracks,
    })
}

/// Instances still unsolved after `t` updates, for `t = 0..=max_updates`.
/// `solved_at` holds each run's solving `kappa`.
pub fn unsolved_counts(solved_at: &[Option<u32>], max_updates: u32) -> Vec<usize> {
    (0..=max_updates)
        .map(|t| solved_at.iter().filter(|s| s.is_none_or(|k| k - 1 > t)).count())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;

    #[test]
    fn histogram_counts() {
        let runs = [Some(1), Some(3), None, Some(2)];
        assert_eq!(unsolved_counts(&runs, 3), alloc::vec![3, 2, 1, 1]);
    }

    #[test]
    fn open_gap_solves_immediately() {
        // a single edge: no small gap, the MIS basin dominates early
        let inst = ProblemInstance::new(Graph::from_edges(3, &[(0, 1)]).unwrap(), 2.0).unwrap();
        let run = run(
            &inst,
            &Schedule::linear(),
            &TunerConfig::desk(),
            &SamplerConfig::default(),
        )
        .unwrap();
        assert_eq!(run.solved_at, Some(1));
        assert_eq!(run.iterations.len(), 1);
        assert!(run.iterations[0].delta_after.is_none());
    }

    #[test]
    fn rejects_bad_ranges() {
        let cfg = TunerConfig {
            delta_min: 2.0,
            delta_max: 1.0,
            ..TunerConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = TunerConfig {
            beta_rule: BetaRule::Fixed(1.5),
            ..TunerConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
