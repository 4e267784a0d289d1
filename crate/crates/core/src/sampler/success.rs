use super::SampleSet;
use crate::graphs::NodeSet;
use crate::math;
use crate::spectrum::AdiabaticTimeResult;

/// Global-basin probability above which sampling counts as a success.
pub const DEFAULT_P_MIN: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuccessThresholds {
    /// Adiabatic times strictly below this pass; `None` disables the test.
    pub t_a_max: Option<f64>,
    pub p_min: f64,
}

impl Default for SuccessThresholds {
    fn default() -> Self {
        SuccessThresholds {
            t_a_max: None,
            p_min: DEFAULT_P_MIN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ProbabilitySource {
    /// Exact ground-state mass of the global-minimum basin.
    ExactMass,
    /// Fraction of descended samples at the global minimum.
    SampleFraction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub success: bool,
    pub by_time: bool,
    pub by_probability: bool,
    pub t_a: Option<f64>,
    pub p_global: f64,
    pub source: ProbabilitySource,
    /// Descended samples that reached the global minimum.
    pub hits: u64,
    /// `1 - (1 - p_global)^r`.
    pub at_least_once: f64,
}

/// Probability that `r` independent draws with per-draw probability `p`
/// contain at least one hit.
pub fn at_least_once(p: f64, r: u64) -> f64 {
    if p >= 1.0 {
        return 1.0;
    }
    -math::expm1(r as f64 * math::ln1p(-p))
}

/// Applies the two success tests: a short enough adiabatic time, or enough
/// probability in the basin of `global_min`. The exact basin mass is used
/// when the sample set carries it.
pub fn evaluate_success(
    samples: &SampleSet,
    global_min: NodeSet,
    t_a: Option<&AdiabaticTimeResult>,
    th: &SuccessThresholds,
) -> Verdict {
    let hits = samples.descended_count(global_min);
    let (p_global, source) = match samples.exact_mass(global_min) {
        Some(p) => (p, ProbabilitySource::ExactMass),
        None if samples.total > 0 => (hits as f64 / samples.total as f64, ProbabilitySource::SampleFraction),
        None => (0.0, ProbabilitySource::SampleFraction),
    };
    let t = t_a.map(|r| r.t_a);
    let by_time = matches!((t, th.t_a_max), (Some(t), Some(max)) if t < max);
    let by_probability = p_global > th.p_min;
    Verdict {
        success: by_time || by_probability,
        by_time,
        by_probability,
        t_a: t,
        p_global,
        source,
        hits,
        at_least_once: at_least_once(p_global, samples.total),
    }
}
