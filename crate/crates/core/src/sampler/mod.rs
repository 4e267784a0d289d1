//! Computational-basis samples of the ground state just before the
//! anticrossing, standing in for fast non-adiabatic anneals.
//!
//! Two samplers produce the same [`SampleSet`]: an exact one that draws from
//! `|ψ_0(s)|²` and a discrete-time path-integral Monte Carlo sampler that
//! needs no state vector. Both report a raw view and a view after steepest
//! descent to local minima; the success verdict is computed from the latter.

mod exact;
mod point;
mod qmc;
mod success;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

pub use exact::{sample_exact, sample_state};
pub use point::{choose_sample_point, SamplePoint, SamplePointRule};
pub use qmc::{sample_qmc, QmcConfig};
pub use success::{at_least_once, evaluate_success, ProbabilitySource, SuccessThresholds, Verdict, DEFAULT_P_MIN};

use crate::graphs::NodeSet;

pub const DEFAULT_SAMPLES: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SamplerKind {
    Exact,
    Qmc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    /// Number of samples `r`.
    pub r: usize,
    pub point_rule: SamplePointRule,
    pub qmc: QmcConfig,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            kind: SamplerKind::Exact,
            r: DEFAULT_SAMPLES,
            point_rule: SamplePointRule::GapRatio { rho: 10.0 },
            qmc: QmcConfig::default(),
            seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.r == 0 {
            return Err(crate::Error::input("sample count r must be at least 1"));
        }
        self.point_rule.validate()?;
        self.qmc.validate()
    }
}

/// Samples at one point of the anneal, with counts per basis state.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampleSet {
    pub s_point: f64,
    /// Sorted by bitmask.
    pub raw: Vec<(NodeSet, u64)>,
    /// Descent destinations of the raw samples, sorted by bitmask.
    pub descended: Vec<(NodeSet, u64)>,
    pub total: u64,
    /// Exact ground-state probability of each descent basin, when known
    /// (exact sampler only). Sorted by bitmask.
    pub basin_mass: Option<Vec<(NodeSet, f64)>>,
}

impl SampleSet {
    /// Builds both views from individual draws.
    pub fn from_draws(
        s_point: f64,
        draws: &[NodeSet],
        descend: impl Fn(NodeSet) -> NodeSet,
        basin_mass: Option<Vec<(NodeSet, f64)>>,
    ) -> Self {
        let mut raw: BTreeMap<NodeSet, u64> = BTreeMap::new();
        let mut desc: BTreeMap<NodeSet, u64> = BTreeMap::new();
        for &x in draws {
            *raw.entry(x).or_insert(0) += 1;
        }
        for (&x, &c) in &raw {
            *desc.entry(descend(x)).or_insert(0) += c;
        }
        SampleSet {
            s_point,
            raw: raw.into_iter().collect(),
            descended: desc.into_iter().collect(),
            total: draws.len() as u64,
            basin_mass,
        }
    }

    /// Count of descended samples equal to `x`.
    pub fn descended_count(&self, x: NodeSet) -> u64 {
        self.descended
            .binary_search_by_key(&x, |e| e.0)
            .map_or(0, |k| self.descended[k].1)
    }

    /// Exact basin mass of `x`, when recorded.
    pub fn exact_mass(&self, x: NodeSet) -> Option<f64> {
        self.basin_mass
            .as_ref()
            .map(|m| m.binary_search_by_key(&x, |e| e.0).map_or(0.0, |k| m[k].1))
    }

    /// Empirical distribution of the raw view.
    pub fn raw_frequencies(&self) -> Vec<(NodeSet, f64)> {
        let t = self.total as f64;
        self.raw.iter().map(|&(x, c)| (x, c as f64 / t)).collect()
    }
}

/// Total-variation distance between two distributions given as sorted
/// `(state, probability)` lists.
pub fn total_variation(p: &[(NodeSet, f64)], q: &[(NodeSet, f64)]) -> f64 {
    let mut merged: BTreeMap<NodeSet, (f64, f64)> = BTreeMap::new();
    for &(x, v) in p {
        merged.entry(x).or_default().0 += v;
    }
    for &(x, v) in q {
        merged.entry(x).or_default().1 += v;
    }
    0.5 * merged.values().map(|(a, b)| crate::math::abs(a - b)).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn views_count_the_same_total() {
        let draws: Vec<NodeSet> = [1u64, 3, 1, 2, 3, 3].iter().map(|&b| NodeSet::from_bits(b)).collect();
        let set = SampleSet::from_draws(0.5, &draws, |x| NodeSet::from_bits(x.bits() & 1), None);
        assert_eq!(set.total, 6);
        assert_eq!(set.raw.iter().map(|e| e.1).sum::<u64>(), 6);
        assert_eq!(set.descended.iter().map(|e| e.1).sum::<u64>(), 6);
        assert_eq!(set.descended_count(NodeSet::from_bits(1)), 5);
        assert_eq!(set.descended_count(NodeSet::from_bits(7)), 0);
        assert_eq!(set.exact_mass(NodeSet::EMPTY), None);
    }

    #[test]
    fn tv_distance() {
        let a = [(NodeSet::from_bits(0), 0.5), (NodeSet::from_bits(1), 0.5)];
        let b = [(NodeSet::from_bits(1), 0.25), (NodeSet::from_bits(2), 0.75)];
        assert!((total_variation(&a, &b) - 0.75).abs() < 1e-15);
        assert_eq!(total_variation(&a, &a), 0.0);
    }
}
