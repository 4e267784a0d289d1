use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use super::{SampleSet, SamplerConfig};
use crate::graphs::NodeSet;
use crate::ising::{descent_map, Schedule, TransverseFieldModel};
use crate::rng::{self, streams};
use crate::spectrum::{SolverConfig, SpectralSolver};
use crate::{Error, Result};

/// Draws `cfg.r` basis states from the exact ground state of `H(s)` and
/// records the exact probability of every descent basin.
pub fn sample_exact(
    model: &TransverseFieldModel,
    schedule: &Schedule,
    s: f64,
    cfg: &SamplerConfig,
    solver: &SolverConfig,
) -> Result<SampleSet> {
    cfg.validate()?;
    let spectral = SpectralSolver::new(model, schedule, *solver)?;
    let ground = spectral.at(s, 1)?;
    sample_state(model, s, &ground.vectors[0], cfg)
}

/// Same as [`sample_exact`] for a ground state already at hand.
pub fn sample_state(model: &TransverseFieldModel, s: f64, state: &[f64], cfg: &SamplerConfig) -> Result<SampleSet> {
    let probs: Vec<f64> = state.iter().map(|a| a * a).collect();
    let dist = WeightedIndex::new(&probs).map_err(|e| Error::invariant(alloc::format!("ground state weights: {e}")))?;
    let mut rng = rng::stream(cfg.seed, streams::EXACT_SAMPLER);
    let draws: Vec<NodeSet> = (0..cfg.r)
        .map(|_| NodeSet::from_bits(dist.sample(&mut rng) as u64))
        .collect();
    let map = descent_map(model);
    let total: f64 = probs.iter().sum();
    let mut mass: BTreeMap<NodeSet, f64> = BTreeMap::new();
    for (k, p) in probs.iter().enumerate() {
        *mass.entry(map[k]).or_insert(0.0) += p / total;
    }
    Ok(SampleSet::from_draws(
        s,
        &draws,
        |x| map[x.bits() as usize],
        Some(mass.into_iter().collect()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{Graph, ProblemInstance};
    use crate::ising::build_model;

    #[test]
    fn balanced_single_qubit() {
        // h = 0: ground state of -σx is (|0> + |1>)/sqrt 2 at every s < 1
        let m = TransverseFieldModel::from_parts(1, alloc::vec![0.0], Vec::new(), alloc::vec![1.0], 0.0).unwrap();
        let cfg = SamplerConfig {
            r: 10_000,
            ..SamplerConfig::default()
        };
        let set = sample_exact(&m, &Schedule::linear(), 0.5, &cfg, &SolverConfig::default()).unwrap();
        let ones = set.raw.iter().find(|e| e.0 == NodeSet::from_bits(1)).unwrap().1 as f64;
        // 3 sigma of Binomial(10^4, 1/2) is 150
        assert!((ones - 5000.0).abs() < 150.0);
    }

    #[test]
    fn classical_endpoint_gives_the_mis() {
        let inst = ProblemInstance::new(Graph::path(5).unwrap(), 2.0).unwrap();
        let m = build_model(&inst, None).unwrap();
        let set = sample_exact(
            &m,
            &Schedule::linear(),
            1.0,
            &SamplerConfig::default(),
            &SolverConfig::default(),
        )
        .unwrap();
        let mis = NodeSet::from_indices(&[0, 2, 4]);
        assert_eq!(set.raw, [(mis, 500)]);
        assert_eq!(set.exact_mass(mis), Some(1.0));
    }

    #[test]
    fn reproducible_and_descended_to_minima() {
        let inst = ProblemInstance::new(
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap(),
            2.0,
        )
        .unwrap();
        let m = build_model(&inst, None).unwrap();
        let cfg = SamplerConfig {
            seed: 11,
            ..SamplerConfig::default()
        };
        let a = sample_exact(&m, &Schedule::linear(), 0.4, &cfg, &SolverConfig::default()).unwrap();
        let b = sample_exact(&m, &Schedule::linear(), 0.4, &cfg, &SolverConfig::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.descended.iter().all(|(x, _)| m.is_local_minimum(*x)));
        let mass: f64 = a.basin_mass.as_ref().unwrap().iter().map(|e| e.1).sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }
}
