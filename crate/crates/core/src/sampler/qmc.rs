use alloc::vec::Vec;
use rand::Rng;

use super::{SampleSet, SamplerConfig};
use crate::graphs::NodeSet;
use crate::ising::{gradient_descent, Schedule, TransverseFieldModel};
use crate::math;
use crate::rng::{self, streams, StreamRng};
use crate::{Error, Result};

/// Discrete-time path-integral Monte Carlo parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QmcConfig {
    /// Trotter slices `P`.
    pub slices: usize,
    /// Inverse temperature in the energy units of the schedule.
    pub beta: f64,
    pub burn_in: usize,
    /// Sweeps between recorded samples.
    pub sweeps_between: usize,
    /// Independent chains; samples are split evenly between them.
    pub chains: usize,
}

pub const DEFAULT_SLICES: usize = 64;
pub const DEFAULT_BETA: f64 = 8.0;
pub const DEFAULT_BURN_IN: usize = 1000;

impl Default for QmcConfig {
    fn default() -> Self {
        QmcConfig {
            slices: DEFAULT_SLICES,
            beta: DEFAULT_BETA,
            burn_in: DEFAULT_BURN_IN,
            sweeps_between: 1,
            chains: 4,
        }
    }
}

impl QmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.slices < 2 {
            return Err(Error::input("QMC needs at least 2 Trotter slices"));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::input(alloc::format!(
                "QMC beta must be positive, got {}",
                self.beta
            )));
        }
        if self.sweeps_between == 0 || self.chains == 0 {
            return Err(Error::input("QMC sweeps_between and chains must be positive"));
        }
        Ok(())
    }

    /// Inverse temperature at which a gap `g` suppresses the first excited
    /// state by `ratio`: `ln(1/ratio) / g`.
    pub fn beta_for_gap(g: f64, ratio: f64) -> f64 {
        math::ln(1.0 / ratio) / g
    }
}

/// Samples the ground state of `H(s)` with path-integral Monte Carlo.
///
/// The partition function is split into `P` slices of width `ε = β/P`.
/// Spin `i` couples to itself in neighbouring slices with
/// `K_i = -½ ln tanh(ε A Δ_i)`; each slice carries `ε B H_P`. A sweep does
/// one temporal cluster move per qubit followed by one Metropolis flip per
/// site. Every recorded sample is one randomly chosen slice.
pub fn sample_qmc(model: &TransverseFieldModel, schedule: &Schedule, s: f64, cfg: &SamplerConfig) -> Result<SampleSet> {
    cfg.validate()?;
    let v = schedule.values(s)?;
    if !(v.a > 0.0) {
        return Err(Error::input(alloc::format!(
            "QMC needs a transverse field, but A({s}) = {}",
            v.a
        )));
    }
    let q = cfg.qmc;
    let eps = q.beta / q.slices as f64;
    let k: Vec<f64> = model
        .delta()
        .iter()
        .map(|d| -0.5 * math::ln(math::tanh(eps * v.a * d)))
        .collect();
    if let Some(i) = k.iter().position(|x| !x.is_finite()) {
        return Err(Error::input(alloc::format!("QMC coupling for qubit {i} is not finite")));
    }
    let chain = Chain {
        model,
        eps_b: eps * v.b,
        k: &k,
        bond: k.iter().map(|x| 1.0 - math::exp(-2.0 * x)).collect(),
    };
    let mut draws = Vec::with_capacity(cfg.r);
    for c in 0..q.chains {
        let take = cfg.r / q.chains + usize::from(c < cfg.r % q.chains);
        if take == 0 {
            continue;
        }
        let mut rng = rng::stream(rng::derive_seed(cfg.seed, c as u64), streams::QMC);
        let mut world = alloc::vec![0u64; q.slices];
        for w in world.iter_mut() {
            *w = rng.random::<u64>() & NodeSet::full(model.n()).bits();
        }
        for _ in 0..q.burn_in {
            chain.sweep(&mut world, &mut rng);
        }
        for _ in 0..take {
            for _ in 0..q.sweeps_between {
                chain.sweep(&mut world, &mut rng);
            }
            draws.push(NodeSet::from_bits(world[rng.random_range(0..q.slices)]));
        }
    }
    let mut memo = alloc::collections::BTreeMap::new();
    for &x in &draws {
        memo.entry(x).or_insert_with(|| gradient_descent(model, x));
    }
    Ok(SampleSet::from_draws(s, &draws, |x| memo[&x], None))
}

struct Chain<'a> {
    model: &'a TransverseFieldModel,
    eps_b: f64,
    k: &'a [f64],
    /// Probability of bonding two aligned neighbours in imaginary time.
    bond: Vec<f64>,
}

impl Chain<'_> {
    fn sweep(&self, world: &mut [u64], rng: &mut StreamRng) {
        let n = self.model.n();
        let p = world.len();
        for i in 0..n {
            self.cluster_move(world, i, rng);
        }
        for t in 0..p {
            for i in 0..n {
                let z = spin(world[t], i);
                let around = spin(world[(t + p - 1) % p], i) + spin(world[(t + 1) % p], i);
                let ds =
                    self.eps_b * self.model.flip_cost(NodeSet::from_bits(world[t]), i) + 2.0 * self.k[i] * z * around;
                if ds <= 0.0 || rng.random::<f64>() < math::exp(-ds) {
                    world[t] ^= 1 << i;
                }
            }
        }
    }

    /// Grows a segment of qubit `i`'s worldline from a random slice and
    /// flips it with Metropolis acceptance on the slice energies.
    fn cluster_move(&self, world: &mut [u64], i: usize, rng: &mut StreamRng) {
        let p = world.len();
        let start = rng.random_range(0..p);
        let z0 = spin(world[start], i);
        let grow = |t: usize, rng: &mut StreamRng| spin(world[t], i) == z0 && rng.random::<f64>() < self.bond[i];
        let mut hi = 0;
        while hi + 1 < p && grow((start + hi + 1) % p, rng) {
            hi += 1;
        }
        let mut lo = 0;
        while hi + lo + 1 < p && grow((start + p - lo - 1) % p, rng) {
            lo += 1;
        }
        let mut ds = 0.0;
        for off in 0..=hi + lo {
            let t = (start + p - lo + off) % p;
            ds += self.model.flip_cost(NodeSet::from_bits(world[t]), i);
        }
        ds *= self.eps_b;
        if ds <= 0.0 || rng.random::<f64>() < math::exp(-ds) {
            for off in 0..=hi + lo {
                world[(start + p - lo + off) % p] ^= 1 << i;
            }
        }
    }
}

#[inline]
fn spin(word: u64, i: usize) -> f64 {
    if word >> i & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}
