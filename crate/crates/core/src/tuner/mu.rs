use alloc::vec::Vec;

use crate::graphs::NodeSet;
use crate::ising::TransverseFieldModel;
use crate::perturbation::ENERGY_TOL;
use crate::sampler::SampleSet;
use crate::{Error, Result};

/// Sample estimate of `μ_i` with the sample bookkeeping behind it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MuEstimate {
    pub mu: Vec<f64>,
    /// Most frequent energy among the counted minima (lowest on ties).
    pub modal_energy: f64,
    /// Descended samples that entered the average.
    pub counted: u64,
    /// Counted samples whose energy differs from `modal_energy`.
    pub off_class: u64,
}

/// `μ_i = < B_(k,i)^-1 Σ_j Δ_j >` over the descended samples `M_k`, where
/// `j` runs over the flips that, after flipping `i`, land on a local
/// minimum with the energy of `M_k` (`j = i` returns to `M_k`). For the MIS
/// cost with `c > 1` the local minima are exactly the maximal independent
/// sets. Samples at `global_min` are skipped.
pub fn compute_mu(m: &TransverseFieldModel, samples: &SampleSet, global_min: NodeSet) -> Result<MuEstimate> {
    let n = m.n();
    let delta = m.delta();
    let mut mu = alloc::vec![0.0; n];
    let mut counted = 0u64;
    let mut classes: Vec<(f64, u64)> = Vec::new();
    for &(x, count) in &samples.descended {
        if x == global_min || count == 0 {
            continue;
        }
        let e = m.diagonal_energy(x);
        match classes.iter_mut().find(|c| (c.0 - e).abs() <= ENERGY_TOL) {
            Some(c) => c.1 += count,
            None => classes.push((e, count)),
        }
        for (i, slot) in mu.iter_mut().enumerate() {
            let b = m.flip_cost(x, i);
            if b <= 0.0 {
                return Err(Error::invariant(alloc::format!(
                    "descended sample {x:?} is not a local minimum (flip {i} costs {b})"
                )));
            }
            let y = x.flipped(i);
            let mut reach = delta[i];
            for j in (0..n).filter(|&j| j != i) {
                let z = y.flipped(j);
                if (m.diagonal_energy(z) - e).abs() <= ENERGY_TOL && m.is_local_minimum(z) {
                    reach += delta[j];
                }
            }
            *slot += count as f64 * reach / b;
        }
        counted += count;
    }
    if counted == 0 {
        return Err(Error::input("no descended samples outside the global minimum"));
    }
    for v in &mut mu {
        *v /= counted as f64;
    }
    let modal = classes
        .iter()
        .copied()
        .fold(None::<(f64, u64)>, |best, c| match best {
            Some(b) if b.1 > c.1 || (b.1 == c.1 && b.0 <= c.0) => Some(b),
            _ => Some(c),
        })
        .expect("at least one class");
    Ok(MuEstimate {
        mu,
        modal_energy: modal.0,
        counted,
        off_class: counted - modal.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{Graph, ProblemInstance};
    use crate::ising::build_model;

    fn one_sample(x: NodeSet) -> SampleSet {
        SampleSet {
            s_point: 0.5,
            raw: alloc::vec![(x, 3)],
            descended: alloc::vec![(x, 3)],
            total: 3,
            basin_mass: None,
        }
    }

    #[test]
    fn return_paths_only() {
        // star with centre 0: the leaves {1,2,3} have no equal-energy partner
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let m = build_model(&ProblemInstance::new(g, 2.0).unwrap(), None).unwrap();
        let x = NodeSet::from_indices(&[1, 2, 3]);
        let est = compute_mu(&m, &one_sample(x), NodeSet::EMPTY).unwrap();
        for i in 0..4 {
            assert!((est.mu[i] - 1.0 / m.flip_cost(x, i)).abs() < 1e-15);
        }
        assert_eq!(est.counted, 3);
    }

    #[test]
    fn one_partner_doubles_two_entries() {
        // path 0-1-2-3: {0,2} and {0,3} differ by removing 2 and adding 3
        let g = Graph::path(4).unwrap();
        let m = build_model(&ProblemInstance::new(g, 2.0).unwrap(), None).unwrap();
        let x = NodeSet::from_indices(&[0, 2]);
        let est = compute_mu(&m, &one_sample(x), NodeSet::from_indices(&[1, 3])).unwrap();
        // {0,2} also reaches {1,3} by swapping 0 for 1 and 2 for 3, but that
        // needs four flips; two-flip partners are {0,3} via (2,3), (3,2)
        assert!((est.mu[2] - 2.0 / m.flip_cost(x, 2)).abs() < 1e-15);
        assert!((est.mu[3] - 2.0 / m.flip_cost(x, 3)).abs() < 1e-15);
        assert!((est.mu[0] - 1.0 / m.flip_cost(x, 0)).abs() < 1e-15);
        assert!((est.mu[1] - 1.0 / m.flip_cost(x, 1)).abs() < 1e-15);
    }

    #[test]
    fn global_samples_are_skipped() {
        let g = Graph::path(3).unwrap();
        let m = build_model(&ProblemInstance::new(g, 2.0).unwrap(), None).unwrap();
        let mis = NodeSet::from_indices(&[0, 2]);
        assert!(matches!(compute_mu(&m, &one_sample(mis), mis), Err(Error::Input(_))));
    }
}
