use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{enumerate_maximal_sets, NodeSet, ProblemInstance};
use crate::perturbation::two_flip_components;
use crate::Result;

/// Counts of maximal independent sets (local minima of the cost) by size,
/// with equal-size sets grouped into 2-flip-connected clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MinimaCensus {
    pub by_size: BTreeMap<usize, usize>,
    /// Largest sets first; within a size, ordered by smallest member bitmask.
    pub clusters: Vec<Vec<NodeSet>>,
    /// Size of the largest maximal independent set found.
    pub mis_size: usize,
    pub mis_unique: bool,
}

impl MinimaCensus {
    /// Clusters whose members have `size` nodes.
    pub fn clusters_of_size(&self, size: usize) -> impl Iterator<Item = &Vec<NodeSet>> {
        self.clusters.iter().filter(move |c| c[0].len() == size)
    }

    pub fn largest_cluster(&self, size: usize) -> usize {
        self.clusters_of_size(size).map(Vec::len).max().unwrap_or(0)
    }
}

/// Census of maximal independent sets at the requested sizes (all sizes when
/// `sizes` is empty). MIS uniqueness is always decided over the full
/// enumeration above the smallest requested size.
pub fn census(inst: &ProblemInstance, sizes: &[usize], cap: usize) -> Result<MinimaCensus> {
    let floor = sizes.iter().copied().min().unwrap_or(0);
    let mut all = enumerate_maximal_sets(&inst.graph, floor, cap)?;
    if all.is_empty() {
        all = enumerate_maximal_sets(&inst.graph, 0, cap)?;
    }
    let mis_size = all.iter().map(|s| s.len()).max().unwrap_or(0);
    let mis_count = all.iter().filter(|s| s.len() == mis_size).count();

    let wanted = |k: usize| sizes.is_empty() || sizes.contains(&k);
    let mut by_size = BTreeMap::new();
    let mut groups: BTreeMap<usize, Vec<NodeSet>> = BTreeMap::new();
    for s in all.iter().copied().filter(|s| wanted(s.len())) {
        *by_size.entry(s.len()).or_insert(0) += 1;
        groups.entry(s.len()).or_default().push(s);
    }
    let mut clusters = Vec::new();
    for (_, sets) in groups.into_iter().rev() {
        clusters.extend(two_flip_components(&sets));
    }
    Ok(MinimaCensus {
        by_size,
        clusters,
        mis_size,
        mis_unique: mis_count == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{generate_hard_instance, GeneratorParams, Graph, DEFAULT_ENUMERATION_CAP};

    #[test]
    fn path_census() {
        let inst = ProblemInstance::new(Graph::path(3).unwrap(), 2.0).unwrap();
        let c = census(&inst, &[1, 2], DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(c.by_size, BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(c.clusters.len(), 2);
        assert!(c.clusters.iter().all(|cl| cl.len() == 1));
        assert!(c.mis_unique);
    }

    #[test]
    fn edgeless_census() {
        let inst = ProblemInstance::new(Graph::new(3).unwrap(), 2.0).unwrap();
        let c = census(&inst, &[], DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(c.by_size, BTreeMap::from([(3, 1)]));
        assert!(c.mis_unique);
        assert_eq!(c.mis_size, 3);
    }

    #[test]
    fn generated_instance_has_degenerate_cluster() {
        let inst = generate_hard_instance(
            GeneratorParams {
                n: 14,
                e_initial: 18,
                m: 5,
            },
            1,
        )
        .unwrap();
        let c = census(&inst, &[4, 5], DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(c.mis_unique);
        assert_eq!(c.by_size.get(&5), Some(&1));
        assert!(c.largest_cluster(4) >= 2);
    }

    #[test]
    fn requested_sizes_above_mis_still_report_uniqueness() {
        let inst = ProblemInstance::new(Graph::path(4).unwrap(), 2.0).unwrap();
        let c = census(&inst, &[3], DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(c.by_size.is_empty());
        assert_eq!(c.mis_size, 2);
        assert!(!c.mis_unique);
    }
}
