use alloc::vec::Vec;

use crate::graphs::NodeSet;
use crate::ising::TransverseFieldModel;

/// Minima closer in energy than this are treated as degenerate.
pub const ENERGY_TOL: f64 = 1e-9;

/// Equal-energy minima connected through two-flip paths.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cluster {
    /// Sorted by bitmask.
    pub members: Vec<NodeSet>,
    pub energy: f64,
    /// Member index pairs `(k, k')`, `k < k'`, at Hamming distance 2.
    pub adjacency: Vec<(usize, usize)>,
}

/// Ordered flip pairs `(i, j)` with `flip_j(flip_i(a)) = b`.
///
/// For `a = b` these are the `n` return paths `(i, i)`. For two states at
/// Hamming distance 2 both orderings are listed, the one that first flips a
/// member of `a` out of the set coming first.
pub fn two_flip_paths(m: &TransverseFieldModel, a: NodeSet, b: NodeSet) -> Vec<(usize, usize)> {
    if a == b {
        return (0..m.n()).map(|i| (i, i)).collect();
    }
    let diff = NodeSet::from_bits(a.bits() ^ b.bits());
    if diff.len() != 2 {
        return Vec::new();
    }
    let mut it = diff.iter();
    let (p, q) = (it.next().unwrap(), it.next().unwrap());
    if a.contains(q) && !a.contains(p) {
        alloc::vec![(q, p), (p, q)]
    } else {
        alloc::vec![(p, q), (q, p)]
    }
}

/// Connected components of `sets` under the Hamming-distance-2 relation.
/// Components are sorted internally by bitmask and ordered by their first
/// member.
pub fn two_flip_components(sets: &[NodeSet]) -> Vec<Vec<NodeSet>> {
    let mut sorted = sets.to_vec();
    sorted.sort();
    sorted.dedup();
    let k = sorted.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..k {
        for b in a + 1..k {
            if sorted[a].hamming(sorted[b]) == 2 {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut slot = alloc::vec![usize::MAX; k];
    let mut out: Vec<Vec<NodeSet>> = Vec::new();
    for (x, set) in sorted.iter().enumerate() {
        let r = root(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Vec::new());
        }
        out[slot[r]].push(*set);
    }
    out
}

/// Groups `minima` by diagonal energy and splits each level into two-flip
/// components. Clusters are ordered by energy, then by first member.
pub fn find_clusters(m: &TransverseFieldModel, minima: &[NodeSet]) -> Vec<Cluster> {
    let mut tagged: Vec<(f64, NodeSet)> = minima.iter().map(|&x| (m.diagonal_energy(x), x)).collect();
    tagged.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut clusters = Vec::new();
    let mut start = 0;
    while start < tagged.len() {
        let mut end = start + 1;
        while end < tagged.len() && tagged[end].0 - tagged[end - 1].0 <= ENERGY_TOL {
            end += 1;
        }
        let level: Vec<NodeSet> = tagged[start..end].iter().map(|t| t.1).collect();
        for members in two_flip_components(&level) {
            clusters.push(cluster_from_members(m, members));
        }
        start = end;
    }
    clusters
}

/// Cluster record for an explicit member list (sorted, adjacency filled
/// in, energy taken from the first member).
pub fn cluster_from_members(m: &TransverseFieldModel, mut members: Vec<NodeSet>) -> Cluster {
    members.sort();
    members.dedup();
    let energy = members.first().map_or(0.0, |&x| m.diagonal_energy(x));
    let mut adjacency = Vec::new();
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            if members[a].hamming(members[b]) == 2 {
                adjacency.push((a, b));
            }
        }
    }
    Cluster {
        members,
        energy,
        adjacency,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{Graph, ProblemInstance};

    fn model(g: Graph) -> TransverseFieldModel {
        TransverseFieldModel::from_instance(&ProblemInstance::new(g, 2.0).unwrap(), None).unwrap()
    }

    #[test]
    fn path_examples() {
        let m = model(Graph::path(3).unwrap());
        let a = NodeSet::from_indices(&[0, 2]);
        assert_eq!(two_flip_paths(&m, a, a), [(0, 0), (1, 1), (2, 2)]);
        assert_eq!(two_flip_paths(&m, a, NodeSet::from_indices(&[0, 1])), [(2, 1), (1, 2)]);
        assert_eq!(two_flip_paths(&m, NodeSet::from_indices(&[0, 1]), a), [(1, 2), (2, 1)]);
        let far = model(Graph::new(4).unwrap());
        assert!(two_flip_paths(&far, NodeSet::from_indices(&[0, 1]), NodeSet::from_indices(&[2, 3])).is_empty());
    }

    #[test]
    fn every_listed_path_lands_on_target() {
        let m = model(Graph::new(6).unwrap());
        for a in 0u64..64 {
            for b in 0u64..64 {
                let (x, y) = (NodeSet::from_bits(a), NodeSet::from_bits(b));
                for (i, j) in two_flip_paths(&m, x, y) {
                    assert_eq!(x.flipped(i).flipped(j), y);
                }
            }
        }
    }

    #[test]
    fn clusters_by_energy_and_distance() {
        let m = model(Graph::path(3).unwrap());
        let cl = find_clusters(&m, &[NodeSet::from_indices(&[1]), NodeSet::from_indices(&[0, 2])]);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].members, [NodeSet::from_indices(&[0, 2])]);
        assert_eq!(cl[0].energy, -2.0);

        // 4-cycle 0-1-2-3: {0,2} and {1,3} are four flips apart
        let c4 = model(Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap());
        let cl = find_clusters(&c4, &[NodeSet::from_indices(&[0, 2]), NodeSet::from_indices(&[1, 3])]);
        assert_eq!(cl.len(), 2);

        // star centre 0 with leaf pair {1,2} and an extra edge 3-4:
        // {1,2,3} and {1,2,4} are two flips apart
        let g = model(Graph::from_edges(5, &[(0, 1), (0, 2), (3, 4)]).unwrap());
        let cl = find_clusters(
            &g,
            &[NodeSet::from_indices(&[1, 2, 3]), NodeSet::from_indices(&[1, 2, 4])],
        );
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].adjacency, [(0, 1)]);
    }

    #[test]
    fn components_are_deterministic() {
        let sets: Vec<NodeSet> = [0b0011u64, 0b1100, 0b0101, 0b1001, 0b110000]
            .iter()
            .map(|&b| NodeSet::from_bits(b))
            .collect();
        let mut rev = sets.clone();
        rev.reverse();
        assert_eq!(two_flip_components(&sets), two_flip_components(&rev));
        let c = two_flip_components(&sets);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].len(), 4);
    }
}
