use alloc::vec::Vec;

use super::graph::mask_below;
use super::{Graph, NodeSet};
use crate::{Error, Result};

/// Default node-count limit for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 40;

/// All maximal independent sets with at least `min_size` members, sorted by
/// bitmask value.
///
/// Bron–Kerbosch with pivoting on the complement graph: maximal cliques of
/// the complement are exactly the maximal independent sets. Branches that
/// cannot reach `min_size` are pruned.
pub fn enumerate_maximal_sets(g: &Graph, min_size: usize, cap: usize) -> Result<Vec<NodeSet>> {
    let n = g.node_count();
    if n > cap {
        return Err(Error::Size {
            what: "node count for exhaustive enumeration",
            actual: n,
            cap,
            knob: "census_cap",
        });
    }
    let full = mask_below(n);
    let non_neighbors: Vec<u64> = (0..n).map(|v| !g.neighbors(v).bits() & full & !(1u64 << v)).collect();
    let mut out = Vec::new();
    bron_kerbosch(&non_neighbors, 0, full, 0, min_size, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn bron_kerbosch(nn: &[u64], r: u64, mut p: u64, mut x: u64, min_size: usize, out: &mut Vec<NodeSet>) {
    if p == 0 {
        if x == 0 && r.count_ones() as usize >= min_size {
            out.push(NodeSet::from_bits(r));
        }
        return;
    }
    if ((r.count_ones() + p.count_ones()) as usize) < min_size {
        return;
    }
    let pivot = NodeSet::from_bits(p | x)
        .iter()
        .max_by_key(|&u| ((p & nn[u]).count_ones(), core::cmp::Reverse(u)))
        .expect("p is nonempty");
    let mut candidates = p & !nn[pivot];
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        bron_kerbosch(nn, r | (1 << v), p & nn[v], x & nn[v], min_size, out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Outcome of a bounded step of [`IndependentSetSearch`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStep {
    Found(NodeSet),
    Exhausted,
    /// The step budget ran out; call again to continue.
    Paused,
}

/// Resumable depth-first search over independent sets of one fixed size.
///
/// Nodes are tried in ascending index order, including a node before
/// excluding it, so sets come out in lexicographic order of their sorted
/// member lists. The search object is its own continuation token: the graph
/// may gain edges between calls (as the instance generator does), and the
/// search resumes where it stopped, skipping any branch whose prefix is no
/// longer independent. Adding edges never creates independent sets, so a
/// resumed search still visits every surviving set it has not yet passed.
#[derive(Debug, Clone)]
pub struct IndependentSetSearch {
    target: usize,
    chosen: Vec<usize>,
    next: usize,
    done: bool,
    visited: u64,
}

impl IndependentSetSearch {
    pub fn new(target: usize) -> Self {
        IndependentSetSearch {
            target,
            chosen: Vec::with_capacity(target),
            next: 0,
            done: false,
            visited: 0,
        }
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Search nodes expanded so far.
    pub fn visited(&self) -> u64 {
        self.visited
    }

    pub fn is_exhausted(&self) -> bool {
        self.done
    }

    pub fn next_set(&mut self, g: &Graph) -> Option<NodeSet> {
        loop {
            match self.step(g, u64::MAX) {
                SearchStep::Found(s) => return Some(s),
                SearchStep::Exhausted => return None,
                SearchStep::Paused => {}
            }
        }
    }

    /// Runs until a set is found, the search is exhausted, or `budget` search
    /// nodes have been expanded.
    pub fn step(&mut self, g: &Graph, budget: u64) -> SearchStep {
        let n = g.node_count();
        let mut spent = 0u64;
        while !self.done {
            if spent >= budget {
                return SearchStep::Paused;
            }
            spent += 1;
            self.visited += 1;
            let current: NodeSet = self.chosen.iter().copied().collect();
            if !g.independent_unchecked(current) {
                self.backtrack();
                continue;
            }
            if self.chosen.len() == self.target {
                self.backtrack();
                return SearchStep::Found(current);
            }
            let needed = self.target - self.chosen.len();
            let blocked = g.neighborhood(current).bits() | current.bits();
            let candidates = mask_below(n) & !mask_below(self.next) & !blocked;
            if (candidates.count_ones() as usize) < needed {
                self.backtrack();
                continue;
            }
            let v = candidates.trailing_zeros() as usize;
            self.chosen.push(v);
            self.next = v + 1;
        }
        SearchStep::Exhausted
    }

    fn backtrack(&mut self) {
        match self.chosen.pop() {
            Some(v) => self.next = v + 1,
            None => self.done = true,
        }
    }
}

/// First independent set of exactly `target_size` nodes (in search order)
/// that is not listed in `exclude`.
pub fn find_independent_set_dfs(g: &Graph, target_size: usize, exclude: &[NodeSet]) -> Option<NodeSet> {
    if target_size > g.node_count() {
        return None;
    }
    let mut search = IndependentSetSearch::new(target_size);
    while let Some(s) = search.next_set(g) {
        if !exclude.contains(&s) {
            return Some(s);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sets(v: &[&[usize]]) -> Vec<NodeSet> {
        v.iter().map(|s| NodeSet::from_indices(s)).collect()
    }

    /// Brute-force maximal sets over all subsets.
    fn brute_maximal(g: &Graph, min_size: usize) -> Vec<NodeSet> {
        let n = g.node_count();
        (0u64..1 << n)
            .map(NodeSet::from_bits)
            .filter(|&s| s.len() >= min_size && g.is_maximal_independent(s).unwrap())
            .collect()
    }

    #[test]
    fn maximal_sets_small_examples() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(enumerate_maximal_sets(&k3, 1, 40).unwrap(), sets(&[&[0], &[1], &[2]]));
        let p3 = Graph::path(3).unwrap();
        assert_eq!(enumerate_maximal_sets(&p3, 1, 40).unwrap(), sets(&[&[1], &[0, 2]]));
        let empty = Graph::new(3).unwrap();
        assert_eq!(enumerate_maximal_sets(&empty, 1, 40).unwrap(), sets(&[&[0, 1, 2]]));
    }

    #[test]
    fn maximal_sets_match_brute_force() {
        let g = Graph::from_edges(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (1, 5), (2, 6)],
        )
        .unwrap();
        for min_size in 0..5 {
            assert_eq!(
                enumerate_maximal_sets(&g, min_size, 40).unwrap(),
                brute_maximal(&g, min_size)
            );
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let g = Graph::new(41).unwrap();
        assert!(matches!(enumerate_maximal_sets(&g, 0, 40), Err(Error::Size { .. })));
    }

    #[test]
    fn dfs_examples() {
        let p3 = Graph::path(3).unwrap();
        assert_eq!(
            find_independent_set_dfs(&p3, 2, &[]),
            Some(NodeSet::from_indices(&[0, 2]))
        );
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(find_independent_set_dfs(&k3, 2, &[]), None);
        let e4 = Graph::new(4).unwrap();
        let ex = NodeSet::from_indices(&[0, 1, 2]);
        let got = find_independent_set_dfs(&e4, 3, &[ex]).unwrap();
        assert_eq!(got.len(), 3);
        assert_ne!(got, ex);
    }

    #[test]
    fn dfs_order_is_lexicographic() {
        let e4 = Graph::new(4).unwrap();
        let mut search = IndependentSetSearch::new(2);
        let mut got = vec![];
        while let Some(s) = search.next_set(&e4) {
            got.push(s.to_vec());
        }
        assert_eq!(
            got,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn dfs_resumes_after_edges_are_added() {
        let mut g = Graph::new(4).unwrap();
        let mut search = IndependentSetSearch::new(2);
        assert_eq!(search.next_set(&g).unwrap().to_vec(), vec![0, 1]);
        g.add_edge(0, 2).unwrap();
        g.add_edge(1, 3).unwrap();
        let rest: Vec<_> = core::iter::from_fn(|| search.next_set(&g))
            .map(|s| s.to_vec())
            .collect();
        assert_eq!(rest, vec![vec![0, 3], vec![1, 2], vec![2, 3]]);
    }

    #[test]
    fn bounded_steps_pause_and_resume() {
        let g = Graph::new(10).unwrap();
        let mut search = IndependentSetSearch::new(5);
        assert_eq!(search.step(&g, 2), SearchStep::Paused);
        let mut found = 0;
        loop {
            match search.step(&g, 3) {
                SearchStep::Found(_) => found += 1,
                SearchStep::Paused => {}
                SearchStep::Exhausted => break,
            }
        }
        assert_eq!(found, 252);
    }

    #[test]
    fn zero_target_yields_empty_set_once() {
        let g = Graph::path(3).unwrap();
        let mut search = IndependentSetSearch::new(0);
        assert_eq!(search.next_set(&g), Some(NodeSet::EMPTY));
        assert_eq!(search.next_set(&g), None);
    }
}
