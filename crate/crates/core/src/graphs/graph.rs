use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Largest node count a bitmask graph can hold.
pub const MAX_NODES: usize = 64;

/// A set of nodes stored as a bitmask; bit `i` set means node `i` is a
/// member (equivalently `x_i = 1` in the binary state).
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        NodeSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        let mut s = NodeSet::EMPTY;
        for &i in indices {
            s.insert(i);
        }
        s
    }

    pub fn full(n: usize) -> Self {
        NodeSet(mask_below(n))
    }

    #[inline]
    pub const fn contains(self, i: usize) -> bool {
        (self.0 >> i) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    /// The state with bit `i` flipped.
    #[inline]
    #[must_use]
    pub const fn flipped(self, i: usize) -> Self {
        NodeSet(self.0 ^ (1 << i))
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn hamming(self, other: NodeSet) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    pub const fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub const fn difference(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    pub const fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in ascending order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Highest set bit plus one, or zero for the empty set.
    pub const fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::LowerHex for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = NodeSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Members {}

#[inline]
pub(crate) const fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Simple undirected graph on at most 64 nodes, stored as adjacency bitmasks.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` nodes.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_NODES {
            return Err(Error::input(alloc::format!(
                "node count must be in 1..={MAX_NODES}, got {n}"
            )));
        }
        Ok(Graph {
            n,
            adjacency: alloc::vec![0; n],
        })
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(i, j) in edges {
            if !g.add_edge(i, j)? {
                return Err(Error::input(alloc::format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j)?;
            }
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for i in 1..n {
            g.add_edge(i - 1, i)?;
        }
        Ok(g)
    }

    /// Adds edge `{i, j}`; returns `false` if it was already present.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        if i >= self.n || j >= self.n {
            return Err(Error::input(alloc::format!(
                "edge ({i}, {j}) out of range for {} nodes",
                self.n
            )));
        }
        if i == j {
            return Err(Error::input(alloc::format!("self-loop on node {i}")));
        }
        if self.has_edge(i, j) {
            return Ok(false);
        }
        self.adjacency[i] |= 1 << j;
        self.adjacency[j] |= 1 << i;
        Ok(true)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (self.adjacency[i] >> j) & 1 == 1
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> NodeSet {
        NodeSet(self.adjacency[i])
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            let upper = self.adjacency[i] & !mask_below(i + 1);
            out.extend(NodeSet(upper).iter().map(|j| (i, j)));
        }
        out
    }

    /// Union of the neighborhoods of every member of `s`.
    pub fn neighborhood(&self, s: NodeSet) -> NodeSet {
        NodeSet(s.iter().fold(0, |acc, i| acc | self.adjacency[i]))
    }

    /// Number of edges with both endpoints in `s`.
    pub fn internal_edges(&self, s: NodeSet) -> usize {
        s.iter()
            .map(|i| (self.adjacency[i] & s.0).count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    pub(crate) fn check_in_range(&self, s: NodeSet) -> Result<()> {
        if s.span() > self.n {
            return Err(Error::input(alloc::format!(
                "node set {s:?} has members outside 0..{}",
                self.n
            )));
        }
        Ok(())
    }

    /// True iff no edge joins two members of `s`.
    pub fn is_independent(&self, s: NodeSet) -> Result<bool> {
        self.check_in_range(s)?;
        Ok(self.independent_unchecked(s))
    }

    #[inline]
    pub(crate) fn independent_unchecked(&self, s: NodeSet) -> bool {
        s.iter().all(|i| self.adjacency[i] & s.0 == 0)
    }

    /// True iff `s` is independent and every non-member has a neighbor in it.
    pub fn is_maximal_independent(&self, s: NodeSet) -> Result<bool> {
        if !self.is_independent(s)? {
            return Ok(false);
        }
        let covered = s.union(self.neighborhood(s));
        Ok(covered == self.all_nodes())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}
