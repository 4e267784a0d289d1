use alloc::vec::Vec;

use crate::graphs::{NodeSet, ProblemInstance};
use crate::{Error, Result};

/// Flip costs below `-FLIP_EPS` count as downhill.
pub(crate) const FLIP_EPS: f64 = 1e-9;

/// One `J_ij σz_i σz_j` term, `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// Transverse-field Ising model of an MIS instance:
///
/// ```text
/// H_P = shift + Σ_i h_i σz_i + Σ_(i<j) J_ij σz_i σz_j
/// H_B = -Σ_i Δ_i σx_i
/// ```
///
/// with `σz_i = +1` meaning node `i` is in the set. The constant shift is
/// kept so that `<x|H_P|x>` equals the instance cost exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct TransverseFieldModel {
    n: usize,
    h: Vec<f64>,
    couplings: Vec<Coupling>,
    neighbors: Vec<Vec<(usize, f64)>>,
    delta: Vec<f64>,
    constant_shift: f64,
}

impl TransverseFieldModel {
    /// Maps `inst` onto Ising parameters via `x_i = (1 + σz_i) / 2`:
    /// `h_i = (n_i c - 2) / 4`, `J_ij = c / 4` on edges,
    /// shift `= -n/2 + c |E| / 4`. `delta` defaults to all ones.
    pub fn from_instance(inst: &ProblemInstance, delta: Option<&[f64]>) -> Result<Self> {
        let g = &inst.graph;
        let n = g.node_count();
        let c = inst.penalty();
        let h: Vec<f64> = (0..n).map(|i| (g.degree(i) as f64 * c - 2.0) / 4.0).collect();
        let couplings: Vec<Coupling> = g
            .edges()
            .into_iter()
            .map(|(i, j)| Coupling { i, j, value: c / 4.0 })
            .collect();
        let shift = -(n as f64) / 2.0 + c * g.edge_count() as f64 / 4.0;
        let delta = match delta {
            Some(d) => d.to_vec(),
            None => alloc::vec![1.0; n],
        };
        Self::from_parts(n, h, couplings, delta, shift)
    }

    /// General constructor; `couplings` must not contain self or repeated
    /// pairs.
    pub fn from_parts(
        n: usize,
        h: Vec<f64>,
        couplings: Vec<Coupling>,
        delta: Vec<f64>,
        constant_shift: f64,
    ) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::input(alloc::format!("qubit count must be in 1..=64, got {n}")));
        }
        if h.len() != n {
            return Err(Error::input("h must have one entry per qubit"));
        }
        check_delta(n, &delta)?;
        let mut neighbors = alloc::vec![Vec::new(); n];
        let mut seen = alloc::collections::BTreeSet::new();
        for c in &couplings {
            if c.i >= n || c.j >= n || c.i == c.j || !seen.insert((c.i.min(c.j), c.i.max(c.j))) {
                return Err(Error::input(alloc::format!("bad coupling ({}, {})", c.i, c.j)));
            }
            neighbors[c.i].push((c.j, c.value));
            neighbors[c.j].push((c.i, c.value));
        }
        Ok(TransverseFieldModel {
            n,
            h,
            couplings,
            neighbors,
            delta,
            constant_shift,
        })
    }

    /// Same classical part with new transverse fields.
    pub fn with_delta(&self, delta: &[f64]) -> Result<Self> {
        check_delta(self.n, delta)?;
        let mut m = self.clone();
        m.delta = delta.to_vec();
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn constant_shift(&self) -> f64 {
        self.constant_shift
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.neighbors[i]
            .iter()
            .find(|&&(k, _)| k == j)
            .map_or(0.0, |&(_, v)| v)
    }

    /// `<x|H_P|x>`, shift included.
    pub fn diagonal_energy(&self, x: NodeSet) -> f64 {
        let z = |i: usize| if x.contains(i) { 1.0 } else { -1.0 };
        let field: f64 = self.h.iter().enumerate().map(|(i, h)| h * z(i)).sum();
        let coupling: f64 = self.couplings.iter().map(|c| c.value * z(c.i) * z(c.j)).sum();
        self.constant_shift + field + coupling
    }

    /// Energy change from flipping qubit `i`: `-2 z_i (h_i + Σ_j J_ij z_j)`.
    #[inline]
    pub fn flip_cost(&self, x: NodeSet, i: usize) -> f64 {
        let z = |k: usize| if x.contains(k) { 1.0 } else { -1.0 };
        let local: f64 = self.neighbors[i].iter().map(|&(j, v)| v * z(j)).sum();
        -2.0 * z(i) * (self.h[i] + local)
    }

    /// All single-flip costs out of `x`.
    pub fn flip_costs(&self, x: NodeSet) -> Vec<f64> {
        (0..self.n).map(|i| self.flip_cost(x, i)).collect()
    }

    /// Strict local minimum: every single flip raises the energy.
    pub fn is_local_minimum(&self, x: NodeSet) -> bool {
        (0..self.n).all(|i| self.flip_cost(x, i) > FLIP_EPS)
    }

    /// Upper bound on `max |<x|H_P|x>|` from the coefficients.
    pub fn diagonal_bound(&self) -> f64 {
        crate::math::abs(self.constant_shift)
            + self.h.iter().map(|v| crate::math::abs(*v)).sum::<f64>()
            + self.couplings.iter().map(|c| crate::math::abs(c.value)).sum::<f64>()
    }
}

fn check_delta(n: usize, delta: &[f64]) -> Result<()> {
    if delta.len() != n {
        return Err(Error::input(alloc::format!(
            "delta has {} entries for {n} qubits",
            delta.len()
        )));
    }
    if let Some(d) = delta.iter().find(|d| !(**d > 0.0) || !d.is_finite()) {
        return Err(Error::input(alloc::format!(
            "transverse fields must be positive, got {d}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;

    fn model(g: Graph, c: f64) -> TransverseFieldModel {
        TransverseFieldModel::from_instance(&ProblemInstance::new(g, c).unwrap(), None).unwrap()
    }

    #[test]
    fn field_and_coupling_values() {
        let m = model(Graph::new(1).unwrap(), 2.0);
        assert_eq!(m.h(), &[-0.5]);
        // star with centre 0 and three leaves
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let m = model(star, 2.0);
        assert_eq!(m.h()[0], 1.0);
        assert_eq!(m.h()[1], 0.0);
        assert_eq!(m.coupling(0, 2), 0.5);
        assert_eq!(m.coupling(1, 2), 0.0);
    }

    #[test]
    fn diagonal_matches_cost_exhaustively() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)]).unwrap();
        for c in [1.5, 2.0, 3.7] {
            let inst = ProblemInstance::new(g.clone(), c).unwrap();
            let m = TransverseFieldModel::from_instance(&inst, None).unwrap();
            for bits in 0u64..64 {
                let x = NodeSet::from_bits(bits);
                assert!((m.diagonal_energy(x) - inst.cost(x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn flip_cost_examples() {
        let m = model(Graph::path(3).unwrap(), 2.0);
        let x = NodeSet::from_indices(&[0, 2]);
        assert!((m.flip_cost(x, 1) - 3.0).abs() < 1e-12);
        assert!((m.flip_cost(x, 0) - 1.0).abs() < 1e-12);
        let y = x.flipped(1);
        assert!((m.flip_cost(x, 1) + m.flip_cost(y, 1)).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_delta() {
        let inst = ProblemInstance::new(Graph::path(2).unwrap(), 2.0).unwrap();
        assert!(TransverseFieldModel::from_instance(&inst, Some(&[1.0, 0.0])).is_err());
        assert!(TransverseFieldModel::from_instance(&inst, Some(&[1.0])).is_err());
    }
}
