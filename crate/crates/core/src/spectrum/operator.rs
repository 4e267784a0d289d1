use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::graphs::NodeSet;
use crate::ising::TransverseFieldModel;
use crate::math;

/// Matrix-free `a H_B + b H_P` on the full `2^n` computational basis.
///
/// Basis index `k` is the bitmask of the state: bit `i` set means qubit `i`
/// has `σz = +1` (node `i` in the set). `H_P` is stored as its diagonal and
/// `H_B = -Σ Δ_i σx_i` is applied as a bit-flip stencil.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    n: usize,
    diag: Vec<f64>,
    delta: Vec<f64>,
}

impl Hamiltonian {
    pub fn new(model: &TransverseFieldModel) -> Self {
        let n = model.n();
        let diag = (0..1u64 << n)
            .map(|b| model.diagonal_energy(NodeSet::from_bits(b)))
            .collect();
        Hamiltonian {
            n,
            diag,
            delta: model.delta().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Diagonal of `H_P`.
    pub fn problem_diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// `y = (a H_B + b H_P) x`.
    pub fn apply(&self, a: f64, b: f64, x: &[f64], y: &mut [f64]) {
        for ((yk, xk), dk) in y.iter_mut().zip(x).zip(&self.diag) {
            *yk = b * dk * xk;
        }
        if a == 0.0 {
            return;
        }
        let dim = self.dim();
        for (i, d) in self.delta.iter().enumerate() {
            let c = a * d;
            let stride = 1usize << i;
            for base in (0..dim).step_by(2 * stride) {
                let (lo, hi) = (base, base + stride);
                for k in 0..stride {
                    let (u, v) = (x[lo + k], x[hi + k]);
                    y[lo + k] -= c * v;
                    y[hi + k] -= c * u;
                }
            }
        }
    }

    /// Upper bound on `‖a H_B + b H_P‖₂`.
    pub fn norm_bound(&self, a: f64, b: f64) -> f64 {
        let off: f64 = self.delta.iter().sum::<f64>() * math::abs(a);
        let diag = self.diag.iter().fold(0.0f64, |m, v| m.max(math::abs(*v))) * math::abs(b);
        (off + diag).max(f64::MIN_POSITIVE)
    }

    /// Dense matrix, for small systems and test oracles.
    pub fn dense(&self, a: f64, b: f64) -> DMatrix<f64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            m[(k, k)] = b * self.diag[k];
            for (i, d) in self.delta.iter().enumerate() {
                m[(k, k ^ (1 << i))] = -a * d;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{Graph, ProblemInstance};

    #[test]
    fn matvec_matches_dense() {
        let inst = ProblemInstance::new(Graph::path(5).unwrap(), 2.0).unwrap();
        let model = TransverseFieldModel::from_instance(&inst, Some(&[0.5, 1.0, 1.5, 2.0, 0.7])).unwrap();
        let h = Hamiltonian::new(&model);
        let x: Vec<f64> = (0..32).map(|k| ((k * 7 % 11) as f64) - 5.0).collect();
        let mut y = alloc::vec![0.0; 32];
        h.apply(0.3, 0.8, &x, &mut y);
        let dense = h.dense(0.3, 0.8) * nalgebra::DVector::from_vec(x);
        for k in 0..32 {
            assert!((y[k] - dense[k]).abs() < 1e-12);
        }
        assert!((h.dense(0.3, 0.8) - h.dense(0.3, 0.8).transpose()).norm() == 0.0);
    }
}
