use alloc::vec::Vec;
use nalgebra::SymmetricEigen;

use super::krylov::{fix_sign, lowest_pairs, KrylovOptions};
use super::operator::Hamiltonian;
use crate::ising::{Schedule, TransverseFieldModel};
use crate::math;
use crate::{Error, Result};

pub const DEFAULT_DENSE_CAP: usize = 12;
pub const DEFAULT_ITERATIVE_CAP: usize = 24;
/// Largest `n` that [`Method::Auto`] sends to the dense path.
pub const AUTO_DENSE_MAX: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    /// Dense for `n <= AUTO_DENSE_MAX`, iterative above.
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverConfig {
    pub method: Method,
    pub dense_cap: usize,
    pub iterative_cap: usize,
    /// Residual tolerance relative to a bound on `‖H‖`.
    pub residual_tol: f64,
    pub max_basis: usize,
    pub max_steps: usize,
    /// Ritz vectors tracked beyond the requested count, so clustered
    /// levels above the wanted ones do not stall convergence.
    pub guard_vectors: usize,
    /// Seed for random start vectors.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            method: Method::Auto,
            dense_cap: DEFAULT_DENSE_CAP,
            iterative_cap: DEFAULT_ITERATIVE_CAP,
            residual_tol: 1e-9,
            max_basis: 24,
            max_steps: 5000,
            guard_vectors: 1,
            seed: 0,
        }
    }
}

/// Lowest eigenvalues (ascending) with orthonormal eigenvectors over the
/// `2^n` computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
}

impl Eigenpairs {
    pub fn gap(&self) -> f64 {
        (self.values[1] - self.values[0]).max(0.0)
    }
}

/// Eigensolver bound to one model and schedule; the problem diagonal is
/// built once and reused across `s`.
#[derive(Debug, Clone)]
pub struct SpectralSolver<'a> {
    schedule: &'a Schedule,
    ham: Hamiltonian,
    cfg: SolverConfig,
    dense: bool,
}

impl<'a> SpectralSolver<'a> {
    pub fn new(model: &TransverseFieldModel, schedule: &'a Schedule, cfg: SolverConfig) -> Result<Self> {
        let n = model.n();
        let dense = match cfg.method {
            Method::Dense => true,
            Method::Iterative => false,
            Method::Auto => n <= AUTO_DENSE_MAX.min(cfg.dense_cap),
        };
        let (cap, knob) = if dense {
            (cfg.dense_cap, "dense_cap")
        } else {
            (cfg.iterative_cap, "iterative_cap")
        };
        if n > cap {
            return Err(Error::Size {
                what: "qubit count",
                actual: n,
                cap,
                knob,
            });
        }
        Ok(SpectralSolver {
            schedule,
            ham: Hamiltonian::new(model),
            cfg,
            dense,
        })
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.ham
    }

    pub fn schedule(&self) -> &Schedule {
        self.schedule
    }

    pub fn n(&self) -> usize {
        self.ham.n()
    }

    pub fn at(&self, s: f64, count: usize) -> Result<Eigenpairs> {
        self.at_with_start(s, count, &[])
    }

    /// Lowest `count` pairs of `H(s)`; `start` vectors (for example the
    /// pairs from a nearby `s`) seed the iterative solver.
    pub fn at_with_start(&self, s: f64, count: usize, start: &[Vec<f64>]) -> Result<Eigenpairs> {
        let v = self.schedule.values(s)?;
        if count == 0 {
            return Err(Error::input("eigenpair count must be positive"));
        }
        let count = count.min(self.ham.dim());
        if v.a == 0.0 {
            return Ok(self.diagonal_pairs(v.b, count));
        }
        if self.dense {
            return Ok(self.dense_pairs(v.a, v.b, count));
        }
        let tol = self.cfg.residual_tol * self.ham.norm_bound(v.a, v.b);
        let diagonal: Vec<f64> = self.ham.problem_diagonal().iter().map(|d| v.b * d).collect();
        let res = lowest_pairs(
            |x, y| self.ham.apply(v.a, v.b, x, y),
            self.ham.dim(),
            count,
            start,
            Some(&diagonal),
            KrylovOptions {
                tol,
                max_basis: self.cfg.max_basis,
                max_steps: self.cfg.max_steps,
                guard: self.cfg.guard_vectors,
                seed: self.cfg.seed,
            },
        )?;
        Ok(Eigenpairs {
            values: res.values,
            vectors: res.vectors,
            residuals: res.residuals,
        })
    }

    /// `H = b H_P` is diagonal: sorted diagonal with unit vectors, lowest
    /// bitmask first among equal energies.
    fn diagonal_pairs(&self, b: f64, count: usize) -> Eigenpairs {
        let diag = self.ham.problem_diagonal();
        let mut order: Vec<usize> = (0..diag.len()).collect();
        order.sort_by(|&x, &y| (b * diag[x]).total_cmp(&(b * diag[y])).then(x.cmp(&y)));
        let values = order[..count].iter().map(|&k| b * diag[k]).collect();
        let vectors = order[..count]
            .iter()
            .map(|&k| {
                let mut e = alloc::vec![0.0; diag.len()];
                e[k] = 1.0;
                e
            })
            .collect();
        Eigenpairs {
            values,
            vectors,
            residuals: alloc::vec![0.0; count],
        }
    }

    fn dense_pairs(&self, a: f64, b: f64, count: usize) -> Eigenpairs {
        let eig = SymmetricEigen::new(self.ham.dense(a, b));
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
        let mut values = Vec::with_capacity(count);
        let mut vectors = Vec::with_capacity(count);
        let mut residuals = Vec::with_capacity(count);
        let mut hv = alloc::vec![0.0; self.ham.dim()];
        for &c in &order[..count] {
            let mut v: Vec<f64> = eig.eigenvectors.column(c).iter().copied().collect();
            fix_sign(&mut v);
            let theta = eig.eigenvalues[c];
            self.ham.apply(a, b, &v, &mut hv);
            math::axpy(-theta, &v, &mut hv);
            residuals.push(math::norm(&hv));
            values.push(theta);
            vectors.push(v);
        }
        Eigenpairs {
            values,
            vectors,
            residuals,
        }
    }
}

/// Lowest `count` eigenpairs of `H(s) = A(s) H_B + B(s) H_P`.
pub fn lowest_eigenpairs(
    model: &TransverseFieldModel,
    schedule: &Schedule,
    s: f64,
    count: usize,
    cfg: &SolverConfig,
) -> Result<Eigenpairs> {
    SpectralSolver::new(model, schedule, *cfg)?.at(s, count)
}
