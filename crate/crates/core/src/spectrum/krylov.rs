//! Restarted block Krylov eigensolver for the lowest eigenpairs of a real
//! symmetric operator that is only available as a matrix-vector product.
//!
//! Each step expands the search space with the residuals of the current
//! lowest Ritz pairs (which spans the same space as a block Lanczos step),
//! optionally preconditioned by the operator diagonal as in Davidson's
//! method, fully reorthogonalizes (classical Gram-Schmidt, two passes) and performs
//! a Rayleigh-Ritz projection. Working with a block one wider than the
//! number of wanted pairs keeps degenerate and nearly degenerate levels
//! apart. When the basis is full it is collapsed onto the lowest Ritz
//! vectors.

use alloc::vec::Vec;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::math::{self, axpy, dot, norm, scale};
use crate::rng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub(crate) struct KrylovOptions {
    /// Absolute residual tolerance `‖H y - θ y‖`.
    pub tol: f64,
    pub max_basis: usize,
    pub max_steps: usize,
    /// Extra Ritz vectors carried beyond the wanted ones.
    pub guard: usize,
    pub seed: u64,
}

/// Davidson denominators smaller than this are clamped.
const PRECOND_FLOOR: f64 = 1e-2;

pub(crate) struct KrylovResult {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
}

struct Space {
    basis: Vec<Vec<f64>>,
    images: Vec<Vec<f64>>,
    /// `proj[i][j] = basis[i] · images[j]` for `j <= i`.
    proj: Vec<Vec<f64>>,
}

impl Space {
    fn len(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormalizes `v` against the basis and appends it; returns false
    /// when `v` is (numerically) already in the span.
    fn push<F: Fn(&[f64], &mut [f64])>(&mut self, mut v: Vec<f64>, apply: &F) -> bool {
        let start = norm(&v);
        if start == 0.0 {
            return false;
        }
        // second pass only when the first removed most of the vector
        let mut before = start;
        let mut remaining = start;
        for _ in 0..2 {
            let coeffs: Vec<f64> = self.basis.iter().map(|b| dot(b, &v)).collect();
            for (c, b) in coeffs.iter().zip(&self.basis) {
                axpy(-c, b, &mut v);
            }
            remaining = norm(&v);
            if remaining > 0.7 * before {
                break;
            }
            before = remaining;
        }
        if remaining <= 1e-10 * start {
            return false;
        }
        scale(1.0 / remaining, &mut v);
        let mut hv = alloc::vec![0.0; v.len()];
        apply(&v, &mut hv);
        let mut row: Vec<f64> = self.basis.iter().map(|b| dot(b, &hv)).collect();
        row.push(dot(&v, &hv));
        self.basis.push(v);
        self.images.push(hv);
        self.proj.push(row);
        true
    }

    fn projected(&self) -> DMatrix<f64> {
        let k = self.len();
        DMatrix::from_fn(k, k, |i, j| if j <= i { self.proj[i][j] } else { self.proj[j][i] })
    }

    /// Ritz value, vector, image and residual norm for column `col`.
    fn ritz(&self, eig: &SymmetricEigen<f64, nalgebra::Dyn>, col: usize) -> (f64, Vec<f64>, Vec<f64>, f64) {
        let theta = eig.eigenvalues[col];
        let dim = self.basis[0].len();
        let mut y = alloc::vec![0.0; dim];
        let mut hy = alloc::vec![0.0; dim];
        for (i, (b, hb)) in self.basis.iter().zip(&self.images).enumerate() {
            let c = eig.eigenvectors[(i, col)];
            axpy(c, b, &mut y);
            axpy(c, hb, &mut hy);
        }
        let mut r = hy.clone();
        axpy(-theta, &y, &mut r);
        let rn = norm(&r);
        (theta, y, hy, rn)
    }
}

fn sorted_columns(eig: &SymmetricEigen<f64, nalgebra::Dyn>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    idx
}

pub(crate) fn lowest_pairs<F: Fn(&[f64], &mut [f64])>(
    apply: F,
    dim: usize,
    count: usize,
    start: &[Vec<f64>],
    diagonal: Option<&[f64]>,
    opts: KrylovOptions,
) -> Result<KrylovResult> {
    let count = count.min(dim);
    let block = (count + opts.guard.max(1)).min(dim);
    let max_basis = opts.max_basis.max(3 * block).min(dim);
    let mut rng = rng::stream(opts.seed, rng::streams::EIGEN_START);
    let random_vec = |rng: &mut rng::StreamRng| -> Vec<f64> { (0..dim).map(|_| rng.random::<f64>() - 0.5).collect() };

    let mut space = Space {
        basis: Vec::with_capacity(max_basis),
        images: Vec::with_capacity(max_basis),
        proj: Vec::with_capacity(max_basis),
    };
    for v in start.iter().take(block) {
        if v.len() == dim {
            space.push(v.clone(), &apply);
        }
    }
    while space.len() < block {
        let v = random_vec(&mut rng);
        space.push(v, &apply);
    }

    let mut last_residuals = Vec::new();
    for _ in 0..opts.max_steps {
        let eig = SymmetricEigen::new(space.projected());
        let order = sorted_columns(&eig);
        let wanted = block.min(space.len());
        let pairs: Vec<_> = order[..wanted].iter().map(|&c| space.ritz(&eig, c)).collect();
        last_residuals = pairs.iter().take(count).map(|p| p.3).collect();
        let converged = space.len() == dim || last_residuals.iter().all(|&r| r <= opts.tol);
        if converged {
            let mut values = Vec::with_capacity(count);
            let mut vectors = Vec::with_capacity(count);
            for (theta, mut y, _, _) in pairs.into_iter().take(count) {
                let nrm = norm(&y);
                scale(1.0 / nrm, &mut y);
                fix_sign(&mut y);
                values.push(theta);
                vectors.push(y);
            }
            return Ok(KrylovResult {
                values,
                vectors,
                residuals: last_residuals,
            });
        }

        let expansions: Vec<Vec<f64>> = pairs
            .iter()
            .filter(|p| p.3 > opts.tol)
            .map(|(theta, y, hy, _)| {
                let mut r = hy.clone();
                axpy(-theta, y, &mut r);
                if let Some(d) = diagonal {
                    for (rk, dk) in r.iter_mut().zip(d) {
                        let den = dk - theta;
                        *rk /= if math::abs(den) < PRECOND_FLOOR {
                            PRECOND_FLOOR.copysign(den)
                        } else {
                            den
                        };
                    }
                }
                r
            })
            .collect();

        if space.len() + expansions.len() > max_basis {
            let keep = (2 * block).max(max_basis / 3).min(space.len());
            let mut fresh = Space {
                basis: Vec::with_capacity(max_basis),
                images: Vec::with_capacity(max_basis),
                proj: Vec::with_capacity(max_basis),
            };
            for &c in &order[..keep] {
                let (_, y, _, _) = space.ritz(&eig, c);
                fresh.push(y, &apply);
            }
            space = fresh;
        }
        let mut added = 0;
        for r in expansions {
            if space.len() >= max_basis {
                break;
            }
            if space.push(r, &apply) {
                added += 1;
            }
        }
        if added == 0 && space.len() < dim {
            let v = random_vec(&mut rng);
            space.push(v, &apply);
        }
    }
    Err(Error::Numerical {
        method: "block Krylov eigensolver",
        residuals: last_residuals,
    })
}

/// Makes the vector's largest-magnitude-sum direction positive: the sum of
/// entries when it is clearly nonzero, otherwise the first significant
/// entry.
pub(crate) fn fix_sign(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    let flip = if s.abs() > 1e-8 {
        s < 0.0
    } else {
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        v.iter().find(|x| x.abs() > 0.5 * peak).is_some_and(|x| *x < 0.0)
    };
    if flip {
        scale(-1.0, v);
    }
}
