//! Matrix-free Lanczos for the lowest eigenpair of a symmetric operator.
//!
//! Full reorthogonalization keeps the Krylov basis clean (the basis is small
//! because the ground state converges long before the basis grows), and the
//! cheap `beta * |s_last|` Ritz estimate gates when the true residual is
//! worth forming.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::math;
use crate::rng::SplitMix64;
use crate::tridiag::SymTridiagonal;

/// A symmetric linear operator applied matrix-free.
pub trait SymOp {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[f64], out: &mut [f64]);
}

impl SymOp for SymTridiagonal {
    fn dim(&self) -> usize {
        self.n()
    }
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        self.matvec(v, out);
    }
}

#[derive(Debug, Clone)]
pub struct LanczosConfig {
    pub max_iterations: usize,
    pub residual_tol: f64,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            max_iterations: 400,
            residual_tol: 1e-9,
            seed: 0xA5C3_1B2D,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosResult {
    pub energy: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Lowest eigenpair of `op`. `start` seeds the Krylov space (a good guess
/// cuts the iteration count roughly in half); `None` uses a seeded random
/// vector. Converged when `||A y - theta y|| <= residual_tol`.
pub fn lowest_eigenpair<O: SymOp>(
    op: &O,
    start: Option<&[f64]>,
    config: &LanczosConfig,
) -> Result<LanczosResult> {
    let dim = op.dim();
    if dim == 0 {
        return Err(invalid("operator dimension must be positive"));
    }
    if let Some(s) = start {
        if s.len() != dim {
            return Err(invalid("start vector length must match operator dim"));
        }
    }
    let mut rng = SplitMix64::new(config.seed);
    let mut total_iterations = 0;
    let mut best_residual = f64::INFINITY;

    for restart in 0..3 {
        let mut q0 = match (restart, start) {
            (0, Some(s)) => s.to_vec(),
            _ => (0..dim).map(|_| rng.uniform(-1.0, 1.0)).collect(),
        };
        if normalize(&mut q0) == 0.0 {
            continue;
        }

        let mut basis: Vec<Vec<f64>> = vec![q0];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];
        let max_m = config.max_iterations.min(dim);

        for m in 1..=max_m {
            total_iterations += 1;
            let q = &basis[m - 1];
            op.apply(q, &mut w);
            let alpha: f64 = q.iter().zip(&w).map(|(a, b)| a * b).sum();
            alphas.push(alpha);
            for _ in 0..2 {
                for b in &basis {
                    let dot: f64 = b.iter().zip(&w).map(|(a, c)| a * c).sum();
                    for (x, y) in w.iter_mut().zip(b) {
                        *x -= dot * y;
                    }
                }
            }
            let beta = math::sqrt(w.iter().map(|x| x * x).sum());
            let exhausted = beta <= f64::EPSILON * alpha.abs().max(1.0) || m == max_m;

            if exhausted || m % 5 == 0 {
                let t = SymTridiagonal::new(alphas.clone(), betas.clone())
                    .expect("Lanczos recurrence yields a valid tridiagonal");
                let (thetas, s_vecs) = t.lowest_eigenpairs(1)?;
                let theta = thetas[0];
                let s = &s_vecs[0];
                let estimate = beta * s[s.len() - 1].abs();
                if estimate <= config.residual_tol || exhausted {
                    let mut y = vec![0.0; dim];
                    for (coeff, b) in s.iter().zip(&basis) {
                        for (x, v) in y.iter_mut().zip(b) {
                            *x += coeff * v;
                        }
                    }
                    normalize(&mut y);
                    let mut hy = vec![0.0; dim];
                    op.apply(&y, &mut hy);
                    let residual = math::sqrt(
                        hy.iter()
                            .zip(&y)
                            .map(|(hx, x)| (hx - theta * x) * (hx - theta * x))
                            .sum(),
                    );
                    best_residual = best_residual.min(residual);
                    if residual <= config.residual_tol {
                        return Ok(LanczosResult {
                            energy: theta,
                            vector: y,
                            residual,
                            iterations: total_iterations,
                        });
                    }
                }
            }
            if exhausted {
                break;
            }
            betas.push(beta);
            let mut next = w.clone();
            let inv = 1.0 / beta;
            for x in next.iter_mut() {
                *x *= inv;
            }
            basis.push(next);
        }
    }
    Err(Error::NonConvergence {
        iterations: total_iterations,
        residual: best_residual,
    })
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = math::sqrt(v.iter().map(|x| x * x).sum());
    if norm > 0.0 {
        let inv = 1.0 / norm;
        for x in v.iter_mut() {
            *x *= inv;
        }
    }
    norm
}
