//! Symmetric tridiagonal eigensolver and pivoted tridiagonal solves.
//!
//! Eigenvalues come from Sturm-sequence bisection (robust for any spectrum,
//! no convergence surprises), eigenvectors from shifted inverse iteration.
//! The linear solver is an LU factorization with partial pivoting over a
//! tridiagonal band (one fill-in superdiagonal), generic over real and
//! complex scalars so the same code backs inverse iteration and the
//! Crank-Nicolson propagator.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::rng::SplitMix64;

/// Scalar abstraction for the pivoted solver.
pub(crate) trait Scalar:
    Copy
    + core::ops::Add<Output = Self>
    + core::ops::Sub<Output = Self>
    + core::ops::Mul<Output = Self>
    + core::ops::Div<Output = Self>
{
    fn zero() -> Self;
    fn mag2(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn mag2(self) -> f64 {
        self * self
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn mag2(self) -> f64 {
        self.norm_sqr()
    }
}

/// LU factors of a tridiagonal matrix with partial pivoting. Pivoting fills
/// in a second superdiagonal; a swap flag per step records the permutation.
pub(crate) struct PivotedLu<T> {
    d: Vec<T>,
    du: Vec<T>,
    du2: Vec<T>,
    dl: Vec<T>,
    swapped: Vec<bool>,
}

impl<T: Scalar> PivotedLu<T> {
    /// Factor the matrix with main diagonal `d`, subdiagonal `lower` and
    /// superdiagonal `upper` (both one shorter than `d`).
    pub fn factor(mut d: Vec<T>, lower: &[T], upper: &[T]) -> Self {
        let n = d.len();
        debug_assert_eq!(lower.len(), n.saturating_sub(1));
        debug_assert_eq!(upper.len(), n.saturating_sub(1));
        let mut dl = lower.to_vec();
        let mut du = upper.to_vec();
        let mut du2 = vec![T::zero(); n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if dl[i].mag2() <= d[i].mag2() {
                if d[i].mag2() > 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] = d[i + 1] - fact * du[i];
                } else {
                    dl[i] = T::zero();
                }
            } else {
                swapped[i] = true;
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = T::zero() - fact * du[i + 1];
                }
            }
        }
        Self {
            d,
            du,
            du2,
            dl,
            swapped,
        }
    }

    /// Solve in place. Fails on an exactly zero pivot (singular matrix).
    pub fn solve_in_place(&self, b: &mut [T]) -> Result<()> {
        let n = self.d.len();
        debug_assert_eq!(b.len(), n);
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] = b[i + 1] - self.dl[i] * b[i];
            }
        }
        for i in (0..n).rev() {
            if self.d[i].mag2() == 0.0 {
                return Err(Error::LinearSolveFailed { step: i });
            }
            let mut x = b[i];
            if i + 1 < n {
                x = x - self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                x = x - self.du2[i] * b[i + 2];
            }
            b[i] = x / self.d[i];
        }
        Ok(())
    }
}

/// Factored complex tridiagonal system, reusable across many solves.
pub struct ComplexTridiagLu(PivotedLu<Complex64>);

impl ComplexTridiagLu {
    pub fn factor(diag: &[Complex64], off: &[Complex64]) -> Self {
        Self(PivotedLu::factor(diag.to_vec(), off, off))
    }

    pub fn solve_in_place(&self, b: &mut [Complex64]) -> Result<()> {
        self.0.solve_in_place(b)
    }
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    pivmin: f64,
}

/// Accept an inverse-iteration vector when its residual drops below
/// `RESIDUAL_FACTOR * eps * ||T||_inf`.
const RESIDUAL_FACTOR: f64 = 1e3;
const MAX_INVERSE_ITERATIONS: usize = 30;

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(invalid("tridiagonal needs n diagonal, n-1 off entries"));
        }
        if !diag.iter().chain(&off).all(|x| x.is_finite()) {
            return Err(invalid("tridiagonal entries must be finite"));
        }
        let pivmin = f64::MIN_POSITIVE * off.iter().fold(1.0_f64, |m, b| m.max(b * b));
        Ok(Self { diag, off, pivmin })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn matvec(&self, v: &[f64], out: &mut [f64]) {
        let n = self.n();
        debug_assert_eq!(v.len(), n);
        debug_assert_eq!(out.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * v[i + 1];
            }
            out[i] = acc;
        }
    }

    pub fn inf_norm(&self) -> f64 {
        let n = self.n();
        (0..n).fold(0.0_f64, |m, i| {
            let mut row = self.diag[i].abs();
            if i > 0 {
                row += self.off[i - 1].abs();
            }
            if i + 1 < n {
                row += self.off[i].abs();
            }
            m.max(row)
        })
    }

    /// Number of eigenvalues strictly below `x`, by the Sturm sequence of
    /// the LDL^T recurrence, with the usual tiny-pivot guard.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.n() {
            let off2 = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1]
            };
            d = self.diag[i] - x - off2 / d;
            if d.abs() < self.pivmin {
                d = -self.pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        let pad = (hi - lo).max(1.0) * 1e-12;
        (lo - pad, hi + pad)
    }

    /// The k-th smallest eigenvalue (0-based), bisected to machine precision.
    pub fn kth_eigenvalue(&self, k: usize) -> f64 {
        debug_assert!(k < self.n());
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `k` lowest eigenpairs, ascending, eigenvectors orthonormal in the
    /// plain Euclidean dot product.
    pub fn lowest_eigenpairs(&self, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        if k == 0 || k > self.n() {
            return Err(invalid("eigenpair count must be in 1..=n"));
        }
        let mut energies = Vec::with_capacity(k);
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
        for j in 0..k {
            let lambda = self.kth_eigenvalue(j);
            let v = self.inverse_iteration(lambda, &vectors, j as u64)?;
            let mut tv = vec![0.0; self.n()];
            self.matvec(&v, &mut tv);
            let rayleigh: f64 = v.iter().zip(&tv).map(|(a, b)| a * b).sum();
            energies.push(rayleigh);
            vectors.push(v);
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
        let energies = order.iter().map(|&i| energies[i]).collect();
        let vectors = order
            .iter()
            .map(|&i| core::mem::take(&mut vectors[i]))
            .collect();
        Ok((energies, vectors))
    }

    fn inverse_iteration(
        &self,
        lambda: f64,
        previous: &[Vec<f64>],
        stream: u64,
    ) -> Result<Vec<f64>> {
        let n = self.n();
        let tnorm = self.inf_norm().max(1.0);
        let tol = RESIDUAL_FACTOR * f64::EPSILON * tnorm;
        let mut rng = SplitMix64::new(0x5EED_0000 ^ stream);
        let mut best_residual = f64::INFINITY;

        // Retry with a slightly larger shift perturbation if the factored
        // matrix turns out exactly singular.
        for attempt in 0..4 {
            let shift = lambda + attempt as f64 * 10.0 * f64::EPSILON * tnorm;
            let shifted: Vec<f64> = self.diag.iter().map(|a| a - shift).collect();
            let lu = PivotedLu::factor(shifted, &self.off, &self.off);
            let mut v: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
            normalize(&mut v);
            let mut tv = vec![0.0; n];
            for iter in 0..MAX_INVERSE_ITERATIONS {
                if lu.solve_in_place(&mut v).is_err() {
                    break;
                }
                for p in previous {
                    let dot: f64 = v.iter().zip(p).map(|(a, b)| a * b).sum();
                    for (x, y) in v.iter_mut().zip(p) {
                        *x -= dot * y;
                    }
                }
                let norm2: f64 = v.iter().map(|x| x * x).sum();
                if !(norm2 > 0.0) || !norm2.is_finite() {
                    v = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
                    normalize(&mut v);
                    continue;
                }
                let inv = 1.0 / crate::math::sqrt(norm2);
                for x in v.iter_mut() {
                    *x *= inv;
                }
                self.matvec(&v, &mut tv);
                let residual = crate::math::sqrt(
                    v.iter()
                        .zip(&tv)
                        .map(|(x, hx)| (hx - lambda * x) * (hx - lambda * x))
                        .sum(),
                );
                best_residual = best_residual.min(residual);
                if residual <= tol {
                    if v[pivot_index(&v)] < 0.0 {
                        for x in v.iter_mut() {
                            *x = -*x;
                        }
                    }
                    return Ok(v);
                }
                let _ = iter;
            }
        }
        Err(Error::NonConvergence {
            iterations: 4 * MAX_INVERSE_ITERATIONS,
            residual: best_residual,
        })
    }
}

fn normalize(v: &mut [f64]) {
    let norm2: f64 = v.iter().map(|x| x * x).sum();
    if norm2 > 0.0 {
        let inv = 1.0 / crate::math::sqrt(norm2);
        for x in v.iter_mut() {
            *x *= inv;
        }
    }
}

/// Index of the entry with the largest magnitude (first on ties).
pub(crate) fn pivot_index(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}
