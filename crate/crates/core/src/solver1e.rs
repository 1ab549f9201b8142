//! Exact single-electron bound states.
//!
//! The Hamiltonian is H = -1/2 d^2/dx^2 + V(x) discretized with the 3-point
//! stencil and Dirichlet walls at the grid ends (the confining envelope
//! makes amplitudes there negligible anyway). A 5-point upgrade would only
//! touch [`build_hamiltonian`]. Atomic units throughout.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::grid::Grid;
use crate::math;
use crate::potentials::Potential;
use crate::tridiag::{pivot_index, SymTridiagonal};

/// A single-electron state sampled on the grid, unit normalized:
/// `dx * sum |psi_i|^2 = 1`, boundary amplitudes exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction1e {
    grid: Grid,
    amplitudes: Vec<Complex64>,
    norm_target: f64,
}

impl Wavefunction1e {
    pub fn new(grid: Grid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.num_points() {
            return Err(invalid("amplitudes must cover every grid point"));
        }
        if amplitudes[0].norm_sqr() != 0.0 || amplitudes[amplitudes.len() - 1].norm_sqr() != 0.0 {
            return Err(invalid("boundary amplitudes must be zero"));
        }
        let wf = Self {
            grid,
            amplitudes,
            norm_target: 1.0,
        };
        if (wf.norm() - 1.0).abs() > 1e-10 {
            return Err(invalid("wavefunction must be unit normalized"));
        }
        Ok(wf)
    }

    /// Wrap a real interior eigenvector (unit Euclidean norm) into a grid
    /// wavefunction: scale by 1/sqrt(dx), zero-pad the walls, and fix the
    /// global phase so the largest-magnitude amplitude is real positive.
    pub(crate) fn from_interior_real(grid: Grid, interior: &[f64]) -> Self {
        debug_assert_eq!(interior.len() + 2, grid.num_points());
        let sign = if interior[pivot_index(interior)] < 0.0 {
            -1.0
        } else {
            1.0
        };
        let scale = sign / math::sqrt(grid.spacing());
        let mut amplitudes = Vec::with_capacity(grid.num_points());
        amplitudes.push(Complex64::new(0.0, 0.0));
        amplitudes.extend(interior.iter().map(|v| Complex64::new(v * scale, 0.0)));
        amplitudes.push(Complex64::new(0.0, 0.0));
        Self {
            grid,
            amplitudes,
            norm_target: 1.0,
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_target(&self) -> f64 {
        self.norm_target
    }

    /// `sqrt(dx * sum |psi_i|^2)`.
    pub fn norm(&self) -> f64 {
        let sum: f64 = self.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        math::sqrt(self.grid.spacing() * sum)
    }

    /// `dx * sum conj(self_i) * other_i`.
    pub fn overlap(&self, other: &Wavefunction1e) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.amplitudes.iter().zip(&other.amplitudes) {
            acc += a.conj() * b;
        }
        Ok(acc * self.grid.spacing())
    }
}

/// The lowest eigenpairs of one Hamiltonian, ascending in energy.
#[derive(Debug, Clone)]
pub struct Spectrum {
    energies: Vec<f64>,
    states: Vec<Wavefunction1e>,
}

impl Spectrum {
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn states(&self) -> &[Wavefunction1e] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energy(&self, k: usize) -> f64 {
        self.energies[k]
    }

    pub fn state(&self, k: usize) -> &Wavefunction1e {
        &self.states[k]
    }
}

/// Discretized H over the interior points: diagonal `1/dx^2 + V_i`,
/// off-diagonal `-1/(2 dx^2)`. Symmetric by construction.
pub fn build_hamiltonian(potential: &Potential) -> SymTridiagonal {
    let grid = potential.grid();
    let dx = grid.spacing();
    let inv_dx2 = 1.0 / (dx * dx);
    let interior = grid.num_points() - 2;
    let diag: Vec<f64> = (0..interior)
        .map(|i| inv_dx2 + potential.value(i + 1))
        .collect();
    let off = alloc::vec![-0.5 * inv_dx2; interior.saturating_sub(1)];
    SymTridiagonal::new(diag, off).expect("interior grid has at least one point")
}

/// Lowest eigenpair.
pub fn ground_state(potential: &Potential) -> Result<(f64, Wavefunction1e)> {
    let spectrum = lowest_k(potential, 1)?;
    let energy = spectrum.energy(0);
    let state = spectrum.states.into_iter().next().expect("k=1 spectrum");
    Ok((energy, state))
}

/// The `k` lowest eigenpairs as a [`Spectrum`].
pub fn lowest_k(potential: &Potential, k: usize) -> Result<Spectrum> {
    let grid = potential.grid();
    if k == 0 || k >= grid.num_points() - 2 {
        return Err(invalid("eigenpair count must be in 1..num_points-2"));
    }
    let h = build_hamiltonian(potential);
    let (energies, vectors) = h.lowest_eigenpairs(k)?;
    let states = vectors
        .iter()
        .map(|v| Wavefunction1e::from_interior_real(grid, v))
        .collect();
    Ok(Spectrum { energies, states })
}
