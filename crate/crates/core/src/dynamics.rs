//! Crank-Nicolson propagation after a sudden uniform field.
//!
//! At t=0 the static potential gains a linear term `+eps*x` (the field
//! pushes the electron toward -x; pass a negative strength to flip it) and
//! the ground state is no longer stationary. Each step applies the Cayley
//! form `psi <- (1 + i dt/2 H)^{-1} (1 - i dt/2 H) psi`, which conserves
//! the norm exactly up to linear-solver rounding, so trajectories stay
//! physical over arbitrarily many steps.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::potentials::Potential;
use crate::solver1e::{build_hamiltonian, Wavefunction1e};
use crate::solver2e::{density_from_1e, Density};
use crate::tridiag::{ComplexTridiagLu, SymTridiagonal};

/// `V(x) + eps * x`.
pub fn perturbed_potential(potential: &Potential, epsilon: f64) -> Result<Potential> {
    if !epsilon.is_finite() {
        return Err(invalid("field strength must be finite"));
    }
    let grid = potential.grid();
    let values = potential
        .values()
        .iter()
        .zip(grid.points())
        .map(|(v, x)| v + epsilon * x)
        .collect();
    Potential::new(grid, values)
}

#[derive(Debug, Clone)]
pub struct PropagationConfig {
    /// Field strength eps in a.u.; the perturbation is `+eps*x`.
    pub field_strength: f64,
    pub dt: f64,
    pub total_time: f64,
    /// Steps between stored snapshots (t=0 is always stored).
    pub record_stride: usize,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            field_strength: 0.01,
            dt: 0.01,
            total_time: 10.0,
            record_stride: 10,
        }
    }
}

impl PropagationConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.field_strength.is_finite() {
            return Err(invalid("field strength must be finite"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt must be positive"));
        }
        if !(self.total_time >= self.dt && self.total_time.is_finite()) {
            return Err(invalid("total time must be at least one step"));
        }
        if self.record_stride == 0 {
            return Err(invalid("record stride must be at least 1"));
        }
        Ok(())
    }

    pub fn num_steps(&self) -> usize {
        let steps = libm::round(self.total_time / self.dt);
        (steps as usize).max(1)
    }
}

/// Snapshots of one propagated state: times are `k * stride * dt` starting
/// at 0; states stay unit normalized; densities, norms, and `<H>` (with the
/// field term) ride along for export.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<Wavefunction1e>,
    densities: Vec<Density>,
    norms: Vec<f64>,
    energies: Vec<f64>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[Wavefunction1e] {
        &self.states
    }

    pub fn densities(&self) -> &[Density] {
        &self.densities
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `<psi|H|psi>` for the Hamiltonian of `potential`.
pub fn expectation_energy(state: &Wavefunction1e, potential: &Potential) -> Result<f64> {
    if state.grid() != potential.grid() {
        return Err(Error::GridMismatch);
    }
    let h = build_hamiltonian(potential);
    let n = potential.grid().num_points();
    let interior: Vec<Complex64> = state.amplitudes()[1..n - 1].to_vec();
    Ok(interior_energy(&h, &interior, potential.grid().spacing()))
}

fn interior_energy(h: &SymTridiagonal, psi: &[Complex64], dx: f64) -> f64 {
    let re: Vec<f64> = psi.iter().map(|a| a.re).collect();
    let im: Vec<f64> = psi.iter().map(|a| a.im).collect();
    let mut hre = vec![0.0; psi.len()];
    let mut him = vec![0.0; psi.len()];
    h.matvec(&re, &mut hre);
    h.matvec(&im, &mut him);
    let acc: f64 = (0..psi.len())
        .map(|i| re[i] * hre[i] + im[i] * him[i])
        .sum();
    acc * dx
}

/// Propagate `initial` under `potential` plus the sudden field.
pub fn propagate(
    initial: &Wavefunction1e,
    potential: &Potential,
    config: &PropagationConfig,
) -> Result<Trajectory> {
    config.validate()?;
    if initial.grid() != potential.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = potential.grid();
    let n = grid.num_points();
    let dx = grid.spacing();
    let perturbed = perturbed_potential(potential, config.field_strength)?;
    let h = build_hamiltonian(&perturbed);
    let m = n - 2;

    let half_dt = 0.5 * config.dt;
    let a_diag: Vec<Complex64> = h
        .diag()
        .iter()
        .map(|d| Complex64::new(1.0, half_dt * d))
        .collect();
    let a_off: Vec<Complex64> = h
        .off()
        .iter()
        .map(|o| Complex64::new(0.0, half_dt * o))
        .collect();
    let lu = ComplexTridiagLu::factor(&a_diag, &a_off);

    let mut psi: Vec<Complex64> = initial.amplitudes()[1..n - 1].to_vec();
    let mut trajectory = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        densities: Vec::new(),
        norms: Vec::new(),
        energies: Vec::new(),
    };
    record(&mut trajectory, 0.0, &psi, grid, dx, &h)?;

    let num_steps = config.num_steps();
    let mut rhs = vec![Complex64::new(0.0, 0.0); m];
    for step in 1..=num_steps {
        for i in 0..m {
            // B = conj(A) applied to psi: (1 - i dt/2 H) psi.
            let mut acc = a_diag[i].conj() * psi[i];
            if i > 0 {
                acc += a_off[i - 1].conj() * psi[i - 1];
            }
            if i + 1 < m {
                acc += a_off[i].conj() * psi[i + 1];
            }
            rhs[i] = acc;
        }
        lu.solve_in_place(&mut rhs)
            .map_err(|_| Error::LinearSolveFailed { step })?;
        core::mem::swap(&mut psi, &mut rhs);
        if step % config.record_stride == 0 {
            record(&mut trajectory, step as f64 * config.dt, &psi, grid, dx, &h)?;
        }
    }
    Ok(trajectory)
}

fn record(
    trajectory: &mut Trajectory,
    time: f64,
    psi: &[Complex64],
    grid: crate::grid::Grid,
    dx: f64,
    h: &SymTridiagonal,
) -> Result<()> {
    let mut amplitudes = Vec::with_capacity(psi.len() + 2);
    amplitudes.push(Complex64::new(0.0, 0.0));
    amplitudes.extend_from_slice(psi);
    amplitudes.push(Complex64::new(0.0, 0.0));
    let state = Wavefunction1e::new(grid, amplitudes)?;
    trajectory.times.push(time);
    trajectory.norms.push(state.norm());
    trajectory.energies.push(interior_energy(h, psi, dx));
    trajectory.densities.push(density_from_1e(&state));
    trajectory.states.push(state);
    Ok(())
}
