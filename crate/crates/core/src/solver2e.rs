//! Two-electron ground states and densities, in two spin sectors.
//!
//! The spin-polarized sector carries a fully antisymmetric spatial
//! wavefunction, stored on the strict lower set of grid pairs
//! {(i,j): i < j}. Its interacting ground state comes from matrix-free
//! Lanczos over that pair basis with the soft interaction
//! `1/(|x - x'| + 1)`; the non-interacting one is the Slater determinant
//! of the two lowest orbitals.
//!
//! The spin-singlet sector puts both electrons in one spatial orbital:
//! exactly for non-interacting electrons (`product_ground_state`), and
//! self-consistently at the restricted mean-field level for interacting
//! ones (`mean_field_ground_state`).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::grid::Grid;
use crate::lanczos::{self, LanczosConfig, SymOp};
use crate::math;
use crate::potentials::Potential;
use crate::solver1e::{self, Wavefunction1e};

/// Index of pair `(i, j)`, `i < j`, in row-major strict-triangle order.
#[inline]
fn tri_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// An antisymmetric two-electron state, stored on the strict triangle of
/// its grid: `triangle[tri_index(i,j)] = psi(x_i, x_j)` for `i < j`, with
/// `psi(x_j, x_i) = -psi(x_i, x_j)` and zero diagonal implied. Unit
/// normalized: `2 dx^2 sum |triangle|^2 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction2e {
    grid: Grid,
    triangle: Vec<Complex64>,
}

impl Wavefunction2e {
    pub fn new(grid: Grid, triangle: Vec<Complex64>) -> Result<Self> {
        let n = grid.num_points();
        if triangle.len() != n * (n - 1) / 2 {
            return Err(invalid("triangle must cover every grid pair i < j"));
        }
        let wf = Self { grid, triangle };
        if (wf.norm() - 1.0).abs() > 1e-10 {
            return Err(invalid("wavefunction must be unit normalized"));
        }
        Ok(wf)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn triangle(&self) -> &[Complex64] {
        &self.triangle
    }

    /// Amplitude at any index pair, antisymmetry applied.
    pub fn amplitude(&self, i: usize, j: usize) -> Complex64 {
        use core::cmp::Ordering;
        let n = self.grid.num_points();
        match i.cmp(&j) {
            Ordering::Less => self.triangle[tri_index(i, j, n)],
            Ordering::Equal => Complex64::new(0.0, 0.0),
            Ordering::Greater => -self.triangle[tri_index(j, i, n)],
        }
    }

    /// `sqrt(dx^2 * sum_{ij} |psi|^2)` over the full square.
    pub fn norm(&self) -> f64 {
        let dx = self.grid.spacing();
        let sum: f64 = self.triangle.iter().map(|c| c.norm_sqr()).sum();
        math::sqrt(2.0 * dx * dx * sum)
    }

    /// `dx^2 * sum_{ij} conj(self) * other` over the full square.
    pub fn overlap(&self, other: &Wavefunction2e) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let dx = self.grid.spacing();
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.triangle.iter().zip(&other.triangle) {
            acc += a.conj() * b;
        }
        Ok(acc * (2.0 * dx * dx))
    }
}

/// An electron density on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    grid: Grid,
    values: Vec<f64>,
    electron_number: f64,
}

impl Density {
    pub fn new(grid: Grid, values: Vec<f64>, electron_number: f64) -> Result<Self> {
        if values.len() != grid.num_points() {
            return Err(invalid("density values must cover every grid point"));
        }
        if !values.iter().all(|v| v.is_finite() && *v >= 0.0) {
            return Err(invalid("density values must be finite and non-negative"));
        }
        let integral: f64 = values.iter().sum::<f64>() * grid.spacing();
        if (integral - electron_number).abs() > 1e-8 {
            return Err(invalid("density must integrate to the electron number"));
        }
        Ok(Self {
            grid,
            values,
            electron_number,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn electron_number(&self) -> f64 {
        self.electron_number
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.spacing()
    }
}

/// `n(x_i) = |psi_i|^2`, integrating to 1.
pub fn density_from_1e(psi: &Wavefunction1e) -> Density {
    let values = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    Density::new(psi.grid(), values, 1.0).expect("1e density integrates to its norm")
}

/// `n(x_i) = 2 dx sum_j |psi(x_i, x_j)|^2`, integrating to 2.
pub fn density_from_2e(psi: &Wavefunction2e) -> Density {
    let grid = psi.grid();
    let n = grid.num_points();
    let mut acc = vec![0.0; n];
    let mut t = 0;
    for i in 0..n {
        for j in i + 1..n {
            let s = psi.triangle()[t].norm_sqr();
            acc[i] += s;
            acc[j] += s;
            t += 1;
        }
    }
    let dx = grid.spacing();
    let values = acc.iter().map(|a| 2.0 * dx * a).collect();
    Density::new(grid, values, 2.0).expect("2e density integrates to 2")
}

/// A spin-singlet product state: both electrons share one real spatial
/// orbital, `psi(x, x') = phi(x) phi(x')`, and antisymmetry lives entirely
/// in the spin part. The orbital is stored over the full grid (zero at the
/// Dirichlet endpoints) and unit normalized: `dx sum phi^2 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState2e {
    grid: Grid,
    orbital: Vec<f64>,
}

impl ProductState2e {
    pub fn new(grid: Grid, orbital: Vec<f64>) -> Result<Self> {
        if orbital.len() != grid.num_points() {
            return Err(invalid("orbital must cover every grid point"));
        }
        if !orbital.iter().all(|v| v.is_finite()) {
            return Err(invalid("orbital values must be finite"));
        }
        let state = Self { grid, orbital };
        if (state.norm() - 1.0).abs() > 1e-10 {
            return Err(invalid("orbital must be unit normalized"));
        }
        Ok(state)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn orbital(&self) -> &[f64] {
        &self.orbital
    }

    /// Pair-state norm `dx sum phi^2` (the square root of `<psi|psi>`).
    pub fn norm(&self) -> f64 {
        let dx = self.grid.spacing();
        self.orbital.iter().map(|v| v * v).sum::<f64>() * dx
    }

    /// Orbital overlap `dx sum phi_a phi_b`.
    pub fn orbital_overlap(&self, other: &ProductState2e) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let dx = self.grid.spacing();
        Ok(self
            .orbital
            .iter()
            .zip(&other.orbital)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * dx)
    }

    /// Pair-state overlap `<psi_a|psi_b>`, the squared orbital overlap.
    pub fn overlap(&self, other: &ProductState2e) -> Result<f64> {
        let s = self.orbital_overlap(other)?;
        Ok(s * s)
    }
}

/// `n(x_i) = 2 phi_i^2`, integrating to 2.
pub fn density_from_product(psi: &ProductState2e) -> Density {
    let values = psi.orbital().iter().map(|v| 2.0 * v * v).collect();
    Density::new(psi.grid(), values, 2.0).expect("product density integrates to 2")
}

/// The soft interaction `W_ij = 1 / (|x_i - x_j| + 1)` over the full grid,
/// row-major.
pub fn interaction_kernel(grid: Grid) -> Vec<f64> {
    let n = grid.num_points();
    let mut w = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            w.push(1.0 / ((grid.point(i) - grid.point(j)).abs() + 1.0));
        }
    }
    w
}

#[derive(Debug, Clone)]
pub struct Solver2eConfig {
    /// Overall scale on the soft interaction; 1 is the physical case, 0
    /// reduces the same code path to non-interacting electrons.
    pub interaction_strength: f64,
    /// Cap on the pair-basis dimension `m(m-1)/2` (m = interior points).
    pub pair_basis_budget: usize,
    pub lanczos: LanczosConfig,
}

impl Default for Solver2eConfig {
    fn default() -> Self {
        Self {
            interaction_strength: 1.0,
            pair_basis_budget: 60_000,
            lanczos: LanczosConfig::default(),
        }
    }
}

/// Pair-basis Hamiltonian over interior pairs (a < b), matrix-free.
///
/// Applying H = h x 1 + 1 x h + W on the strict triangle needs no
/// antisymmetry sign bookkeeping: every kinetic neighbor of an in-triangle
/// pair is itself in-triangle, on the (zero) diagonal, or outside the
/// Dirichlet box.
struct PairHamiltonian<'a> {
    m: usize,
    inv_dx2: f64,
    v: &'a [f64],
    w_by_distance: Vec<f64>,
    row_start: Vec<usize>,
}

impl<'a> PairHamiltonian<'a> {
    fn new(v_interior: &'a [f64], dx: f64, interaction_strength: f64) -> Self {
        let m = v_interior.len();
        let w_by_distance = (0..m)
            .map(|d| interaction_strength / (d as f64 * dx + 1.0))
            .collect();
        let row_start = (0..m).map(|a| a * (2 * m - a - 1) / 2).collect();
        Self {
            m,
            inv_dx2: 1.0 / (dx * dx),
            v: v_interior,
            w_by_distance,
            row_start,
        }
    }
}

impl SymOp for PairHamiltonian<'_> {
    fn dim(&self) -> usize {
        self.m * (self.m - 1) / 2
    }

    fn apply(&self, c: &[f64], out: &mut [f64]) {
        let m = self.m;
        let half = 0.5 * self.inv_dx2;
        let kinetic = 2.0 * self.inv_dx2;
        let mut t = 0;
        for a in 0..m {
            for b in a + 1..m {
                let mut acc = (kinetic + self.v[a] + self.v[b] + self.w_by_distance[b - a]) * c[t];
                if a > 0 {
                    acc -= half * c[self.row_start[a - 1] + b - a];
                }
                if a + 1 < b {
                    acc -= half * c[self.row_start[a + 1] + b - a - 2];
                }
                if b > a + 1 {
                    acc -= half * c[t - 1];
                }
                if b + 1 < m {
                    acc -= half * c[t + 1];
                }
                out[t] = acc;
                t += 1;
            }
        }
    }
}

/// Slater determinant of two orthonormal orbitals on the strict triangle of
/// the full grid: `(phi0_i phi1_j - phi1_i phi0_j) / sqrt(2)`.
fn slater_triangle(phi0: &[Complex64], phi1: &[Complex64], n: usize) -> Vec<Complex64> {
    let inv_sqrt2 = 1.0 / math::sqrt(2.0);
    let mut triangle = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            triangle.push((phi0[i] * phi1[j] - phi1[i] * phi0[j]) * inv_sqrt2);
        }
    }
    triangle
}

/// Flip the global sign so the largest-magnitude entry is positive.
fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Interacting ground state with the default configuration.
pub fn ground_state_interacting(potential: &Potential) -> Result<(f64, Wavefunction2e)> {
    ground_state_interacting_with(potential, &Solver2eConfig::default())
}

/// Interacting ground state: lowest eigenpair of `h x 1 + 1 x h + W` on the
/// antisymmetric pair basis.
pub fn ground_state_interacting_with(
    potential: &Potential,
    config: &Solver2eConfig,
) -> Result<(f64, Wavefunction2e)> {
    if !config.interaction_strength.is_finite() || config.interaction_strength < 0.0 {
        return Err(invalid("interaction strength must be finite and >= 0"));
    }
    let grid = potential.grid();
    let n = grid.num_points();
    let m = n - 2;
    if m < 2 {
        return Err(invalid(
            "two-electron solve needs at least 2 interior points",
        ));
    }
    let dim = m * (m - 1) / 2;
    if dim > config.pair_basis_budget {
        return Err(Error::PairBasisTooLarge {
            needed: dim,
            budget: config.pair_basis_budget,
        });
    }

    // The Slater ground state is an excellent Krylov seed (exact at zero
    // interaction strength).
    let spectrum = solver1e::lowest_k(potential, 2)?;
    let phi0 = spectrum.state(0).amplitudes();
    let phi1 = spectrum.state(1).amplitudes();
    let mut start = Vec::with_capacity(dim);
    for a in 1..n - 1 {
        for b in a + 1..n - 1 {
            start.push((phi0[a] * phi1[b] - phi1[a] * phi0[b]).re);
        }
    }
    let norm = math::sqrt(start.iter().map(|x| x * x).sum());
    if norm > 0.0 {
        for x in start.iter_mut() {
            *x /= norm;
        }
    }

    let dx = grid.spacing();
    let v_interior: Vec<f64> = (1..n - 1).map(|i| potential.value(i)).collect();
    let h = PairHamiltonian::new(&v_interior, dx, config.interaction_strength);
    let mut result = lanczos::lowest_eigenpair(&h, Some(&start), &config.lanczos)?;
    fix_sign(&mut result.vector);

    let scale = 1.0 / (math::sqrt(2.0) * dx);
    let mut triangle = vec![Complex64::new(0.0, 0.0); n * (n - 1) / 2];
    let mut t = 0;
    for a in 1..n - 1 {
        for b in a + 1..n - 1 {
            triangle[tri_index(a, b, n)] = Complex64::new(result.vector[t] * scale, 0.0);
            t += 1;
        }
    }
    Ok((result.energy, Wavefunction2e { grid, triangle }))
}

/// Non-interacting ground state: Slater determinant of the two lowest
/// orbitals, energy `e_0 + e_1`.
pub fn ground_state_noninteracting(potential: &Potential) -> Result<(f64, Wavefunction2e)> {
    let spectrum = solver1e::lowest_k(potential, 2)?;
    let grid = potential.grid();
    let triangle = slater_triangle(
        spectrum.state(0).amplitudes(),
        spectrum.state(1).amplitudes(),
        grid.num_points(),
    );
    let energy = spectrum.energy(0) + spectrum.energy(1);
    Ok((energy, Wavefunction2e { grid, triangle }))
}

/// Non-interacting singlet ground state: both electrons in the lowest
/// orbital, energy `2 e_0`.
pub fn product_ground_state(potential: &Potential) -> Result<(f64, ProductState2e)> {
    let (e0, phi) = solver1e::ground_state(potential)?;
    let mut orbital: Vec<f64> = phi.amplitudes().iter().map(|c| c.re).collect();
    fix_sign(&mut orbital);
    Ok((
        2.0 * e0,
        ProductState2e {
            grid: potential.grid(),
            orbital,
        },
    ))
}

#[derive(Debug, Clone)]
pub struct MeanFieldConfig {
    /// Overall scale on the soft interaction; 0 reduces the solve to the
    /// bare product state.
    pub interaction_strength: f64,
    /// Number of mean-field updates applied to the bare orbital.
    pub sweeps: usize,
}

impl Default for MeanFieldConfig {
    fn default() -> Self {
        Self {
            interaction_strength: 1.0,
            sweeps: 1,
        }
    }
}

/// Interacting singlet ground state at the non-self-consistent mean-field
/// level, with the default configuration (a single sweep).
pub fn mean_field_ground_state(potential: &Potential) -> Result<(f64, ProductState2e)> {
    mean_field_ground_state_with(potential, &MeanFieldConfig::default())
}

/// Interacting singlet ground state at the non-self-consistent mean-field
/// level. Starting from the bare ground orbital, each sweep re-solves the
/// orbital in the bare potential plus the partner electron's averaged soft
/// interaction; the default single sweep is the leading-order density
/// update. The iteration is deliberately not driven to a fixed point:
/// systems with near-degenerate microwells make the self-consistent aufbau
/// map oscillate between wells rather than contract. The reported energy is
/// the variational pair energy `2 <phi|h|phi> + E_ee` of the final orbital.
pub fn mean_field_ground_state_with(
    potential: &Potential,
    config: &MeanFieldConfig,
) -> Result<(f64, ProductState2e)> {
    if !config.interaction_strength.is_finite() || config.interaction_strength < 0.0 {
        return Err(invalid("interaction strength must be finite and >= 0"));
    }
    if config.sweeps == 0 {
        return Err(invalid("mean-field solve needs at least one sweep"));
    }
    let grid = potential.grid();
    let n = grid.num_points();
    let m = n - 2;
    if m < 1 {
        return Err(invalid("mean-field solve needs at least 1 interior point"));
    }
    let dx = grid.spacing();
    let w_by_distance: Vec<f64> = (0..m)
        .map(|d| config.interaction_strength / (d as f64 * dx + 1.0))
        .collect();

    let (_, phi) = solver1e::ground_state(potential)?;
    let mut orbital: Vec<f64> = phi.amplitudes().iter().map(|c| c.re).collect();
    for _ in 0..config.sweeps {
        let mut shifted = potential.values().to_vec();
        for i in 0..m {
            let field: f64 = (0..m)
                .map(|j| w_by_distance[i.abs_diff(j)] * orbital[j + 1] * orbital[j + 1])
                .sum();
            shifted[i + 1] += field * dx;
        }
        let effective = Potential::new(grid, shifted)?;
        let (_, phi) = solver1e::ground_state(&effective)?;
        for (dst, src) in orbital.iter_mut().zip(phi.amplitudes()) {
            *dst = src.re;
        }
    }
    fix_sign(&mut orbital);
    let energy = product_pair_energy(potential, &orbital, &w_by_distance);
    Ok((energy, ProductState2e { grid, orbital }))
}

/// Variational energy of the product state `phi x phi`:
/// `2 <phi|h|phi> + dx^2 sum_ij phi_i^2 W_ij phi_j^2`.
fn product_pair_energy(potential: &Potential, orbital: &[f64], w_by_distance: &[f64]) -> f64 {
    let grid = potential.grid();
    let n = grid.num_points();
    let dx = grid.spacing();
    let inv_dx2 = 1.0 / (dx * dx);
    let mut one_body = 0.0;
    for i in 1..n - 1 {
        let laplacian = (orbital[i - 1] - 2.0 * orbital[i] + orbital[i + 1]) * inv_dx2;
        one_body += orbital[i] * (-0.5 * laplacian + potential.value(i) * orbital[i]);
    }
    one_body *= dx;
    let mut repulsion = 0.0;
    for i in 1..n - 1 {
        let ni = orbital[i] * orbital[i];
        for j in 1..n - 1 {
            repulsion += ni * w_by_distance[i.abs_diff(j)] * orbital[j] * orbital[j];
        }
    }
    repulsion *= dx * dx;
    2.0 * one_body + repulsion
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{fourier_potential, load_preset_family, PresetFamily};

    fn preset_potential(which: PresetFamily, index: usize, grid: Grid) -> Potential {
        fourier_potential(&load_preset_family(which)[index], grid).unwrap()
    }

    fn harmonic(grid: Grid) -> Potential {
        let values = grid.points().map(|x| 0.5 * x * x).collect();
        Potential::new(grid, values).unwrap()
    }

    #[test]
    fn kernel_reference_values() {
        let grid = Grid::new(2.0, 5).unwrap();
        let n = grid.num_points();
        let w = interaction_kernel(grid);
        for i in 0..n {
            assert_eq!(w[i * n + i], 1.0);
            for j in 0..n {
                assert_eq!(w[i * n + j], w[j * n + i]);
            }
        }
        // dx = 1: adjacent points sit one bohr apart.
        assert_eq!(w[1], 0.5);
        assert!(w.iter().all(|x| *x > 0.0 && *x <= 1.0));
    }

    #[test]
    fn noninteracting_box_energy() {
        let grid = Grid::new(15.0, 601).unwrap();
        let v = Potential::new(grid, alloc::vec![0.0; grid.num_points()]).unwrap();
        let (e, psi) = ground_state_noninteracting(&v).unwrap();
        let analytic = 5.0 * core::f64::consts::PI * core::f64::consts::PI / 1800.0;
        assert!((e - analytic).abs() < 0.01 * analytic);
        assert!((psi.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn slater_density_identity() {
        let grid = Grid::default_2e();
        let v = preset_potential(PresetFamily::TwoElectron, 0, grid);
        let spectrum = solver1e::lowest_k(&v, 2).unwrap();
        let (_, psi) = ground_state_noninteracting(&v).unwrap();
        let n = density_from_2e(&psi);
        assert!((n.integral() - 2.0).abs() < 1e-8);
        for i in 0..grid.num_points() {
            let orbital_sum = spectrum.state(0).amplitudes()[i].norm_sqr()
                + spectrum.state(1).amplitudes()[i].norm_sqr();
            assert!((n.values()[i] - orbital_sum).abs() < 1e-8);
        }
    }

    #[test]
    fn zero_interaction_reduces_to_orbital_sum() {
        let grid = Grid::default_2e();
        let v = preset_potential(PresetFamily::TwoElectron, 2, grid);
        let spectrum = solver1e::lowest_k(&v, 2).unwrap();
        let config = Solver2eConfig {
            interaction_strength: 0.0,
            ..Solver2eConfig::default()
        };
        let (e, psi) = ground_state_interacting_with(&v, &config).unwrap();
        assert!((e - (spectrum.energy(0) + spectrum.energy(1))).abs() < 1e-10);
        let (_, slater) = ground_state_noninteracting(&v).unwrap();
        let o = psi.overlap(&slater).unwrap();
        assert!((o.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn harmonic_two_electron_energies() {
        let grid = Grid::new(15.0, 151).unwrap();
        let v = harmonic(grid);
        let (e_free, _) = ground_state_noninteracting(&v).unwrap();
        assert!((e_free - 2.0).abs() < 2e-2);
        let (e_int, psi) = ground_state_interacting(&v).unwrap();
        assert!(e_int > e_free);
        assert!((psi.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn interacting_energy_dominates_noninteracting_on_presets() {
        let grid = Grid::default_2e();
        for index in [0, 5] {
            let v = preset_potential(PresetFamily::TwoElectron, index, grid);
            let (e_int, _) = ground_state_interacting(&v).unwrap();
            let (e_free, _) = ground_state_noninteracting(&v).unwrap();
            assert!(e_int >= e_free);
        }
    }

    #[test]
    fn matches_dense_brute_force_on_tiny_grids() {
        let grid = Grid::new(15.0, 21).unwrap();
        for index in [0, 7] {
            let v = preset_potential(PresetFamily::TwoElectron, index, grid);
            let v_interior: Vec<f64> = (1..grid.num_points() - 1).map(|i| v.value(i)).collect();
            for strength in [1.0, 0.37] {
                let config = Solver2eConfig {
                    interaction_strength: strength,
                    ..Solver2eConfig::default()
                };
                let (e, _) = ground_state_interacting_with(&v, &config).unwrap();
                let oracle = qmslab_testkit::antisymmetric_ground_energy(
                    &v_interior,
                    grid.spacing(),
                    strength,
                );
                assert!(
                    (e - oracle).abs() < 1e-9,
                    "strength {strength}: {e} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn amplitudes_are_antisymmetric() {
        let grid = Grid::new(15.0, 41).unwrap();
        let v = preset_potential(PresetFamily::TwoElectron, 4, grid);
        let (_, psi) = ground_state_interacting(&v).unwrap();
        for i in [0, 3, 17, 40] {
            assert_eq!(psi.amplitude(i, i), Complex64::new(0.0, 0.0));
            for j in [1, 9, 22] {
                if i != j {
                    assert_eq!(psi.amplitude(i, j), -psi.amplitude(j, i));
                }
            }
        }
        // Boundary pairs vanish (Dirichlet walls).
        assert_eq!(psi.amplitude(0, 5), Complex64::new(0.0, 0.0));
        assert_eq!(psi.amplitude(5, 40), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn symmetric_potentials_give_even_densities() {
        let grid = Grid::default_2e();
        let spec = crate::potentials::FourierPotentialSpec::new(
            alloc::vec![-0.3, 0.21, 0.17],
            alloc::vec![0.0; 3],
            1.0,
        )
        .unwrap();
        let v = fourier_potential(&spec, grid).unwrap();
        let n_pts = grid.num_points();
        let (_, psi) = ground_state_interacting(&v).unwrap();
        let n = density_from_2e(&psi);
        assert!(n.values().iter().all(|x| *x >= 0.0));
        for i in 0..n_pts {
            assert!((n.values()[i] - n.values()[n_pts - 1 - i]).abs() < 1e-8);
        }
    }

    #[test]
    fn one_electron_densities() {
        let grid = Grid::default_1e();
        let v = Potential::new(grid, alloc::vec![0.0; grid.num_points()]).unwrap();
        let (_, psi) = solver1e::ground_state(&v).unwrap();
        let n = density_from_1e(&psi);
        assert!((n.integral() - 1.0).abs() < 1e-10);
        // Box ground density is proportional to cos^2(pi x / 30).
        let peak = n.values()[150];
        for (i, x) in grid.points().enumerate() {
            let c = math::cos(core::f64::consts::PI * x / 30.0);
            assert!((n.values()[i] - peak * c * c).abs() < 1e-4);
        }
        // A global phase leaves the density untouched.
        let rotated: Vec<Complex64> = psi
            .amplitudes()
            .iter()
            .map(|a| a * Complex64::new(0.6, 0.8))
            .collect();
        let rotated = Wavefunction1e::new(grid, rotated).unwrap();
        let n2 = density_from_1e(&rotated);
        for (a, b) in n.values().iter().zip(n2.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn budget_overflow_is_reported() {
        let grid = Grid::default_2e();
        let v = preset_potential(PresetFamily::TwoElectron, 0, grid);
        let config = Solver2eConfig {
            pair_basis_budget: 100,
            ..Solver2eConfig::default()
        };
        assert!(matches!(
            ground_state_interacting_with(&v, &config),
            Err(Error::PairBasisTooLarge { .. })
        ));
    }

    #[test]
    fn wavefunction_validation() {
        let grid = Grid::new(2.0, 5).unwrap();
        assert!(Wavefunction2e::new(grid, alloc::vec![Complex64::new(0.0, 0.0); 3]).is_err());
        let mut tri = alloc::vec![Complex64::new(0.0, 0.0); 10];
        tri[4] = Complex64::new(1.0, 0.0);
        assert!(Wavefunction2e::new(grid, tri.clone()).is_err());
        // 2 dx^2 |c|^2 = 1 at dx = 1 needs |c| = 1/sqrt(2).
        tri[4] = Complex64::new(1.0 / math::sqrt(2.0), 0.0);
        assert!(Wavefunction2e::new(grid, tri).is_ok());
    }

    #[test]
    fn product_state_validation() {
        let grid = Grid::new(2.0, 5).unwrap();
        assert!(ProductState2e::new(grid, alloc::vec![0.0; 3]).is_err());
        assert!(ProductState2e::new(grid, alloc::vec![0.5; 5]).is_err());
        let mut orbital = alloc::vec![0.0; 5];
        orbital[2] = 1.0; // dx = 1
        let state = ProductState2e::new(grid, orbital).unwrap();
        assert!((state.norm() - 1.0).abs() < 1e-12);
        assert_eq!(state.overlap(&state).unwrap(), 1.0);
    }

    #[test]
    fn product_state_doubles_the_lowest_orbital() {
        let grid = Grid::default_2e();
        let v = preset_potential(PresetFamily::TwoElectron, 1, grid);
        let (e0, phi) = solver1e::ground_state(&v).unwrap();
        let (e, state) = product_ground_state(&v).unwrap();
        assert_eq!(e, 2.0 * e0);
        assert!((state.norm() - 1.0).abs() < 1e-10);
        let density = density_from_product(&state);
        assert!((density.integral() - 2.0).abs() < 1e-8);
        for i in 0..grid.num_points() {
            let expected = 2.0 * phi.amplitudes()[i].norm_sqr();
            assert!((density.values()[i] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_field_reduces_to_product_at_zero_strength() {
        let grid = Grid::new(15.0, 81).unwrap();
        let v = preset_potential(PresetFamily::TwoElectron, 3, grid);
        let config = MeanFieldConfig {
            interaction_strength: 0.0,
            ..MeanFieldConfig::default()
        };
        let (e, state) = mean_field_ground_state_with(&v, &config).unwrap();
        let (e_free, bare) = product_ground_state(&v).unwrap();
        assert!((e - e_free).abs() < 1e-12);
        for (a, b) in state.orbital().iter().zip(bare.orbital()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn mean_field_energy_is_variational_for_the_singlet() {
        let grid = Grid::new(15.0, 21).unwrap();
        for index in [0, 4] {
            let v = preset_potential(PresetFamily::TwoElectron, index, grid);
            let v_interior: Vec<f64> = (1..grid.num_points() - 1).map(|i| v.value(i)).collect();
            let dense = qmslab_testkit::dense_pair_hamiltonian(&v_interior, grid.spacing(), 1.0);
            let (eigenvalues, _) = qmslab_testkit::jacobi_eigen(dense);
            let exact = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
            let (e, state) = mean_field_ground_state(&v).unwrap();
            assert!(e >= exact - 1e-10, "index {index}: {e} below exact {exact}");
            assert!(e - exact < 1.0, "index {index}: {e} far from exact {exact}");
            assert!((state.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn mean_field_update_moves_the_density() {
        let grid = Grid::default_2e();
        let v = preset_potential(PresetFamily::TwoElectron, 0, grid);
        let (e_free, bare) = product_ground_state(&v).unwrap();
        let (e_int, pushed) = mean_field_ground_state(&v).unwrap();
        assert!(e_int > e_free);
        let overlap = bare.orbital_overlap(&pushed).unwrap().abs();
        assert!(overlap < 1.0 - 1e-6);
        let moved: f64 = density_from_product(&bare)
            .values()
            .iter()
            .zip(density_from_product(&pushed).values())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * grid.spacing();
        assert!(moved > 0.01);
    }
}
