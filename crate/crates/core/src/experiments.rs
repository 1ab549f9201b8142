//! Family-level experiment drivers.
//!
//! Two pipelines cover the bundled experiments. `run_ground_state_family`
//! solves every member of a potential family, measures all pairwise
//! wavefunction and density distances, and fits the through-origin line
//! relating them. `run_dynamics_family` switches on a sudden uniform field,
//! propagates every member from its ground state, and records the distances
//! between each member and a fixed reference system at every snapshot;
//! `lower_triangle_statistics` then summarises where the moving records sit
//! relative to the family's own static ground-state line.

use alloc::format;
use alloc::vec::Vec;

use crate::dynamics::{propagate, PropagationConfig, Trajectory};
use crate::error::{invalid, Error, Result};
use crate::metrics::{
    density_distance, fit_slope_through_origin, wavefunction_distance, DistanceRecord,
    MetricConvention, NormalizationMode, SlopeFit,
};
use crate::potentials::Potential;
use crate::solver1e::{ground_state, Wavefunction1e};
use crate::solver2e::{
    density_from_1e, density_from_product, mean_field_ground_state_with, product_ground_state,
    Density, MeanFieldConfig, ProductState2e,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    OneElectron,
    TwoElectronInteracting,
    TwoElectronNonInteracting,
}

impl FamilyKind {
    pub fn electron_number(&self) -> u32 {
        match self {
            FamilyKind::OneElectron => 1,
            _ => 2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FamilyKind::OneElectron => "one-electron",
            FamilyKind::TwoElectronInteracting => "two-electron-interacting",
            FamilyKind::TwoElectronNonInteracting => "two-electron-noninteracting",
        }
    }
}

/// A family member's ground state: one electron, or two electrons in the
/// singlet product form the family experiments use. (The exact pair-basis
/// solvers in `solver2e` remain available for single systems.)
#[derive(Debug, Clone, PartialEq)]
pub enum SolvedState {
    One(Wavefunction1e),
    Two(ProductState2e),
}

impl SolvedState {
    pub fn electron_number(&self) -> u32 {
        match self {
            SolvedState::One(_) => 1,
            SolvedState::Two(_) => 2,
        }
    }

    pub fn as_one_electron(&self) -> Option<&Wavefunction1e> {
        match self {
            SolvedState::One(psi) => Some(psi),
            SolvedState::Two(_) => None,
        }
    }

    pub fn as_two_electron(&self) -> Option<&ProductState2e> {
        match self {
            SolvedState::One(_) => None,
            SolvedState::Two(psi) => Some(psi),
        }
    }
}

/// One family member: its potential, ground state, energy and density.
#[derive(Debug, Clone)]
pub struct SolvedSystem {
    id: u32,
    energy: f64,
    potential: Potential,
    state: SolvedState,
    density: Density,
}

impl SolvedSystem {
    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn state(&self) -> &SolvedState {
        &self.state
    }

    pub fn density(&self) -> &Density {
        &self.density
    }
}

/// Solve one system's ground state; `id` labels the system in records and
/// error messages. Two-electron members are solved in the singlet sector:
/// the bare product state when non-interacting, the restricted mean-field
/// state when interacting.
pub fn solve_system(id: u32, potential: &Potential, kind: FamilyKind) -> Result<SolvedSystem> {
    solve_system_with(id, potential, kind, &MeanFieldConfig::default())
}

pub fn solve_system_with(
    id: u32,
    potential: &Potential,
    kind: FamilyKind,
    config: &MeanFieldConfig,
) -> Result<SolvedSystem> {
    let tag = |e: Error| Error::InvalidInput(format!("system {id}: {e}"));
    let (energy, state, density) = match kind {
        FamilyKind::OneElectron => {
            let (energy, psi) = ground_state(potential).map_err(tag)?;
            let density = density_from_1e(&psi);
            (energy, SolvedState::One(psi), density)
        }
        FamilyKind::TwoElectronInteracting => {
            let (energy, psi) = mean_field_ground_state_with(potential, config).map_err(tag)?;
            let density = density_from_product(&psi);
            (energy, SolvedState::Two(psi), density)
        }
        FamilyKind::TwoElectronNonInteracting => {
            let (energy, psi) = product_ground_state(potential).map_err(tag)?;
            let density = density_from_product(&psi);
            (energy, SolvedState::Two(psi), density)
        }
    };
    Ok(SolvedSystem {
        id,
        energy,
        potential: potential.clone(),
        state,
        density,
    })
}

fn pair_distances(
    a: &SolvedSystem,
    b: &SolvedSystem,
    convention: MetricConvention,
) -> Result<(f64, f64)> {
    let d_psi = match (&a.state, &b.state) {
        (SolvedState::One(x), SolvedState::One(y)) => wavefunction_distance(x, y, convention)?,
        (SolvedState::Two(x), SolvedState::Two(y)) => wavefunction_distance(x, y, convention)?,
        _ => {
            return Err(Error::ElectronCountMismatch {
                left: a.state.electron_number(),
                right: b.state.electron_number(),
            })
        }
    };
    let d_n = density_distance(&a.density, &b.density, convention)?;
    Ok((d_psi, d_n))
}

fn pairwise_over(
    systems: &[&SolvedSystem],
    convention: MetricConvention,
) -> Result<Vec<DistanceRecord>> {
    let mut records = Vec::with_capacity(systems.len() * systems.len().saturating_sub(1) / 2);
    for (i, a) in systems.iter().enumerate() {
        for b in &systems[i + 1..] {
            let (d_psi, d_n) = pair_distances(a, b, convention)?;
            records.push(DistanceRecord {
                system_a: a.id,
                system_b: b.id,
                time: None,
                d_psi,
                d_n,
                convention,
            });
        }
    }
    Ok(records)
}

/// All unordered pairwise distances, in the order the systems are given.
pub fn pairwise_records(
    systems: &[SolvedSystem],
    convention: MetricConvention,
) -> Result<Vec<DistanceRecord>> {
    let refs: Vec<&SolvedSystem> = systems.iter().collect();
    pairwise_over(&refs, convention)
}

/// A solved family with its pairwise distances and fitted line. The fit is
/// absent when the family produces fewer than two records or all
/// wavefunction distances are zero (identical members).
#[derive(Debug, Clone)]
pub struct FamilyRun {
    pub kind: FamilyKind,
    pub systems: Vec<SolvedSystem>,
    pub records: Vec<DistanceRecord>,
    pub fit: Option<SlopeFit>,
}

/// Build a [`FamilyRun`] from already solved systems (sorted by id here, so
/// callers may solve in any order, including in parallel).
pub fn assemble_family_run(
    kind: FamilyKind,
    mode: NormalizationMode,
    mut systems: Vec<SolvedSystem>,
) -> Result<FamilyRun> {
    if systems.len() < 2 {
        return Err(invalid("a family needs at least two systems"));
    }
    systems.sort_by_key(|s| s.id);
    if systems.windows(2).any(|w| w[0].id == w[1].id) {
        return Err(invalid("duplicate system ids in family"));
    }
    for s in &systems {
        if s.state.electron_number() != kind.electron_number() {
            return Err(Error::ElectronCountMismatch {
                left: s.state.electron_number(),
                right: kind.electron_number(),
            });
        }
    }
    let convention = MetricConvention::new(mode, kind.electron_number())?;
    let records = pairwise_records(&systems, convention)?;
    let fit = match fit_slope_through_origin(&records) {
        Ok(fit) => Some(fit),
        Err(Error::DegenerateSlope) | Err(Error::InvalidInput(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(FamilyRun {
        kind,
        systems,
        records,
        fit,
    })
}

/// Solve a whole family and measure it. All potentials must share one grid.
pub fn run_ground_state_family(
    potentials: &[Potential],
    kind: FamilyKind,
    mode: NormalizationMode,
) -> Result<FamilyRun> {
    run_ground_state_family_with(potentials, kind, mode, &MeanFieldConfig::default())
}

pub fn run_ground_state_family_with(
    potentials: &[Potential],
    kind: FamilyKind,
    mode: NormalizationMode,
    config: &MeanFieldConfig,
) -> Result<FamilyRun> {
    check_shared_grid(potentials)?;
    let systems = potentials
        .iter()
        .enumerate()
        .map(|(i, v)| solve_system_with(i as u32 + 1, v, kind, config))
        .collect::<Result<Vec<_>>>()?;
    assemble_family_run(kind, mode, systems)
}

fn check_shared_grid(potentials: &[Potential]) -> Result<()> {
    if potentials.is_empty() {
        return Err(invalid("a family needs at least two systems"));
    }
    if potentials.iter().any(|p| p.grid() != potentials[0].grid()) {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// A propagated one-electron family: static pairwise distances and their
/// fitted ground-state line, plus the time-resolved distances between every
/// member and the reference system.
#[derive(Debug, Clone)]
pub struct DynamicsRun {
    pub reference: u32,
    pub ground_line: SlopeFit,
    pub static_records: Vec<DistanceRecord>,
    pub trail_records: Vec<DistanceRecord>,
}

/// Build a [`DynamicsRun`] from solved systems and their trajectories (one
/// per system, any order; solved and propagated in parallel by callers).
pub fn assemble_dynamics_run(
    reference: u32,
    mode: NormalizationMode,
    systems: &[SolvedSystem],
    mut trajectories: Vec<(u32, Trajectory)>,
) -> Result<DynamicsRun> {
    let convention = MetricConvention::new(mode, 1)?;
    if systems.iter().any(|s| s.state.electron_number() != 1) {
        return Err(invalid("dynamics runs take one-electron families"));
    }
    let mut order: Vec<&SolvedSystem> = systems.iter().collect();
    order.sort_by_key(|s| s.id);
    if order.windows(2).any(|w| w[0].id == w[1].id) {
        return Err(invalid("duplicate system ids in family"));
    }
    trajectories.sort_by_key(|(id, _)| *id);
    let system_ids: Vec<u32> = order.iter().map(|s| s.id).collect();
    let trajectory_ids: Vec<u32> = trajectories.iter().map(|(id, _)| *id).collect();
    if system_ids != trajectory_ids {
        return Err(invalid(
            "trajectories must cover exactly the family's system ids",
        ));
    }
    let ref_pos = trajectories
        .iter()
        .position(|(id, _)| *id == reference)
        .ok_or_else(|| invalid("reference system is not in the family"))?;
    let static_records = pairwise_over(&order, convention)?;
    let ground_line = fit_slope_through_origin(&static_records)?;
    let times: Vec<f64> = trajectories[ref_pos].1.times().to_vec();
    for (id, traj) in &trajectories {
        if traj.times() != times.as_slice() {
            return Err(Error::InvalidInput(format!(
                "system {id}: snapshot times differ from the reference"
            )));
        }
    }
    let mut trail_records = Vec::with_capacity((trajectories.len() - 1) * times.len());
    for idx in 0..trajectories.len() {
        if idx == ref_pos {
            continue;
        }
        let (id, traj) = &trajectories[idx];
        let (_, reference_traj) = &trajectories[ref_pos];
        for (s, &time) in times.iter().enumerate() {
            let d_psi =
                wavefunction_distance(&reference_traj.states()[s], &traj.states()[s], convention)?;
            let d_n = density_distance(
                &reference_traj.densities()[s],
                &traj.densities()[s],
                convention,
            )?;
            trail_records.push(DistanceRecord {
                system_a: reference,
                system_b: *id,
                time: Some(time),
                d_psi,
                d_n,
                convention,
            });
        }
    }
    Ok(DynamicsRun {
        reference,
        ground_line,
        static_records,
        trail_records,
    })
}

/// Solve, propagate and measure a one-electron family under the sudden
/// field in `config`, comparing everyone against `reference` over time.
pub fn run_dynamics_family(
    potentials: &[Potential],
    reference: u32,
    config: &PropagationConfig,
    mode: NormalizationMode,
) -> Result<DynamicsRun> {
    check_shared_grid(potentials)?;
    let systems = potentials
        .iter()
        .enumerate()
        .map(|(i, v)| solve_system(i as u32 + 1, v, FamilyKind::OneElectron))
        .collect::<Result<Vec<_>>>()?;
    let trajectories = systems
        .iter()
        .map(|s| {
            let psi = s
                .state
                .as_one_electron()
                .ok_or_else(|| invalid("dynamics runs take one-electron families"))?;
            propagate(psi, &s.potential, config)
                .map(|t| (s.id, t))
                .map_err(|e| Error::InvalidInput(format!("system {}: {e}", s.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    assemble_dynamics_run(reference, mode, &systems, trajectories)
}

/// Where the moving records sit relative to the ground-state line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleStatistics {
    /// Slope of the family's static ground-state line.
    pub slope: f64,
    /// Fraction of t>0 records strictly below the line; records exactly on
    /// the line count one half.
    pub below_line_fraction: f64,
    /// Time-averaged d_n over time-averaged d_psi across t>0 records, the
    /// aggregate slope the moving family actually traces.
    pub time_averaged_ratio: f64,
    /// t>0 records above the line by more than `upper_tolerance`.
    pub upper_triangle_count: usize,
    /// Three times the static fit's RMS residual.
    pub upper_tolerance: f64,
    pub record_count: usize,
}

pub fn lower_triangle_statistics(run: &DynamicsRun) -> Result<TriangleStatistics> {
    let slope = run.ground_line.slope;
    let upper_tolerance = 3.0 * run.ground_line.rms_residual;
    let mut below = 0.0;
    let mut upper = 0usize;
    let mut d_psi_sum = 0.0;
    let mut d_n_sum = 0.0;
    let mut record_count = 0usize;
    for r in &run.trail_records {
        if !r.time.is_some_and(|t| t > 0.0) {
            continue;
        }
        record_count += 1;
        let line = slope * r.d_psi;
        if r.d_n < line {
            below += 1.0;
        } else if r.d_n == line {
            below += 0.5;
        }
        if r.d_n > line + upper_tolerance {
            upper += 1;
        }
        d_psi_sum += r.d_psi;
        d_n_sum += r.d_n;
    }
    if record_count == 0 {
        return Err(invalid("no records after the switch-on"));
    }
    Ok(TriangleStatistics {
        slope,
        below_line_fraction: below / record_count as f64,
        time_averaged_ratio: if d_psi_sum > 0.0 {
            d_n_sum / d_psi_sum
        } else {
            0.0
        },
        upper_triangle_count: upper,
        upper_tolerance,
        record_count,
    })
}
