//! Subcommand implementations. Every command validates and computes first,
//! then writes: a failing run leaves no partial output behind.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use qmslab_core::dynamics::{self, Trajectory};
use qmslab_core::experiments::{self, SolvedSystem};
use qmslab_core::potentials::{self, PRESET_TABLE_CSV};
use qmslab_core::solver1e;
use qmslab_core::solver2e::{self, Solver2eConfig};
use qmslab_core::{DistanceRecord, Error, FamilyKind, FamilyRun, NormalizationMode, Potential};

use crate::config::Settings;
use crate::core_err;
use crate::family::{build_family, Family};
use crate::parallel::parallel_map;
use crate::records::{self, DynamicsSummary, ExperimentSummary};
use crate::svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }
}

fn mode_label(mode: NormalizationMode) -> &'static str {
    match mode {
        NormalizationMode::Natural => "natural",
        NormalizationMode::UnitNormalized => "unit",
    }
}

fn ensure_out_dir(settings: &Settings) -> Result<PathBuf> {
    fs::create_dir_all(&settings.out_dir)
        .with_context(|| format!("creating output directory {}", settings.out_dir.display()))?;
    Ok(settings.out_dir.clone())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn pick_system(family: &Family, system: usize) -> Result<(u32, &Potential)> {
    if system == 0 || system > family.len() {
        bail!(
            "--system {system} is out of range (family has {} systems)",
            family.len()
        );
    }
    Ok((system as u32, &family.potentials[system - 1]))
}

fn two_column(xs: impl Iterator<Item = f64>, ys: &[f64]) -> String {
    let mut text = String::new();
    for (x, y) in xs.zip(ys) {
        let _ = writeln!(text, "{x} {y}");
    }
    text
}

fn family_kind(electrons: u32, interacting: bool) -> FamilyKind {
    match (electrons, interacting) {
        (1, _) => FamilyKind::OneElectron,
        (_, true) => FamilyKind::TwoElectronInteracting,
        (_, false) => FamilyKind::TwoElectronNonInteracting,
    }
}

fn solve_family(
    settings: &Settings,
    family: &Family,
    kind: FamilyKind,
) -> Result<Vec<SolvedSystem>> {
    let mean_field = settings.mean_field.clone();
    parallel_map(
        family.numbered(),
        settings.threads,
        move |(id, potential)| experiments::solve_system_with(id, &potential, kind, &mean_field),
    )
    .into_iter()
    .collect::<qmslab_core::Result<Vec<_>>>()
    .map_err(core_err)
}

/// Conventions a command reports: the requested one, or both when the
/// request leaves it open.
fn modes(settings: &Settings) -> Vec<NormalizationMode> {
    match settings.convention {
        Some(mode) => vec![mode],
        None => vec![
            NormalizationMode::Natural,
            NormalizationMode::UnitNormalized,
        ],
    }
}

pub fn cmd_potentials(settings: &Settings, electrons: u32) -> Result<()> {
    let family = build_family(settings, electrons)?;
    let shifted = parallel_map(
        family.numbered(),
        settings.threads,
        |(id, potential): (u32, Potential)| -> qmslab_core::Result<(u32, f64, Potential)> {
            let (e0, _) = solver1e::ground_state(&potential)
                .map_err(|e| Error::InvalidInput(tag_system(id, &e)))?;
            let shifted = potentials::shift_to_ground_energy(&potential, e0)?;
            Ok((id, e0, shifted))
        },
    )
    .into_iter()
    .collect::<qmslab_core::Result<Vec<_>>>()
    .map_err(core_err)?;

    let dir = ensure_out_dir(settings)?;
    let mut index = String::from("system,file,e0\n");
    for (id, e0, potential) in &shifted {
        let name = format!("potential_{id:02}.dat");
        write_text(
            &dir.join(&name),
            &two_column(potential.grid().points(), potential.values()),
        )?;
        let _ = writeln!(index, "{id},{name},{e0}");
    }
    write_text(&dir.join("potentials_index.csv"), &index)?;
    if family.preset {
        write_text(&dir.join("preset_table.csv"), PRESET_TABLE_CSV)?;
    }
    println!(
        "wrote {} shifted potentials to {}",
        shifted.len(),
        dir.display()
    );
    Ok(())
}

fn tag_system(id: u32, e: &Error) -> String {
    format!("system {id}: {e}")
}

pub fn cmd_solve1e(settings: &Settings, system: usize) -> Result<()> {
    let family = build_family(settings, 1)?;
    let (id, potential) = pick_system(&family, system)?;
    let (e0, psi) = solver1e::ground_state(potential).map_err(core_err)?;
    let dir = ensure_out_dir(settings)?;
    let name = format!("psi1e_{id:02}.dat");
    let mut text = String::new();
    for (x, amp) in psi.grid().points().zip(psi.amplitudes()) {
        let _ = writeln!(text, "{x} {} {}", amp.re, amp.im);
    }
    write_text(&dir.join(&name), &text)?;
    println!(
        "system {id}: E0 = {e0}, orbital in {}",
        dir.join(&name).display()
    );
    Ok(())
}

pub fn cmd_solve2e(settings: &Settings, system: usize, interacting: bool) -> Result<()> {
    let family = build_family(settings, 2)?;
    let (id, potential) = pick_system(&family, system)?;
    let config = Solver2eConfig {
        interaction_strength: settings.mean_field.interaction_strength,
        ..Solver2eConfig::default()
    };
    let (energy, psi) = if interacting {
        solver2e::ground_state_interacting_with(potential, &config)
    } else {
        solver2e::ground_state_noninteracting(potential)
    }
    .map_err(core_err)?;
    let density = solver2e::density_from_2e(&psi);
    let dir = ensure_out_dir(settings)?;

    let grid = psi.grid();
    let n = grid.num_points();
    let label = if interacting {
        "interacting"
    } else {
        "noninteracting"
    };
    let mut dump = String::new();
    let _ = writeln!(dump, "# half_length {}", grid.half_length());
    let _ = writeln!(dump, "# num_points {n}");
    let _ = writeln!(dump, "# normalization unit");
    let _ = writeln!(dump, "# sector antisymmetric ({label})");
    let _ = writeln!(dump, "# energy {energy}");
    let _ = writeln!(dump, "# columns i j re im (grid indices, i < j)");
    for i in 0..n {
        for j in (i + 1)..n {
            let amp = psi.amplitude(i, j);
            let _ = writeln!(dump, "{i} {j} {} {}", amp.re, amp.im);
        }
    }
    write_text(&dir.join(format!("psi2e_{label}_{id:02}.dat")), &dump)?;
    write_text(
        &dir.join(format!("density2e_{label}_{id:02}.dat")),
        &two_column(density.grid().points(), density.values()),
    )?;
    println!(
        "system {id} ({label}): E = {energy}, files in {}",
        dir.display()
    );
    Ok(())
}

pub fn cmd_propagate(settings: &Settings, system: usize, epsilon: Option<f64>) -> Result<()> {
    let family = build_family(settings, 1)?;
    let (id, potential) = pick_system(&family, system)?;
    let mut config = settings.propagation.clone();
    if let Some(eps) = epsilon {
        config.field_strength = eps;
    }
    config.validate().map_err(core_err)?;
    let (_, psi) = solver1e::ground_state(potential).map_err(core_err)?;
    let trajectory = dynamics::propagate(&psi, potential, &config).map_err(core_err)?;

    let dir = ensure_out_dir(settings)?;
    let sub = dir.join(format!("trajectory_{id:02}"));
    fs::create_dir_all(&sub).with_context(|| format!("creating {}", sub.display()))?;
    let mut index = String::from("snapshot,time,norm,energy,file\n");
    for (k, time) in trajectory.times().iter().enumerate() {
        let density = &trajectory.densities()[k];
        let name = format!("density_{k:04}.dat");
        write_text(
            &sub.join(&name),
            &two_column(density.grid().points(), density.values()),
        )?;
        let _ = writeln!(
            index,
            "{k},{time},{},{},{name}",
            trajectory.norms()[k],
            trajectory.energies()[k]
        );
    }
    write_text(&sub.join("index.csv"), &index)?;
    println!(
        "system {id}: {} snapshots over T = {} in {}",
        trajectory.len(),
        config.total_time,
        sub.display()
    );
    Ok(())
}

pub fn cmd_distances(settings: &Settings, electrons: u32, interacting: bool) -> Result<()> {
    let family = build_family(settings, electrons)?;
    if family.len() < 2 {
        bail!("distance records need at least two systems");
    }
    let kind = family_kind(electrons, interacting);
    let systems = solve_family(settings, &family, kind)?;
    let mut runs: Vec<(NormalizationMode, FamilyRun)> = Vec::new();
    for mode in modes(settings) {
        let run =
            experiments::assemble_family_run(kind, mode, systems.clone()).map_err(core_err)?;
        runs.push((mode, run));
    }
    let mut all: Vec<DistanceRecord> = runs
        .iter()
        .flat_map(|(_, run)| run.records.iter().copied())
        .collect();
    records::sort_records(&mut all);
    let dir = ensure_out_dir(settings)?;
    records::write_records(&dir.join("records.csv"), &all)?;
    for (mode, run) in &runs {
        match &run.fit {
            Some(fit) => println!(
                "{} ({}): {} slope {:.6} over {} pairs (rms residual {:.6})",
                kind.label(),
                family.describe(settings),
                mode_label(*mode),
                fit.slope,
                fit.count,
                fit.rms_residual
            ),
            None => println!(
                "{} ({}): {} records are degenerate, no slope",
                kind.label(),
                family.describe(settings),
                mode_label(*mode)
            ),
        }
    }
    println!(
        "wrote {} records to {}",
        all.len(),
        dir.join("records.csv").display()
    );
    Ok(())
}

pub fn cmd_experiment(
    settings: &Settings,
    figure: Figure,
    reference: Option<u32>,
    epsilon: Option<f64>,
) -> Result<()> {
    match figure {
        Figure::Fig2 => experiment_dynamics(settings, reference, epsilon),
        Figure::Fig3 => experiment_pairs(settings, figure, FamilyKind::TwoElectronInteracting),
        Figure::Fig4 => experiment_pairs(settings, figure, FamilyKind::TwoElectronNonInteracting),
    }
}

fn experiment_pairs(settings: &Settings, figure: Figure, kind: FamilyKind) -> Result<()> {
    let family = build_family(settings, 2)?;
    if family.len() < 2 {
        bail!(
            "the {} experiment needs at least two systems",
            figure.name()
        );
    }
    let systems = solve_family(settings, &family, kind)?;
    let natural =
        experiments::assemble_family_run(kind, NormalizationMode::Natural, systems.clone())
            .map_err(core_err)?;
    let unit = experiments::assemble_family_run(kind, NormalizationMode::UnitNormalized, systems)
        .map_err(core_err)?;

    let mut all: Vec<DistanceRecord> = natural.records.iter().copied().collect();
    all.extend(unit.records.iter().copied());
    records::sort_records(&mut all);

    let figure_mode = settings
        .convention
        .unwrap_or(NormalizationMode::UnitNormalized);
    let figure_run = match figure_mode {
        NormalizationMode::Natural => &natural,
        NormalizationMode::UnitNormalized => &unit,
    };
    let degenerate = || anyhow::anyhow!("family produced no usable slope (all members identical)");
    let natural_fit = natural.fit.as_ref().ok_or_else(degenerate)?;
    let unit_fit = unit.fit.as_ref().ok_or_else(degenerate)?;

    let dir = ensure_out_dir(settings)?;
    records::write_records(&dir.join("records.csv"), &all)?;
    write_text(
        &dir.join(format!("{}_data.csv", figure.name())),
        &records::render_figure_pairs(&figure_run.records),
    )?;
    let summary = ExperimentSummary {
        experiment: figure.name().to_string(),
        family: family.describe(settings),
        kind: kind.label().to_string(),
        figure_convention: mode_label(figure_mode).to_string(),
        natural: natural_fit.into(),
        unit: unit_fit.into(),
        dynamics: None,
    };
    records::write_summary(&dir.join("summary.json"), &summary)?;

    let shown = match figure_mode {
        NormalizationMode::Natural => natural_fit,
        NormalizationMode::UnitNormalized => unit_fit,
    };
    println!(
        "{}: {} slope {:.6} over {} pairs (rms residual {:.6}), outputs in {}",
        figure.name(),
        mode_label(figure_mode),
        shown.slope,
        shown.count,
        shown.rms_residual,
        dir.display()
    );
    Ok(())
}

fn experiment_dynamics(
    settings: &Settings,
    reference: Option<u32>,
    epsilon: Option<f64>,
) -> Result<()> {
    let family = build_family(settings, 1)?;
    if family.len() < 2 {
        bail!("the fig2 experiment needs at least two systems");
    }
    let reference = reference.unwrap_or(1);
    if reference == 0 || reference as usize > family.len() {
        bail!(
            "--reference {reference} is out of range (family has {} systems)",
            family.len()
        );
    }
    let mut prop = settings.propagation.clone();
    if let Some(eps) = epsilon {
        prop.field_strength = eps;
    }
    prop.validate().map_err(core_err)?;

    let prop_ref = &prop;
    let solved = parallel_map(
        family.numbered(),
        settings.threads,
        move |(id, potential): (u32, Potential)| -> qmslab_core::Result<(SolvedSystem, (u32, Trajectory))> {
            let system = experiments::solve_system(id, &potential, FamilyKind::OneElectron)?;
            let psi = system
                .state()
                .as_one_electron()
                .expect("one-electron solve returns a one-electron state");
            let trajectory = dynamics::propagate(psi, &potential, prop_ref)
                .map_err(|e| Error::InvalidInput(tag_system(id, &e)))?;
            Ok((system, (id, trajectory)))
        },
    )
    .into_iter()
    .collect::<qmslab_core::Result<Vec<_>>>()
    .map_err(core_err)?;
    let (systems, trajectories): (Vec<SolvedSystem>, Vec<(u32, Trajectory)>) =
        solved.into_iter().unzip();

    let natural = experiments::assemble_dynamics_run(
        reference,
        NormalizationMode::Natural,
        &systems,
        trajectories.clone(),
    )
    .map_err(core_err)?;
    let unit = experiments::assemble_dynamics_run(
        reference,
        NormalizationMode::UnitNormalized,
        &systems,
        trajectories,
    )
    .map_err(core_err)?;

    let figure_mode = settings.convention.unwrap_or(NormalizationMode::Natural);
    let figure_run = match figure_mode {
        NormalizationMode::Natural => &natural,
        NormalizationMode::UnitNormalized => &unit,
    };
    let stats = experiments::lower_triangle_statistics(figure_run).map_err(core_err)?;

    let mut all: Vec<DistanceRecord> = Vec::new();
    for run in [&natural, &unit] {
        all.extend(run.static_records.iter().copied());
        all.extend(run.trail_records.iter().copied());
    }
    records::sort_records(&mut all);

    let dir = ensure_out_dir(settings)?;
    records::write_records(&dir.join("records.csv"), &all)?;
    write_text(
        &dir.join("fig2_data.csv"),
        &records::render_figure_trails(&figure_run.static_records, &figure_run.trail_records),
    )?;
    let summary = ExperimentSummary {
        experiment: "fig2".to_string(),
        family: family.describe(settings),
        kind: FamilyKind::OneElectron.label().to_string(),
        figure_convention: mode_label(figure_mode).to_string(),
        natural: (&natural.ground_line).into(),
        unit: (&unit.ground_line).into(),
        dynamics: Some(DynamicsSummary {
            reference,
            below_line_fraction: stats.below_line_fraction,
            time_averaged_ratio: stats.time_averaged_ratio,
            upper_triangle_count: stats.upper_triangle_count,
            upper_tolerance: stats.upper_tolerance,
            trail_record_count: stats.record_count,
        }),
    };
    records::write_summary(&dir.join("summary.json"), &summary)?;
    println!(
        "fig2: {} ground line slope {:.6}, below-line fraction {:.4}, {} trail records, outputs in {}",
        mode_label(figure_mode),
        stats.slope,
        stats.below_line_fraction,
        stats.record_count,
        dir.display()
    );
    Ok(())
}

pub fn cmd_plot(settings: &Settings, inputs: &[PathBuf], output: Option<PathBuf>) -> Result<()> {
    let mut points = Vec::new();
    for path in inputs {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        points.extend(records::read_plot_points(
            &text,
            &path.display().to_string(),
        )?);
    }

    let filter: Option<&'static str> = settings.convention.map(mode_label);
    let present: BTreeSet<String> = points.iter().filter_map(|p| p.convention.clone()).collect();
    let keep: Option<String> = match filter {
        Some(label) => Some(label.to_string()),
        None if present.len() > 1 => {
            let keep = if present.contains("natural") {
                "natural".to_string()
            } else {
                present.iter().next().cloned().unwrap_or_default()
            };
            eprintln!(
                "warning: records mix conventions ({}); plotting `{keep}` (pass --convention to choose)",
                present.iter().cloned().collect::<Vec<_>>().join(", ")
            );
            Some(keep)
        }
        None => None,
    };
    let selected: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| match (&keep, &p.convention) {
            (Some(k), Some(c)) => k == c,
            _ => true,
        })
        .map(|p| (p.d_psi, p.d_n))
        .collect();

    if selected.is_empty() {
        eprintln!("warning: no records to plot; writing an axes-only figure");
    }
    let sxx: f64 = selected.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = selected.iter().map(|(x, y)| x * y).sum();
    let slope = (sxx > 0.0).then(|| sxy / sxx);

    let title = inputs[0]
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "records".to_string());
    let svg_text = svg::render_scatter(&selected, slope, &title);

    let out_path = match output {
        Some(path) => path,
        None => {
            let stem = inputs[0]
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "plot".to_string());
            ensure_out_dir(settings)?.join(format!("{stem}.svg"))
        }
    };
    if let Some(parent) = out_path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    write_text(&out_path, &svg_text)?;
    println!(
        "plotted {} records to {}",
        selected.len(),
        out_path.display()
    );
    Ok(())
}
