//! Acceptance gate: one test per shipping criterion, each printing a single
//! pass/fail line (visible under `--nocapture`). The experiment criteria run
//! the real CLI pipelines into scratch directories and read back the files
//! the pipelines wrote.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qmslab::commands::{self, Figure};
use qmslab::config::{CommonArgs, Settings};
use qmslab_core::dynamics::{propagate, PropagationConfig};
use qmslab_core::metrics::{density_distance, wavefunction_distance};
use qmslab_core::potentials::{self, PresetFamily};
use qmslab_core::solver1e::{self, Wavefunction1e};
use qmslab_core::solver2e;
use qmslab_core::{Grid, MetricConvention, Potential};

fn scratch(name: &str) -> PathBuf {
    let mut dir = env::temp_dir();
    dir.push(format!("qmslab_acceptance_{}_{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn settings_into(dir: &Path, threads: Option<usize>) -> Settings {
    let common = CommonArgs {
        out: Some(dir.to_path_buf()),
        threads,
        ..Default::default()
    };
    Settings::resolve_with_env(&common, None).unwrap()
}

fn read_summary(dir: &Path) -> serde_json::Value {
    let text = fs::read_to_string(dir.join("summary.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Row {
    a: u32,
    b: u32,
    time: Option<f64>,
    d_psi: f64,
    d_n: f64,
    convention: String,
}

fn read_records(dir: &Path) -> Vec<Row> {
    let text = fs::read_to_string(dir.join("records.csv")).unwrap();
    let mut rows = Vec::new();
    for line in text.lines().skip(1) {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        rows.push(Row {
            a: f[0].parse().unwrap(),
            b: f[1].parse().unwrap(),
            time: if f[2].is_empty() {
                None
            } else {
                Some(f[2].parse().unwrap())
            },
            d_psi: f[3].parse().unwrap(),
            d_n: f[4].parse().unwrap(),
            convention: f[5].to_string(),
        });
    }
    rows
}

fn unit_pairs(dir: &Path) -> Vec<(u32, u32, f64, f64)> {
    read_records(dir)
        .into_iter()
        .filter(|r| r.convention == "unit" && r.time.is_none())
        .map(|r| (r.a, r.b, r.d_psi, r.d_n))
        .collect()
}

#[test]
fn criterion_1_interacting_family_slope() {
    let dir = scratch("c1_fig3");
    commands::cmd_experiment(&settings_into(&dir, None), Figure::Fig3, None, None).unwrap();
    let summary = read_summary(&dir);
    let slope = summary["unit"]["slope"].as_f64().unwrap();
    let count = summary["unit"]["record_count"].as_u64().unwrap();
    let ok = count == 45 && (slope - 1.06).abs() <= 0.10;
    println!(
        "criterion 1 (fig3 interacting unit slope {slope:.6} within 1.06 +/- 0.10 over {count} pairs): {}",
        verdict(ok)
    );
    assert!(ok, "slope {slope} over {count} pairs");
}

#[test]
fn criterion_2_noninteracting_family_slope_and_contrast() {
    let dir3 = scratch("c2_fig3");
    let dir4 = scratch("c2_fig4");
    commands::cmd_experiment(&settings_into(&dir3, None), Figure::Fig3, None, None).unwrap();
    commands::cmd_experiment(&settings_into(&dir4, None), Figure::Fig4, None, None).unwrap();
    let slope3 = read_summary(&dir3)["unit"]["slope"].as_f64().unwrap();
    let slope4 = read_summary(&dir4)["unit"]["slope"].as_f64().unwrap();

    let pairs3 = unit_pairs(&dir3);
    let pairs4 = unit_pairs(&dir4);
    assert_eq!(pairs3.len(), 45);
    assert_eq!(pairs4.len(), 45);
    let mut shifted = 0usize;
    for (p3, p4) in pairs3.iter().zip(&pairs4) {
        assert_eq!((p3.0, p3.1), (p4.0, p4.1), "pair order must match");
        let rel_psi = (p3.2 - p4.2).abs() / p4.2.max(1e-12);
        let rel_n = (p3.3 - p4.3).abs() / p4.3.max(1e-12);
        if rel_psi > 0.01 || rel_n > 0.01 {
            shifted += 1;
        }
    }
    let in_band = (slope4 - 0.97).abs() <= 0.10;
    let trend_close = (slope3 - slope4).abs() < 0.15;
    let ok = in_band && shifted >= 1 && trend_close;
    println!(
        "criterion 2 (fig4 unit slope {slope4:.6} within 0.97 +/- 0.10; {shifted}/45 pairs shift >1% vs fig3; slope gap {:.4} < 0.15): {}",
        (slope3 - slope4).abs(),
        verdict(ok)
    );
    assert!(in_band, "slope {slope4}");
    assert!(shifted >= 1, "no pair moved by more than 1%");
    assert!(trend_close, "slope gap {}", (slope3 - slope4).abs());
}

#[test]
fn criterion_3_one_electron_ground_state_line() {
    let dir = scratch("c3_fig2");
    commands::cmd_experiment(&settings_into(&dir, None), Figure::Fig2, None, None).unwrap();
    let summary = read_summary(&dir);
    let natural = &summary["natural"];
    let slope = natural["slope"].as_f64().unwrap();
    let rms = natural["rms_residual"].as_f64().unwrap();
    let max_d_n = natural["max_d_n"].as_f64().unwrap();
    let in_band = (slope - 1.55).abs() <= 0.15;
    let tight = rms < 0.10 * max_d_n;
    let ok = in_band && tight;
    println!(
        "criterion 3 (static natural slope {slope:.6} within 1.55 +/- 0.15; rms {rms:.4} < 10% of max D_n {max_d_n:.4}): {}",
        verdict(ok)
    );
    assert!(in_band, "slope {slope}");
    assert!(tight, "rms {rms} vs max d_n {max_d_n}");
}

#[test]
fn criterion_4_lower_triangle_dynamics() {
    let dir = scratch("c4_fig2");
    commands::cmd_experiment(&settings_into(&dir, None), Figure::Fig2, None, None).unwrap();
    let summary = read_summary(&dir);
    let slope = summary["natural"]["slope"].as_f64().unwrap();
    let max_abs_residual = summary["natural"]["max_abs_residual"].as_f64().unwrap();
    let dynamics = &summary["dynamics"];
    let below = dynamics["below_line_fraction"].as_f64().unwrap();
    let ratio = dynamics["time_averaged_ratio"].as_f64().unwrap();
    let upper = dynamics["upper_triangle_count"].as_u64().unwrap();

    let rows = read_records(&dir);
    let switch_on: Vec<&Row> = rows
        .iter()
        .filter(|r| r.convention == "natural" && r.time == Some(0.0))
        .collect();
    assert_eq!(switch_on.len(), 9, "one t=0 record per trail");
    let worst_t0 = switch_on
        .iter()
        .map(|r| (r.d_n - slope * r.d_psi).abs())
        .fold(0.0_f64, f64::max);

    let a = worst_t0 <= max_abs_residual + 1e-9;
    let b = below > 0.5;
    let c = upper == 0;
    let d = ratio < slope;
    let ok = a && b && c && d;
    println!(
        "criterion 4 (switch-on residual {worst_t0:.4} within static band {max_abs_residual:.4}; below-line {below:.4} > 0.5; {upper} records above 3x rms; time-averaged ratio {ratio:.4} < slope {slope:.4}): {}",
        verdict(ok)
    );
    assert!(a, "worst t=0 residual {worst_t0} vs {max_abs_residual}");
    assert!(b, "below fraction {below}");
    assert!(c, "{upper} upper-triangle records");
    assert!(d, "ratio {ratio} vs slope {slope}");
}

#[test]
fn criterion_5_solver_oracles() {
    let harmonic_grid = Grid::new(15.0, 601).unwrap();
    let harmonic = Potential::new(
        harmonic_grid,
        harmonic_grid.points().map(|x| 0.5 * x * x).collect(),
    )
    .unwrap();
    let (e_harmonic, _) = solver1e::ground_state(&harmonic).unwrap();
    let harmonic_ok = (e_harmonic - 0.5).abs() < 1e-3;

    let box_grid = Grid::new(15.0, 301).unwrap();
    let box_potential = Potential::new(box_grid, vec![0.0; 301]).unwrap();
    let (e_box, _) = solver1e::ground_state(&box_potential).unwrap();
    let e_box_exact = core::f64::consts::PI.powi(2) / 1800.0;
    let box_ok = (e_box - e_box_exact).abs() < 0.01 * e_box_exact;

    let spec = &potentials::load_preset_family(PresetFamily::TwoElectron)[0];
    let pair_potential = potentials::fourier_potential(spec, Grid::default_2e()).unwrap();
    let (e_free, _) = solver2e::ground_state_noninteracting(&pair_potential).unwrap();
    let spectrum = solver1e::lowest_k(&pair_potential, 2).unwrap();
    let slater_ok = (e_free - (spectrum.energy(0) + spectrum.energy(1))).abs() < 1e-10;

    let coarse_grid = Grid::new(15.0, 21).unwrap();
    let coarse = potentials::fourier_potential(spec, coarse_grid).unwrap();
    let (e_int, _) = solver2e::ground_state_interacting(&coarse).unwrap();
    let v_interior: Vec<f64> = coarse.values()[1..20].to_vec();
    let e_dense =
        qmslab_testkit::antisymmetric_ground_energy(&v_interior, coarse_grid.spacing(), 1.0);
    let dense_ok = (e_int - e_dense).abs() < 1e-9;

    let ok = harmonic_ok && box_ok && slater_ok && dense_ok;
    println!(
        "criterion 5 (harmonic E0 {e_harmonic:.6} vs 0.5; box E0 {e_box:.8} vs {e_box_exact:.8}; Slater split {:.2e}; dense gap {:.2e}): {}",
        (e_free - (spectrum.energy(0) + spectrum.energy(1))).abs(),
        (e_int - e_dense).abs(),
        verdict(ok)
    );
    assert!(harmonic_ok, "harmonic E0 {e_harmonic}");
    assert!(box_ok, "box E0 {e_box} vs {e_box_exact}");
    assert!(slater_ok);
    assert!(dense_ok, "{e_int} vs {e_dense}");
}

#[test]
fn criterion_6_propagation_invariants() {
    let spec = &potentials::load_preset_family(PresetFamily::OneElectron)[0];
    let potential = potentials::fourier_potential(spec, Grid::default_1e()).unwrap();
    let (_, psi) = solver1e::ground_state(&potential).unwrap();

    let long = PropagationConfig {
        field_strength: 0.01,
        dt: 0.01,
        total_time: 10.0,
        record_stride: 10,
    };
    let trajectory = propagate(&psi, &potential, &long).unwrap();
    let norm0 = trajectory.norms()[0];
    let norm_drift = trajectory
        .norms()
        .iter()
        .map(|n| (n - norm0).abs())
        .fold(0.0_f64, f64::max);
    let norm_ok = norm_drift < 1e-10;

    let still = PropagationConfig {
        field_strength: 0.0,
        ..long
    };
    let frozen = propagate(&psi, &potential, &still).unwrap();
    let dx = potential.grid().spacing();
    let first = &frozen.densities()[0];
    let density_drift = frozen
        .densities()
        .iter()
        .map(|n| {
            dx * n
                .values()
                .iter()
                .zip(first.values())
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
        })
        .fold(0.0_f64, f64::max);
    let density_ok = density_drift < 1e-8;

    let l2_diff = |a: &Wavefunction1e, b: &Wavefunction1e| -> f64 {
        let sum: f64 = a
            .amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum();
        (dx * sum).sqrt()
    };
    let run = |dt: f64, stride: usize| {
        let config = PropagationConfig {
            field_strength: 0.01,
            dt,
            total_time: 1.0,
            record_stride: stride,
        };
        propagate(&psi, &potential, &config).unwrap()
    };
    let reference = run(0.00125, 800);
    let coarse = run(0.02, 50);
    let fine = run(0.01, 100);
    let err_coarse = l2_diff(
        coarse.states().last().unwrap(),
        reference.states().last().unwrap(),
    );
    let err_fine = l2_diff(
        fine.states().last().unwrap(),
        reference.states().last().unwrap(),
    );
    let ratio = err_coarse / err_fine;
    let ratio_ok = (3.5..=4.5).contains(&ratio);

    let ok = norm_ok && density_ok && ratio_ok;
    println!(
        "criterion 6 (norm drift {norm_drift:.2e} < 1e-10; zero-field density drift {density_drift:.2e} < 1e-8; dt ratio {ratio:.3} in [3.5, 4.5]): {}",
        verdict(ok)
    );
    assert!(norm_ok, "norm drift {norm_drift}");
    assert!(density_ok, "density drift {density_drift}");
    assert!(ratio_ok, "ratio {ratio}");
}

#[test]
fn criterion_7_metric_axioms() {
    let grid = Grid::default_1e();
    let specs = potentials::sample_fourier_family(2024, 15, 0.1, grid).unwrap();
    let states: Vec<(Wavefunction1e, qmslab_core::Density)> = specs
        .iter()
        .map(|spec| {
            let potential = potentials::fourier_potential(spec, grid).unwrap();
            let (_, psi) = solver1e::ground_state(&potential).unwrap();
            let density = solver2e::density_from_1e(&psi);
            (psi, density)
        })
        .collect();
    let conventions = [
        MetricConvention::natural(1).unwrap(),
        MetricConvention::unit(1).unwrap(),
    ];

    let mut triples = 0usize;
    let mut axioms_ok = true;
    for convention in conventions {
        let d_psi = |i: usize, j: usize| {
            wavefunction_distance(&states[i].0, &states[j].0, convention).unwrap()
        };
        let d_n =
            |i: usize, j: usize| density_distance(&states[i].1, &states[j].1, convention).unwrap();
        for i in 0..states.len() {
            axioms_ok &= d_psi(i, i) <= 1e-10 && d_n(i, i) <= 1e-10;
            for j in (i + 1)..states.len() {
                axioms_ok &= d_psi(i, j) == d_psi(j, i) && d_n(i, j) == d_n(j, i);
                axioms_ok &= d_psi(i, j) >= 0.0 && d_n(i, j) >= 0.0;
                for k in (j + 1)..states.len() {
                    axioms_ok &= d_psi(i, k) <= d_psi(i, j) + d_psi(j, k) + 1e-10;
                    axioms_ok &= d_n(i, k) <= d_n(i, j) + d_n(j, k) + 1e-10;
                    if convention.mode() == qmslab_core::NormalizationMode::Natural {
                        triples += 1;
                    }
                }
            }
        }
    }

    let phase = Complex64::new(0.7321_f64.cos(), 0.7321_f64.sin());
    let rotated = Wavefunction1e::new(
        grid,
        states[0].0.amplitudes().iter().map(|a| a * phase).collect(),
    )
    .unwrap();
    let mut phase_gap = 0.0_f64;
    for convention in conventions {
        for (psi, _) in &states[1..] {
            let plain = wavefunction_distance(&states[0].0, psi, convention).unwrap();
            let turned = wavefunction_distance(&rotated, psi, convention).unwrap();
            phase_gap = phase_gap.max((plain - turned).abs());
        }
    }
    let phase_ok = phase_gap < 1e-12;

    let mut conversion_gap = 0.0_f64;
    for i in 0..states.len() {
        for j in (i + 1)..states.len() {
            let natural_psi =
                wavefunction_distance(&states[i].0, &states[j].0, conventions[0]).unwrap();
            let unit_psi =
                wavefunction_distance(&states[i].0, &states[j].0, conventions[1]).unwrap();
            let natural_n = density_distance(&states[i].1, &states[j].1, conventions[0]).unwrap();
            let unit_n = density_distance(&states[i].1, &states[j].1, conventions[1]).unwrap();
            conversion_gap = conversion_gap
                .max((unit_psi - natural_psi / 2.0_f64.sqrt()).abs())
                .max((unit_n - natural_n / 2.0).abs());
        }
    }
    let conversion_ok = conversion_gap < 1e-12;

    let enough = triples >= 100;
    let ok = axioms_ok && phase_ok && conversion_ok && enough;
    println!(
        "criterion 7 (metric axioms over {triples} solved-state triples x 2 conventions; phase gap {phase_gap:.2e} < 1e-12; conversion gap {conversion_gap:.2e} < 1e-12): {}",
        verdict(ok)
    );
    assert!(enough, "{triples} triples");
    assert!(axioms_ok);
    assert!(phase_ok, "phase gap {phase_gap}");
    assert!(conversion_ok, "conversion gap {conversion_gap}");
}

#[test]
fn criterion_8_byte_identical_reruns() {
    let mut identical = true;
    let mut checked = 0usize;
    for (figure, name, data) in [
        (Figure::Fig2, "fig2", "fig2_data.csv"),
        (Figure::Fig3, "fig3", "fig3_data.csv"),
        (Figure::Fig4, "fig4", "fig4_data.csv"),
    ] {
        let first = scratch(&format!("c8_{name}_first"));
        let second = scratch(&format!("c8_{name}_second"));
        commands::cmd_experiment(&settings_into(&first, None), figure, None, None).unwrap();
        commands::cmd_experiment(&settings_into(&second, Some(1)), figure, None, None).unwrap();
        for file in ["records.csv", data, "summary.json"] {
            let a = fs::read(first.join(file)).unwrap();
            let b = fs::read(second.join(file)).unwrap();
            identical &= a == b;
            checked += 1;
        }
    }
    println!(
        "criterion 8 ({checked} files byte-identical across reruns and thread counts): {}",
        verdict(identical)
    );
    assert!(identical);
}
