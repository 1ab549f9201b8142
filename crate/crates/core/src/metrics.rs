//! Natural wavefunction and density metrics.
//!
//! For states holding N electrons,
//!
//! ```text
//! D_psi = sqrt(2N - 2 |<psi1|psi2>|_N),   D_n = integral |n1 - n2|
//! ```
//!
//! where `<.|.>_N` is taken with both states normalized to N. States are
//! stored unit normalized throughout the crate, so the overlap in the N
//! convention is `N * |<psi1|psi2>|_unit` and both metrics are evaluated
//! from stored data without rescaling anything. Each value is reported
//! either `Natural` (ranges `[0, sqrt(2N)]` and `[0, 2N]`) or
//! `UnitNormalized` (both divided by their maximum, ranging `[0, 1]`);
//! the convention travels with every record so the two are never mixed
//! silently.

use crate::error::{invalid, Error, Result};
use crate::grid::Grid;
use crate::math;
use crate::solver1e::Wavefunction1e;
use crate::solver2e::{Density, ProductState2e, Wavefunction2e};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationMode {
    Natural,
    UnitNormalized,
}

/// Which normalization a distance value is expressed in, together with the
/// electron number it applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricConvention {
    mode: NormalizationMode,
    electron_number: u32,
}

impl MetricConvention {
    pub fn new(mode: NormalizationMode, electron_number: u32) -> Result<Self> {
        if !(1..=2).contains(&electron_number) {
            return Err(invalid("electron number must be 1 or 2"));
        }
        Ok(Self {
            mode,
            electron_number,
        })
    }

    pub fn natural(electron_number: u32) -> Result<Self> {
        Self::new(NormalizationMode::Natural, electron_number)
    }

    pub fn unit(electron_number: u32) -> Result<Self> {
        Self::new(NormalizationMode::UnitNormalized, electron_number)
    }

    pub fn mode(&self) -> NormalizationMode {
        self.mode
    }

    pub fn electron_number(&self) -> u32 {
        self.electron_number
    }

    /// Largest possible wavefunction distance in this convention.
    pub fn max_d_psi(&self) -> f64 {
        match self.mode {
            NormalizationMode::Natural => math::sqrt(2.0 * self.electron_number as f64),
            NormalizationMode::UnitNormalized => 1.0,
        }
    }

    /// Largest possible density distance in this convention.
    pub fn max_d_n(&self) -> f64 {
        match self.mode {
            NormalizationMode::Natural => 2.0 * self.electron_number as f64,
            NormalizationMode::UnitNormalized => 1.0,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.mode {
            NormalizationMode::Natural => "natural",
            NormalizationMode::UnitNormalized => "unit",
        }
    }
}

/// One measured pair of distances, tagged with its convention and an
/// optional timestamp (set for trajectory records, absent for ground-state
/// pairs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceRecord {
    pub system_a: u32,
    pub system_b: u32,
    pub time: Option<f64>,
    pub d_psi: f64,
    pub d_n: f64,
    pub convention: MetricConvention,
}

/// States the wavefunction metric accepts: anything with a grid, an
/// electron count, and a unit-convention overlap.
pub trait MetricState: PartialEq {
    fn metric_grid(&self) -> Grid;
    fn electron_count(&self) -> u32;
    /// `|<self|other>|` with both states unit normalized.
    fn overlap_magnitude(&self, other: &Self) -> Result<f64>;
}

impl MetricState for Wavefunction1e {
    fn metric_grid(&self) -> Grid {
        self.grid()
    }
    fn electron_count(&self) -> u32 {
        1
    }
    fn overlap_magnitude(&self, other: &Self) -> Result<f64> {
        Ok(self.overlap(other)?.norm())
    }
}

impl MetricState for Wavefunction2e {
    fn metric_grid(&self) -> Grid {
        self.grid()
    }
    fn electron_count(&self) -> u32 {
        2
    }
    fn overlap_magnitude(&self, other: &Self) -> Result<f64> {
        Ok(self.overlap(other)?.norm())
    }
}

impl MetricState for ProductState2e {
    fn metric_grid(&self) -> Grid {
        self.grid()
    }
    fn electron_count(&self) -> u32 {
        2
    }
    fn overlap_magnitude(&self, other: &Self) -> Result<f64> {
        Ok(self.overlap(other)?.abs())
    }
}

/// `D_psi` between two states of the same kind.
///
/// Identical inputs short-circuit to exactly zero; otherwise the formula
/// `sqrt(2N (1 - |o|))` (overlap clamped to 1 against quadrature rounding)
/// is used, and the unit-normalized value is the natural one divided by
/// `sqrt(2N)`, making the convention conversion exact by construction.
pub fn wavefunction_distance<S: MetricState>(
    a: &S,
    b: &S,
    convention: MetricConvention,
) -> Result<f64> {
    if a.metric_grid() != b.metric_grid() {
        return Err(Error::GridMismatch);
    }
    if a.electron_count() != convention.electron_number() {
        return Err(Error::ElectronCountMismatch {
            left: a.electron_count(),
            right: convention.electron_number(),
        });
    }
    if a == b {
        return Ok(0.0);
    }
    let n = convention.electron_number() as f64;
    let o = a.overlap_magnitude(b)?.min(1.0);
    let natural = math::sqrt(2.0 * n * (1.0 - o));
    Ok(match convention.mode() {
        NormalizationMode::Natural => natural,
        NormalizationMode::UnitNormalized => natural / math::sqrt(2.0 * n),
    })
}

/// `D_n` between two densities: `dx * sum |n1 - n2|`.
pub fn density_distance(a: &Density, b: &Density, convention: MetricConvention) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let n = convention.electron_number() as f64;
    if a.electron_number() != n || b.electron_number() != n {
        return Err(Error::ElectronCountMismatch {
            left: a.electron_number() as u32,
            right: convention.electron_number(),
        });
    }
    let dx = a.grid().spacing();
    let natural: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
        * dx;
    Ok(match convention.mode() {
        NormalizationMode::Natural => natural,
        NormalizationMode::UnitNormalized => natural / (2.0 * n),
    })
}

/// A least-squares line through the origin for `D_n` against `D_psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    /// Root-mean-square of the residuals `d_n - slope * d_psi`.
    pub rms_residual: f64,
    pub max_abs_residual: f64,
    /// Largest residual relative to the largest observed `d_n`.
    pub max_relative_deviation: f64,
    pub max_d_psi: f64,
    pub max_d_n: f64,
    pub count: usize,
}

/// Fit `d_n = slope * d_psi` over the records. All records must share one
/// convention; the wavefunction distances must not all be zero.
pub fn fit_slope_through_origin(records: &[DistanceRecord]) -> Result<SlopeFit> {
    if records.len() < 2 {
        return Err(invalid("slope fit needs at least two records"));
    }
    let convention = records[0].convention;
    if records.iter().any(|r| r.convention != convention) {
        return Err(Error::ConventionMismatch);
    }
    let sum_xy: f64 = records.iter().map(|r| r.d_psi * r.d_n).sum();
    let sum_xx: f64 = records.iter().map(|r| r.d_psi * r.d_psi).sum();
    if sum_xx == 0.0 {
        return Err(Error::DegenerateSlope);
    }
    let slope = sum_xy / sum_xx;
    let mut sum_r2 = 0.0;
    let mut max_abs = 0.0_f64;
    let mut max_d_psi = 0.0_f64;
    let mut max_d_n = 0.0_f64;
    for r in records {
        let resid = r.d_n - slope * r.d_psi;
        sum_r2 += resid * resid;
        max_abs = max_abs.max(resid.abs());
        max_d_psi = max_d_psi.max(r.d_psi);
        max_d_n = max_d_n.max(r.d_n);
    }
    Ok(SlopeFit {
        slope,
        rms_residual: math::sqrt(sum_r2 / records.len() as f64),
        max_abs_residual: max_abs,
        max_relative_deviation: if max_d_n > 0.0 {
            max_abs / max_d_n
        } else {
            0.0
        },
        max_d_psi,
        max_d_n,
        count: records.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{fourier_potential, load_preset_family, PresetFamily};
    use crate::solver1e::ground_state;
    use crate::solver2e::density_from_1e;
    use alloc::vec;
    use alloc::vec::Vec;
    use num_complex::Complex64;

    fn spike(grid: Grid, at: usize) -> Wavefunction1e {
        let mut amps = vec![Complex64::new(0.0, 0.0); grid.num_points()];
        amps[at] = Complex64::new(1.0 / math::sqrt(grid.spacing()), 0.0);
        Wavefunction1e::new(grid, amps).unwrap()
    }

    fn spike_2e(grid: Grid, i: usize, j: usize) -> Wavefunction2e {
        let n = grid.num_points();
        let mut tri = vec![Complex64::new(0.0, 0.0); n * (n - 1) / 2];
        let dx = grid.spacing();
        let t = i * (2 * n - i - 1) / 2 + (j - i - 1);
        tri[t] = Complex64::new(1.0 / (math::sqrt(2.0) * dx), 0.0);
        Wavefunction2e::new(grid, tri).unwrap()
    }

    fn solved_states(count: usize) -> Vec<(Wavefunction1e, Density)> {
        let grid = Grid::default_1e();
        load_preset_family(PresetFamily::OneElectron)
            .iter()
            .take(count)
            .map(|spec| {
                let v = fourier_potential(spec, grid).unwrap();
                let (_, psi) = ground_state(&v).unwrap();
                let n = density_from_1e(&psi);
                (psi, n)
            })
            .collect()
    }

    #[test]
    fn self_distance_is_exactly_zero() {
        let states = solved_states(1);
        for convention in [
            MetricConvention::natural(1).unwrap(),
            MetricConvention::unit(1).unwrap(),
        ] {
            assert_eq!(
                wavefunction_distance(&states[0].0, &states[0].0, convention).unwrap(),
                0.0
            );
            assert_eq!(
                density_distance(&states[0].1, &states[0].1, convention).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn orthogonal_states_reach_the_maximum() {
        let grid = Grid::new(5.0, 11).unwrap();
        let a = spike(grid, 3);
        let b = spike(grid, 7);
        let natural = MetricConvention::natural(1).unwrap();
        let unit = MetricConvention::unit(1).unwrap();
        assert_eq!(
            wavefunction_distance(&a, &b, natural).unwrap(),
            math::sqrt(2.0)
        );
        assert_eq!(wavefunction_distance(&a, &b, unit).unwrap(), 1.0);

        let a2 = spike_2e(grid, 1, 2);
        let b2 = spike_2e(grid, 5, 8);
        let natural2 = MetricConvention::natural(2).unwrap();
        let unit2 = MetricConvention::unit(2).unwrap();
        assert_eq!(wavefunction_distance(&a2, &b2, natural2).unwrap(), 2.0);
        assert_eq!(wavefunction_distance(&a2, &b2, unit2).unwrap(), 1.0);
    }

    #[test]
    fn disjoint_densities_reach_the_maximum() {
        let grid = Grid::new(5.0, 11).unwrap();
        let n1 = density_from_1e(&spike(grid, 2));
        let n2 = density_from_1e(&spike(grid, 8));
        let natural = MetricConvention::natural(1).unwrap();
        let unit = MetricConvention::unit(1).unwrap();
        assert!((density_distance(&n1, &n2, natural).unwrap() - 2.0).abs() < 1e-12);
        assert!((density_distance(&n1, &n2, unit).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn metric_axioms_hold_on_solved_states() {
        let states = solved_states(5);
        let convention = MetricConvention::natural(1).unwrap();
        for (a, na) in &states {
            for (b, nb) in &states {
                let d_ab = wavefunction_distance(a, b, convention).unwrap();
                let d_ba = wavefunction_distance(b, a, convention).unwrap();
                assert_eq!(d_ab, d_ba);
                assert!(d_ab >= 0.0);
                let dn_ab = density_distance(na, nb, convention).unwrap();
                let dn_ba = density_distance(nb, na, convention).unwrap();
                assert_eq!(dn_ab, dn_ba);
                for (c, nc) in &states {
                    let d_ac = wavefunction_distance(a, c, convention).unwrap();
                    let d_bc = wavefunction_distance(b, c, convention).unwrap();
                    assert!(d_ac <= d_ab + d_bc + 1e-10);
                    let dn_ac = density_distance(na, nc, convention).unwrap();
                    let dn_bc = density_distance(nb, nc, convention).unwrap();
                    assert!(dn_ac <= dn_ab + dn_bc + 1e-10);
                }
            }
        }
    }

    #[test]
    fn global_phase_leaves_distances_alone() {
        let states = solved_states(2);
        let grid = states[0].0.grid();
        let rotated: Vec<Complex64> = states[0]
            .0
            .amplitudes()
            .iter()
            .map(|a| a * Complex64::new(0.28, -0.96))
            .collect();
        let rotated = Wavefunction1e::new(grid, rotated).unwrap();
        let convention = MetricConvention::natural(1).unwrap();
        let before = wavefunction_distance(&states[0].0, &states[1].0, convention).unwrap();
        let after = wavefunction_distance(&rotated, &states[1].0, convention).unwrap();
        assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn unit_values_are_natural_over_maximum() {
        let states = solved_states(4);
        let natural = MetricConvention::natural(1).unwrap();
        let unit = MetricConvention::unit(1).unwrap();
        for (a, na) in &states {
            for (b, nb) in &states {
                let d_nat = wavefunction_distance(a, b, natural).unwrap();
                let d_unit = wavefunction_distance(a, b, unit).unwrap();
                assert_eq!(d_unit, d_nat / natural.max_d_psi());
                assert!(d_nat <= natural.max_d_psi());
                assert!(d_unit <= 1.0);
                let n_nat = density_distance(na, nb, natural).unwrap();
                let n_unit = density_distance(na, nb, unit).unwrap();
                assert_eq!(n_unit, n_nat / natural.max_d_n());
                assert!(n_nat <= natural.max_d_n());
            }
        }
    }

    fn record(d_psi: f64, d_n: f64) -> DistanceRecord {
        DistanceRecord {
            system_a: 0,
            system_b: 1,
            time: None,
            d_psi,
            d_n,
            convention: MetricConvention::natural(1).unwrap(),
        }
    }

    #[test]
    fn exact_lines_fit_exactly() {
        let fit = fit_slope_through_origin(&[record(1.0, 2.0), record(2.0, 4.0), record(0.5, 1.0)])
            .unwrap();
        assert_eq!(fit.slope, 2.0);
        assert_eq!(fit.rms_residual, 0.0);
        assert_eq!(fit.max_relative_deviation, 0.0);
        assert_eq!(fit.count, 3);

        let fit = fit_slope_through_origin(&[record(1.0, 1.5), record(2.0, 3.0)]).unwrap();
        assert!((fit.slope - 1.5).abs() < 1e-15);
    }

    #[test]
    fn fit_rejects_degenerate_inputs() {
        assert!(matches!(
            fit_slope_through_origin(&[record(0.0, 1.0), record(0.0, 2.0)]),
            Err(Error::DegenerateSlope)
        ));
        assert!(fit_slope_through_origin(&[record(1.0, 1.0)]).is_err());
        let mut mixed = vec![record(1.0, 1.0), record(2.0, 2.0)];
        mixed[1].convention = MetricConvention::unit(1).unwrap();
        assert!(matches!(
            fit_slope_through_origin(&mixed),
            Err(Error::ConventionMismatch)
        ));
    }

    #[test]
    fn mismatches_are_rejected() {
        let states = solved_states(1);
        let other_grid = Grid::new(15.0, 299).unwrap();
        let other = spike(other_grid, 10);
        let convention = MetricConvention::natural(1).unwrap();
        assert!(matches!(
            wavefunction_distance(&states[0].0, &other, convention),
            Err(Error::GridMismatch)
        ));
        let wrong_n = MetricConvention::natural(2).unwrap();
        assert!(matches!(
            wavefunction_distance(&states[0].0, &states[0].0, wrong_n),
            Err(Error::ElectronCountMismatch { .. })
        ));
        assert!(MetricConvention::natural(3).is_err());
    }

    #[test]
    fn product_states_use_the_squared_orbital_overlap() {
        use crate::solver2e::product_ground_state;

        let grid = Grid::new(15.0, 81).unwrap();
        let family = load_preset_family(PresetFamily::TwoElectron);
        let a = product_ground_state(&fourier_potential(&family[0], grid).unwrap())
            .unwrap()
            .1;
        let b = product_ground_state(&fourier_potential(&family[1], grid).unwrap())
            .unwrap()
            .1;
        let natural = MetricConvention::natural(2).unwrap();
        let unit = MetricConvention::unit(2).unwrap();
        let s = a.orbital_overlap(&b).unwrap();
        let expected = 2.0 * math::sqrt(1.0 - s * s);
        let d_nat = wavefunction_distance(&a, &b, natural).unwrap();
        assert!((d_nat - expected).abs() < 1e-12);
        let d_unit = wavefunction_distance(&a, &b, unit).unwrap();
        assert_eq!(d_unit, d_nat / 2.0);
        assert_eq!(wavefunction_distance(&a, &a, natural).unwrap(), 0.0);
    }
}
