//! Random confining potentials and the bundled preset families.
//!
//! A potential is a steep `x^10/10^11` confining envelope plus either a
//! short Fourier series of microwells,
//!
//! ```text
//! V(x) = x^10/10^11 + Λ Σ_{n=1..M} (a_n cos(nπx/L) + b_n sin(nπx/L))
//! ```
//!
//! or an even polynomial `Σ_k c_k x^{2k}`. Families are sampled with
//! uniform coefficients from a seeded [`SplitMix64`] stream, or loaded from
//! the bundled table of twenty reference systems.

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::grid::Grid;
use crate::math;
use crate::rng::SplitMix64;

/// Harmonics per sampled Fourier potential.
pub const DEFAULT_NUM_TERMS: usize = 3;

/// Even powers per sampled polynomial potential (`x^2 .. x^10`).
pub const DEFAULT_POLY_TERMS: usize = 5;

/// Confinement envelope `x^POWER / DIVISOR`.
pub const CONFINEMENT_POWER: u32 = 10;
pub const CONFINEMENT_DIVISOR: f64 = 1.0e11;

/// The bundled preset table, verbatim.
pub const PRESET_TABLE_CSV: &str = include_str!("preset_table.csv");

/// How the six coefficient columns of the bundled table feed the series:
/// entry `j` is `(harmonic index, is_sin)`, so file order means
/// `(a_1, b_1, a_2, b_2, a_3, b_3)`. The pairing is a convention; swap
/// entries here to try another one.
pub const PRESET_COLUMN_MAP: [(usize, bool); 6] = [
    (0, false),
    (0, true),
    (1, false),
    (1, true),
    (2, false),
    (2, true),
];

fn envelope(x: f64) -> f64 {
    math::powi(x, CONFINEMENT_POWER) / CONFINEMENT_DIVISOR
}

/// Fourier microwell coefficients. `lambda` scales the oscillatory sum
/// only; the confining envelope is fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierPotentialSpec {
    pub cos_coeffs: Vec<f64>,
    pub sin_coeffs: Vec<f64>,
    pub lambda: f64,
}

impl FourierPotentialSpec {
    pub fn new(cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>, lambda: f64) -> Result<Self> {
        let spec = Self {
            cos_coeffs,
            sin_coeffs,
            lambda,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn num_terms(&self) -> usize {
        self.cos_coeffs.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.cos_coeffs.is_empty() || self.cos_coeffs.len() != self.sin_coeffs.len() {
            return Err(invalid(
                "fourier spec needs matching, non-empty cos/sin coefficient lists",
            ));
        }
        let finite = self
            .cos_coeffs
            .iter()
            .chain(&self.sin_coeffs)
            .all(|c| c.is_finite());
        if !finite || !self.lambda.is_finite() {
            return Err(invalid("fourier coefficients must be finite"));
        }
        Ok(())
    }
}

/// Even polynomial coefficients: `even_coeffs[k-1]` multiplies `x^{2k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPotentialSpec {
    pub even_coeffs: Vec<f64>,
    pub envelope: bool,
}

impl PolynomialPotentialSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.even_coeffs.iter().all(|c| c.is_finite()) {
            return Err(invalid("polynomial coefficients must be finite"));
        }
        Ok(())
    }
}

/// A potential sampled on its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    grid: Grid,
    values: Vec<f64>,
}

impl Potential {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.num_points() {
            return Err(invalid("potential values must cover every grid point"));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(invalid("potential values must be finite"));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }
}

/// Evaluate a Fourier spec on a grid.
pub fn fourier_potential(spec: &FourierPotentialSpec, grid: Grid) -> Result<Potential> {
    spec.validate()?;
    let l = grid.half_length();
    let values = grid
        .points()
        .map(|x| {
            let mut osc = 0.0;
            for n in 0..spec.num_terms() {
                let arg = (n + 1) as f64 * core::f64::consts::PI * x / l;
                osc += spec.cos_coeffs[n] * math::cos(arg) + spec.sin_coeffs[n] * math::sin(arg);
            }
            envelope(x) + spec.lambda * osc
        })
        .collect();
    Potential::new(grid, values)
}

/// Evaluate an even-polynomial spec on a grid.
pub fn polynomial_potential(spec: &PolynomialPotentialSpec, grid: Grid) -> Result<Potential> {
    spec.validate()?;
    let values = grid
        .points()
        .map(|x| {
            let mut v = if spec.envelope { envelope(x) } else { 0.0 };
            for (k, c) in spec.even_coeffs.iter().enumerate() {
                v += c * math::powi(x, 2 * (k as u32 + 1));
            }
            v
        })
        .collect();
    Potential::new(grid, values)
}

/// Sample `count` Fourier specs with coefficients i.i.d. uniform on
/// `[-L/3, L/3]`. Member `i` draws from its own sub-seed, so the family is
/// reproducible and prefix-stable: the first `k` members never depend on
/// `count`.
pub fn sample_fourier_family(
    seed: u64,
    count: usize,
    lambda: f64,
    grid: Grid,
) -> Result<Vec<FourierPotentialSpec>> {
    if count == 0 {
        return Err(invalid("family size must be at least 1"));
    }
    if !lambda.is_finite() {
        return Err(invalid("lambda must be finite"));
    }
    let bound = grid.half_length() / 3.0;
    let mut parent = SplitMix64::new(seed);
    let mut family = Vec::with_capacity(count);
    for _ in 0..count {
        let mut rng = SplitMix64::new(parent.derive_seed());
        let mut cos_coeffs = Vec::with_capacity(DEFAULT_NUM_TERMS);
        let mut sin_coeffs = Vec::with_capacity(DEFAULT_NUM_TERMS);
        for _ in 0..DEFAULT_NUM_TERMS {
            cos_coeffs.push(rng.uniform(-bound, bound));
            sin_coeffs.push(rng.uniform(-bound, bound));
        }
        family.push(FourierPotentialSpec {
            cos_coeffs,
            sin_coeffs,
            lambda,
        });
    }
    Ok(family)
}

/// Sample `count` even-polynomial specs, `c_k` i.i.d. uniform on
/// `[-1/2, 1/2]`, confining envelope on. Same sub-seed layout as
/// [`sample_fourier_family`].
pub fn sample_polynomial_family(seed: u64, count: usize) -> Result<Vec<PolynomialPotentialSpec>> {
    if count == 0 {
        return Err(invalid("family size must be at least 1"));
    }
    let mut parent = SplitMix64::new(seed);
    let mut family = Vec::with_capacity(count);
    for _ in 0..count {
        let mut rng = SplitMix64::new(parent.derive_seed());
        let even_coeffs = (0..DEFAULT_POLY_TERMS)
            .map(|_| rng.uniform(-0.5, 0.5))
            .collect();
        family.push(PolynomialPotentialSpec {
            even_coeffs,
            envelope: true,
        });
    }
    Ok(family)
}

/// Which bundled preset family to load.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetFamily {
    OneElectron,
    TwoElectron,
}

impl PresetFamily {
    fn tag(self) -> &'static str {
        match self {
            PresetFamily::OneElectron => "one_electron",
            PresetFamily::TwoElectron => "two_electron",
        }
    }
}

/// Load the ten bundled specs for a family. The table stores coefficients
/// with the microwell scale already folded in, so the returned specs use
/// `lambda = 1`.
pub fn load_preset_family(which: PresetFamily) -> Vec<FourierPotentialSpec> {
    let mut family = Vec::with_capacity(10);
    for line in PRESET_TABLE_CSV.lines().skip(1) {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let tag = fields.next().expect("bundled table rows start with family");
        if tag != which.tag() {
            continue;
        }
        let _system = fields.next();
        let mut cos_coeffs = alloc::vec![0.0; DEFAULT_NUM_TERMS];
        let mut sin_coeffs = alloc::vec![0.0; DEFAULT_NUM_TERMS];
        for &(n, is_sin) in &PRESET_COLUMN_MAP {
            let value: f64 = fields
                .next()
                .expect("bundled table rows have six coefficients")
                .trim()
                .parse()
                .expect("bundled table coefficients parse as f64");
            if is_sin {
                sin_coeffs[n] = value;
            } else {
                cos_coeffs[n] = value;
            }
        }
        family.push(FourierPotentialSpec {
            cos_coeffs,
            sin_coeffs,
            lambda: 1.0,
        });
    }
    family
}

/// Shift a potential down by a reference energy (for plots that put the
/// ground-state energy at zero).
pub fn shift_to_ground_energy(potential: &Potential, e0: f64) -> Result<Potential> {
    if !e0.is_finite() {
        return Err(invalid("reference energy must be finite"));
    }
    let values = potential.values.iter().map(|v| v - e0).collect();
    Potential::new(potential.grid, values)
}
