//! Family construction shared by the subcommands: resolve the configured
//! source (bundled table or seeded draw) into potentials on the right grid.

use anyhow::Result;
use qmslab_core::potentials::{self, FourierPotentialSpec};
use qmslab_core::{Grid, Potential, PresetFamily};

use crate::config::{FamilySourceKind, Settings};
use crate::core_err;

#[derive(Debug, Clone)]
pub struct Family {
    pub grid: Grid,
    pub specs: Vec<FourierPotentialSpec>,
    pub potentials: Vec<Potential>,
    pub preset: bool,
}

impl Family {
    pub fn len(&self) -> usize {
        self.potentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.potentials.is_empty()
    }

    /// 1-based system ids paired with their potentials, the labeling every
    /// output file uses.
    pub fn numbered(&self) -> Vec<(u32, Potential)> {
        self.potentials
            .iter()
            .enumerate()
            .map(|(i, p)| (i as u32 + 1, p.clone()))
            .collect()
    }

    /// A short source label for summaries.
    pub fn describe(&self, settings: &Settings) -> String {
        if self.preset {
            "preset".to_string()
        } else {
            let f = &settings.family;
            format!(
                "random(seed={}, count={}, lambda={})",
                f.seed, f.count, f.lambda
            )
        }
    }
}

/// Build the family for a command working with `electrons` (1 or 2)
/// electrons per system; the electron count picks the grid and, for preset
/// families, which bundled table to load.
pub fn build_family(settings: &Settings, electrons: u32) -> Result<Family> {
    let grid = if electrons == 1 {
        settings.grid_1e
    } else {
        settings.grid_2e
    };
    let f = settings.family;
    let (specs, preset) = match f.source {
        FamilySourceKind::Preset => {
            let which = if electrons == 1 {
                PresetFamily::OneElectron
            } else {
                PresetFamily::TwoElectron
            };
            (potentials::load_preset_family(which), true)
        }
        FamilySourceKind::Random => (
            potentials::sample_fourier_family(f.seed, f.count, f.lambda, grid).map_err(core_err)?,
            false,
        ),
    };
    let sampled = specs
        .iter()
        .map(|s| potentials::fourier_potential(s, grid))
        .collect::<qmslab_core::Result<Vec<_>>>()
        .map_err(core_err)?;
    Ok(Family {
        grid,
        specs,
        potentials: sampled,
        preset,
    })
}
