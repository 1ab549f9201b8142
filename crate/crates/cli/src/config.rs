//! Run configuration: the TOML schema, flag overrides, and their
//! precedence (flag, then environment, then file, then default).

use std::env;
use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::thread;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use qmslab_core::dynamics::PropagationConfig;
use qmslab_core::{Grid, MeanFieldConfig, NormalizationMode};
use serde::Deserialize;

use crate::core_err;

pub const SCHEMA_VERSION: u32 = 1;
pub const OUT_DIR_ENV: &str = "QMSLAB_OUT";

/// Flags every subcommand accepts; each overrides its config-file
/// counterpart.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory (overrides QMSLAB_OUT and the config file).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker thread cap for solves and propagation.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Use the bundled ten-system family (the default).
    #[arg(long, global = true, conflicts_with_all = ["random", "seed", "count", "lambda"])]
    pub preset: bool,
    /// Draw a seeded random family instead of the bundled one.
    #[arg(long, global = true)]
    pub random: bool,
    /// Seed for random families (implies --random).
    #[arg(long, global = true, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Number of systems in a random family.
    #[arg(long, global = true, value_name = "N")]
    pub count: Option<usize>,
    /// Microwell amplitude for random families.
    #[arg(long, global = true, value_name = "LAMBDA", allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Metric convention for single-convention outputs.
    #[arg(long, global = true, value_enum, value_name = "WHICH")]
    pub convention: Option<ConventionArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionArg {
    Natural,
    Unit,
}

impl From<ConventionArg> for NormalizationMode {
    fn from(value: ConventionArg) -> Self {
        match value {
            ConventionArg::Natural => NormalizationMode::Natural,
            ConventionArg::Unit => NormalizationMode::UnitNormalized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilySourceKind {
    Preset,
    Random,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub schema_version: u32,
    pub grid: GridSection,
    pub family: FamilySection,
    pub solver: SolverSection,
    pub propagation: PropagationSection,
    pub output: OutputSection,
}

impl Default for FileConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            grid: GridSection::default(),
            family: FamilySection::default(),
            solver: SolverSection::default(),
            propagation: PropagationSection::default(),
            output: OutputSection::default(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub half_length: f64,
    pub points_1e: usize,
    pub points_2e: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        let one = Grid::default_1e();
        let two = Grid::default_2e();
        Self {
            half_length: one.half_length(),
            points_1e: one.num_points(),
            points_2e: two.num_points(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FamilySection {
    pub source: FamilySourceKind,
    pub seed: u64,
    pub count: usize,
    pub lambda: f64,
}

impl Default for FamilySection {
    fn default() -> Self {
        Self {
            source: FamilySourceKind::Preset,
            seed: 1,
            count: 10,
            lambda: 0.1,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    /// Scale on the soft electron-electron interaction.
    pub interaction_strength: f64,
    /// Mean-field update sweeps for the interacting family solves.
    pub sweeps: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        let mf = MeanFieldConfig::default();
        Self {
            interaction_strength: mf.interaction_strength,
            sweeps: mf.sweeps,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PropagationSection {
    pub field_strength: f64,
    pub dt: f64,
    pub total_time: f64,
    pub record_stride: usize,
}

impl Default for PropagationSection {
    fn default() -> Self {
        let p = PropagationConfig::default();
        Self {
            field_strength: p.field_strength,
            dt: p.dt,
            total_time: p.total_time,
            record_stride: p.record_stride,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub convention: Option<ConventionArg>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            convention: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySettings {
    pub source: FamilySourceKind,
    pub seed: u64,
    pub count: usize,
    pub lambda: f64,
}

/// Everything a subcommand needs, fully validated.
#[derive(Debug, Clone)]
pub struct Settings {
    pub grid_1e: Grid,
    pub grid_2e: Grid,
    pub family: FamilySettings,
    pub mean_field: MeanFieldConfig,
    pub propagation: PropagationConfig,
    pub convention: Option<NormalizationMode>,
    pub out_dir: PathBuf,
    pub threads: usize,
}

impl Settings {
    pub fn resolve(common: &CommonArgs) -> Result<Self> {
        Self::resolve_with_env(common, env::var_os(OUT_DIR_ENV))
    }

    /// Resolution with the environment override passed in explicitly, so
    /// tests need not mutate the process environment.
    pub fn resolve_with_env(common: &CommonArgs, env_out: Option<OsString>) -> Result<Self> {
        let file = match &common.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                toml::from_str::<FileConfig>(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => FileConfig::default(),
        };
        if file.schema_version != SCHEMA_VERSION {
            bail!(
                "config schema_version {} is not supported (this build reads version {})",
                file.schema_version,
                SCHEMA_VERSION
            );
        }

        let source = if common.random || common.seed.is_some() {
            FamilySourceKind::Random
        } else if common.preset {
            FamilySourceKind::Preset
        } else {
            file.family.source
        };
        if source == FamilySourceKind::Preset && (common.count.is_some() || common.lambda.is_some())
        {
            bail!("--count and --lambda apply to random families (add --random)");
        }
        let family = FamilySettings {
            source,
            seed: common.seed.unwrap_or(file.family.seed),
            count: common.count.unwrap_or(file.family.count),
            lambda: common.lambda.unwrap_or(file.family.lambda),
        };
        if family.source == FamilySourceKind::Random {
            if family.count == 0 {
                bail!("a random family needs at least 1 system");
            }
            if !family.lambda.is_finite() {
                bail!("lambda must be finite, got {}", family.lambda);
            }
        }

        let grid_1e = Grid::new(file.grid.half_length, file.grid.points_1e).map_err(core_err)?;
        let grid_2e = Grid::new(file.grid.half_length, file.grid.points_2e).map_err(core_err)?;

        if !file.solver.interaction_strength.is_finite() || file.solver.interaction_strength < 0.0 {
            bail!(
                "solver.interaction_strength must be finite and >= 0, got {}",
                file.solver.interaction_strength
            );
        }
        if file.solver.sweeps == 0 {
            bail!("solver.sweeps must be at least 1");
        }
        let mean_field = MeanFieldConfig {
            interaction_strength: file.solver.interaction_strength,
            sweeps: file.solver.sweeps,
        };

        let propagation = PropagationConfig {
            field_strength: file.propagation.field_strength,
            dt: file.propagation.dt,
            total_time: file.propagation.total_time,
            record_stride: file.propagation.record_stride,
        };
        propagation.validate().map_err(core_err)?;

        let threads = match common.threads {
            Some(0) => bail!("--threads must be at least 1"),
            Some(n) => n,
            None => thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
        };

        let out_dir = common
            .out
            .clone()
            .or_else(|| env_out.map(PathBuf::from))
            .unwrap_or_else(|| file.output.dir.clone());

        let convention = common
            .convention
            .or(file.output.convention)
            .map(NormalizationMode::from);

        Ok(Settings {
            grid_1e,
            grid_2e,
            family,
            mean_field,
            propagation,
            convention,
            out_dir,
            threads,
        })
    }
}
