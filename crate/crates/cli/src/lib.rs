//! Command-line companion to `qmslab-core`: configuration, family
//! construction, parallel drivers, file formats, and the subcommand
//! implementations behind the `qmslab` binary.

pub mod commands;
pub mod config;
pub mod family;
pub mod parallel;
pub mod records;
pub mod svg;

/// Bridge core errors (no_std, Display-only) into `anyhow`.
pub(crate) fn core_err(e: qmslab_core::Error) -> anyhow::Error {
    anyhow::anyhow!("{e}")
}
