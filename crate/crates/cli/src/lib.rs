//! Sweeps, threshold reports and self-checks on top of [`ghostsim`].
//!
//! Each command reads an INI-style file (see [`ghostsim::config`] for the
//! grammar). Besides the core sections, sweeps use a `[sweep]` section
//! described in [`sweep`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

use ghostsim::config::{parse_geometry, parse_scenario, parse_units, ConfigFile, GeometrySpec};
use ghostsim::{Context, Scenario};
use thiserror::Error;

pub mod record;
pub mod sweep;
pub mod threshold;
pub mod verify;

pub use record::ResultRecord;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("cannot {action} '{}': {source}", path.display())]
    Io {
        action: &'static str,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<ghostsim::Error> for CliError {
    fn from(e: ghostsim::Error) -> Self {
        match e {
            ghostsim::Error::Config { .. } => CliError::Config(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Any core error raised while interpreting input counts as bad input.
pub(crate) fn as_config<T>(r: ghostsim::Result<T>) -> Result<T> {
    r.map_err(|e| CliError::Config(e.to_string()))
}

/// What a command evaluates: one superposed charge, or the full two-charge
/// protocol.
#[derive(Debug, Clone, PartialEq)]
pub enum Fixed {
    Geometry(GeometrySpec<f64>),
    Scenario(Scenario),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Setup {
    pub ctx: Context,
    pub fixed: Fixed,
}

impl Setup {
    /// `[units]` plus exactly one of `[geometry]` and `[scenario]`.
    pub fn from_config(cfg: &ConfigFile) -> Result<Self> {
        let ctx = as_config(parse_units(cfg.section("units")))?;
        let fixed = match (cfg.section("geometry"), cfg.section("scenario")) {
            (Some(g), None) => Fixed::Geometry(as_config(parse_geometry(g))?),
            (None, Some(s)) => Fixed::Scenario(as_config(parse_scenario(s, ctx))?),
            (Some(_), Some(s)) => {
                return Err(CliError::Config(format!(
                    "configuration error at line {}: [geometry] and [scenario] are mutually exclusive",
                    s.line
                )))
            }
            (None, None) => {
                return Err(CliError::Config("configuration error: need a [geometry] or [scenario] section".into()))
            }
        };
        Ok(Self { ctx, fixed })
    }
}

pub fn read_config(path: &std::path::Path) -> Result<ConfigFile> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { action: "read", path: path.into(), source })?;
    as_config(ConfigFile::parse(&text))
}

/// Reads `path` and rejects sections outside `allowed`.
pub fn as_config_file(path: &std::path::Path, allowed: &[&str]) -> Result<ConfigFile> {
    let cfg = read_config(path)?;
    as_config(cfg.expect_sections(allowed))?;
    Ok(cfg)
}
