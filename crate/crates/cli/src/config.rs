//! Settings file: TOML key = value pairs named like the long flags, with
//! underscores instead of dashes. Relative paths are taken from the file's
//! directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::args::{DecrementArg, ReportFormat};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub instance: Option<PathBuf>,
    pub instances: Option<PathBuf>,
    pub max_cluster_size: Option<usize>,
    pub m: Option<OneOrMany<usize>>,
    pub bits: Option<OneOrMany<u32>>,
    pub seed: Option<u64>,
    pub seeds: Option<OneOrMany<u64>>,
    pub macros: Option<usize>,
    pub chip_macros: Option<usize>,
    pub nonideal_eps: Option<f64>,
    pub optima: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub report: Option<ReportFormat>,
    pub deterministic: Option<bool>,
    pub decrement: Option<DecrementArg>,
    pub tour: Option<PathBuf>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::usage(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut cfg.instance,
            &mut cfg.instances,
            &mut cfg.optima,
            &mut cfg.trace,
            &mut cfg.tour,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// Loads `path` when given, otherwise an empty config.
    pub fn load_opt(path: Option<&Path>) -> CliResult<Self> {
        path.map(Self::load).transpose().map(Option::unwrap_or_default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags_and_lists() {
        let cfg = ConfigFile::parse("bits = 3\nm = [8, 12]\nseed = 5\ndecrement = \"per-update\"\n").unwrap();
        assert_eq!(cfg.bits, Some(OneOrMany::One(3)));
        assert_eq!(cfg.m.unwrap().to_vec(), vec![8, 12]);
        assert_eq!(cfg.seed, Some(5));
        assert_eq!(cfg.decrement, Some(DecrementArg::PerUpdate));
    }

    #[test]
    fn unknown_keys_are_usage_errors() {
        let err = ConfigFile::parse("bitz = 3\n").unwrap_err();
        assert_eq!(err.code, crate::error::exit::USAGE);
    }
}
