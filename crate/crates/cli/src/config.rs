use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cli::{Common, Format};
use crate::CliError;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_OUT: &str = "chronolens-out";

/// Contents of a `--config` file. Each subcommand reads its own table;
/// keys are checked against the subcommand's parameter set.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub formats: Option<Vec<Format>>,
    pub identities: Option<toml::Table>,
    pub kovalevskaya: Option<toml::Table>,
    pub taylor: Option<toml::Table>,
    #[serde(rename = "backward-gate")]
    pub backward_gate: Option<toml::Table>,
    #[serde(rename = "kernel-bounds")]
    pub kernel_bounds: Option<toml::Table>,
    pub gallery: Option<toml::Table>,
    pub nonlinear: Option<toml::Table>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    pub fn section(&self, name: &str) -> Option<&toml::Table> {
        match name {
            "identities" => self.identities.as_ref(),
            "kovalevskaya" => self.kovalevskaya.as_ref(),
            "taylor" => self.taylor.as_ref(),
            "backward-gate" => self.backward_gate.as_ref(),
            "kernel-bounds" => self.kernel_bounds.as_ref(),
            "gallery" => self.gallery.as_ref(),
            "nonlinear" => self.nonlinear.as_ref(),
            _ => None,
        }
    }
}

/// Settings shared by every experiment in one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSettings {
    pub seed: u64,
    pub formats: Vec<Format>,
    pub out: PathBuf,
}

impl RunSettings {
    pub fn resolve(common: &Common, file: &ConfigFile) -> Self {
        let mut formats = common
            .formats
            .clone()
            .or_else(|| file.formats.clone())
            .unwrap_or_else(|| vec![Format::Json, Format::Csv, Format::Svg]);
        formats.sort();
        formats.dedup();
        Self {
            seed: common.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            formats,
            out: common.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
        }
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

pub fn load_file(common: &Common) -> Result<ConfigFile, CliError> {
    common.config.as_deref().map(ConfigFile::load).transpose().map(Option::unwrap_or_default)
}

/// Parameters from defaults, then the config table, then explicit flags.
pub fn resolve<P: DeserializeOwned>(section: Option<&toml::Table>, flags: &impl Serialize) -> Result<P, CliError> {
    let mut table = section.cloned().unwrap_or_default();
    let flags = toml::Table::try_from(flags).map_err(CliError::config)?;
    for (k, v) in flags {
        table.insert(k, v);
    }
    toml::Value::Table(table).try_into().map_err(CliError::config)
}
