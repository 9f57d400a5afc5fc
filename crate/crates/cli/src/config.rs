//! JSON configuration files. Keys mirror the command-line flags
//! (`pbar-db`, `cgr-db`, `rel-tol`, ...); a flag given on the command line
//! always wins over the same key in the file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::grid::GridValue;
use crate::sweep::{Base, Format, Mode};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFile {
    pub mode: Option<Mode>,
    pub pbar_db: Option<GridValue>,
    pub cgr: Option<GridValue>,
    pub cgr_db: Option<GridValue>,
    pub pcc: Option<GridValue>,
    pub format: Option<Format>,
    pub base: Option<Base>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<String>,
    pub samples: Option<usize>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
