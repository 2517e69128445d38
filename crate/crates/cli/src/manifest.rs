//! Run manifests: everything needed to replay a run bit for bit.

use std::path::Path;

use bubble3_core::Error;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Original command line, binary name excluded.
    pub argv: Vec<String>,
    pub config_path: Option<String>,
    /// Full text of the config file at run time (None when the built-in
    /// defaults were used).
    pub config_content: Option<String>,
    pub out_dir: String,
    pub seed: u64,
}

impl Manifest {
    pub fn new(
        subcommand: &str,
        argv: Vec<String>,
        config_path: Option<String>,
        config_content: Option<String>,
        out_dir: String,
        seed: u64,
    ) -> Self {
        Manifest {
            tool: "bubble3".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: subcommand.into(),
            argv,
            config_path,
            config_content,
            out_dir,
            seed,
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), Error> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, json).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::ConfigIo {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Config {
            path: path.display().to_string(),
            line: 0,
            msg: format!("not a valid manifest: {e}"),
        })
    }
}
