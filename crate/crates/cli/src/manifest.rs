use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Everything needed to rerun a command and get the same report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, with the seed made explicit.
    pub arguments: Vec<String>,
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    pub tool_version: String,
}

pub fn digest_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl RunManifest {
    pub fn new(command: &str, arguments: Vec<String>, seed: Option<u64>, inputs: &[PathBuf]) -> Result<Self, CliError> {
        let inputs = inputs
            .iter()
            .map(|p| {
                Ok(InputDigest {
                    path: p.clone(),
                    sha256: digest_file(p)?,
                })
            })
            .collect::<Result<_, CliError>>()?;
        Ok(RunManifest {
            command: command.to_string(),
            arguments,
            seed,
            inputs,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }

    pub fn verify_inputs(&self) -> Result<(), CliError> {
        for input in &self.inputs {
            if digest_file(&input.path)? != input.sha256 {
                return Err(CliError::DigestMismatch(input.path.clone()));
            }
        }
        Ok(())
    }
}

/// Drops `--manifest <path>` / `--manifest=<path>` from an argument list.
pub fn strip_manifest_flag(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--manifest" {
            skip = true;
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}
