// SPDX-License-Identifier: Apache-2.0

//! Provenance manifest: one JSON file per run directory recording, per
//! stage, the seed, the stage configuration, input file hashes, and the
//! artifacts written.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct Manifest {
    pub stages: BTreeMap<String, StageRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StageRecord {
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    /// Input path -> FNV-1a hash of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<String>,
}

/// 64-bit FNV-1a over the file bytes, hex encoded.
pub fn hash_file(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path)?;
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    Ok(format!("{hash:016x}"))
}

pub fn record_stage(
    out_dir: &Path,
    stage: &str,
    seed: u64,
    config: &[(&str, String)],
    inputs: &[&Path],
    outputs: &[&Path],
) -> Result<(), CliError> {
    let manifest_path = out_dir.join("manifest.json");
    let mut manifest: Manifest = if manifest_path.exists() {
        serde_json::from_str(&std::fs::read_to_string(&manifest_path)?)?
    } else {
        Manifest::default()
    };
    let mut input_hashes = BTreeMap::new();
    for path in inputs {
        input_hashes.insert(path.display().to_string(), hash_file(path)?);
    }
    manifest.stages.insert(
        stage.to_string(),
        StageRecord {
            seed,
            config: config.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            inputs: input_hashes,
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        },
    );
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(&manifest_path, text)?;
    Ok(())
}
