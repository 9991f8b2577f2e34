//! Parameter selection: built-in presets, TOML preset files, or explicit
//! values.
//!
//! A preset file holds one table:
//!
//! ```toml
//! name = "tiny"
//! n = 32
//! d = 3
//! r = 8
//! sigma_ratio = "1/2"   # optional, also f, l_k, message_bits, sequence
//! ```

use std::path::{Path, PathBuf};

use kem_ldlc::params::{
    builtin_preset, builtin_presets, Preset, DEFAULT_F, DEFAULT_LK, DEFAULT_MESSAGE_BITS,
};
use kem_ldlc::CodeParams;
use ldlc_ratmath::Rational;
use serde::Deserialize;

use crate::error::{usage, CliError, CliResult};

pub const PRESET_DIR_ENV: &str = "LDLC_PRESET_DIR";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetFile {
    name: String,
    n: usize,
    d: usize,
    r: u32,
    f: Option<u32>,
    l_k: Option<usize>,
    sigma_ratio: Option<String>,
    message_bits: Option<u32>,
    sequence: Option<String>,
}

pub fn parse_ratio(s: &str) -> CliResult<Rational> {
    let s = s.trim();
    if let Ok(r) = s.parse::<Rational>() {
        return Ok(r);
    }
    let x: f64 = s
        .parse()
        .map_err(|_| usage(format!("cannot parse '{s}' as a ratio like 1/2 or 0.5")))?;
    ldlc_ratmath::rational::from_f64(x).ok_or_else(|| usage(format!("ratio '{s}' is not finite")))
}

fn load_file(path: &Path) -> CliResult<Preset> {
    let bad = |reason: String| CliError::Preset {
        path: path.to_path_buf(),
        reason,
    };
    let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let raw: PresetFile = toml::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let sigma_ratio = match &raw.sigma_ratio {
        Some(s) => parse_ratio(s).map_err(|e| bad(e.to_string()))?,
        None => Rational::new(1.into(), 2.into()),
    };
    let params = CodeParams::new(
        raw.n,
        raw.d,
        raw.r,
        raw.f.unwrap_or(DEFAULT_F),
        raw.l_k.unwrap_or(DEFAULT_LK),
        sigma_ratio,
    )
    .and_then(|p| p.with_message_bits(raw.message_bits.unwrap_or(DEFAULT_MESSAGE_BITS)))
    .map_err(|e| bad(e.to_string()))?;
    let sequence = raw
        .sequence
        .unwrap_or_else(|| default_sequence_name(raw.d).to_string());
    Ok(Preset {
        name: raw.name,
        params,
        sequence,
    })
}

/// `*.toml` presets from the directory named by [`PRESET_DIR_ENV`].
pub fn file_presets() -> CliResult<Vec<Preset>> {
    let Some(dir) = std::env::var_os(PRESET_DIR_ENV) else {
        return Ok(Vec::new());
    };
    let dir = PathBuf::from(dir);
    let entries = std::fs::read_dir(&dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths.iter().map(|p| load_file(p)).collect()
}

/// Files take precedence over built-ins of the same name.
pub fn find_preset(name: &str) -> CliResult<Preset> {
    if let Some(p) = file_presets()?.into_iter().find(|p| p.name == name) {
        return Ok(p);
    }
    builtin_preset(name).ok_or_else(|| {
        let mut names: Vec<String> = builtin_presets().into_iter().map(|p| p.name).collect();
        names.extend(
            file_presets()
                .unwrap_or_default()
                .into_iter()
                .map(|p| p.name),
        );
        usage(format!(
            "unknown preset '{name}' (available: {})",
            names.join(", ")
        ))
    })
}

pub fn default_sequence_name(d: usize) -> &'static str {
    if d == kem_ldlc::ldlc::REFERENCE_SEQUENCE.len() {
        "reference"
    } else {
        "random"
    }
}
