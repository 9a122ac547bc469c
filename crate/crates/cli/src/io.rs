//! State files: a density matrix `{dim, re, im}`, a pure state
//! `{dim, amp_re, amp_im}` or a Bloch vector `{x, y, z}`.

use std::path::Path;

use maskbench::photonics::PureStateRepr;
use maskbench::qcore::bloch_to_density;
use maskbench::{BlochVector, DensityMatrix, PureState};
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// A state as read from disk.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedState {
    Mixed(DensityMatrix),
    Pure(PureState),
}

impl LoadedState {
    pub fn density(&self) -> DensityMatrix {
        match self {
            LoadedState::Mixed(m) => m.clone(),
            LoadedState::Pure(p) => p.to_density(),
        }
    }

    pub fn pure(&self) -> Option<&PureState> {
        match self {
            LoadedState::Pure(p) => Some(p),
            LoadedState::Mixed(_) => None,
        }
    }
}

fn parse_error(path: &Path, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.display().to_string(),
        message: message.into(),
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a state from JSON text; `origin` names the source in errors.
pub fn parse_state(text: &str, origin: &Path) -> Result<LoadedState, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_error(origin, e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| parse_error(origin, "expected a JSON object"))?;
    if obj.contains_key("x") || obj.contains_key("y") || obj.contains_key("z") {
        let v: BlochVector = serde_json::from_value(value).map_err(|e| parse_error(origin, e.to_string()))?;
        return Ok(LoadedState::Mixed(bloch_to_density(&v)?));
    }
    if obj.contains_key("amp_re") || obj.contains_key("amp_im") {
        let r: PureStateRepr = serde_json::from_value(value).map_err(|e| parse_error(origin, e.to_string()))?;
        return Ok(LoadedState::Pure(PureState::try_from(&r)?));
    }
    let m: DensityMatrix = serde_json::from_value(value).map_err(|e| parse_error(origin, e.to_string()))?;
    Ok(LoadedState::Mixed(m))
}

pub fn load_state(path: &Path) -> Result<LoadedState, CliError> {
    parse_state(&read_text(path)?, path)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable value");
    s.push('\n');
    s
}

/// Writes `rho` as `{dim, re, im}`. Floats use shortest round-trip form,
/// so a reload is bit-identical.
pub fn save_state(rho: &DensityMatrix, path: &Path) -> Result<(), CliError> {
    write_bytes(path, to_json(rho).as_bytes())
}
