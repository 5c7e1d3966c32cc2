//! Flat key-value parameter files and key-based parameter access.
//!
//! Format: one `key = value` per line, `#` starts a comment, keys are exactly
//! the [`NetworkParams`] field names. Unknown keys are a hard error (catches
//! typos like `gs_1`), as are duplicate keys within one file.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::NetworkParams;

/// Every settable parameter key, in declaration order.
pub const FIELD_NAMES: [&str; 17] = [
    "omega1",
    "omega2",
    "gamma1",
    "gamma2",
    "kappa",
    "kappa_s",
    "delta_c",
    "delta_s",
    "g1",
    "g2",
    "gs1",
    "gs2",
    "j_hop",
    "eta_hop",
    "nbar1",
    "nbar2",
    "aux_present",
];

/// The numeric keys (everything except the `aux_present` flag); these are the
/// fields a sweep axis may bind.
pub fn numeric_field_names() -> impl Iterator<Item = &'static str> {
    FIELD_NAMES.iter().copied().filter(|&k| k != "aux_present")
}

pub fn is_field(key: &str) -> bool {
    FIELD_NAMES.contains(&key)
}

/// Set one numeric field by key name.
pub fn set_numeric_field(params: &mut NetworkParams, key: &str, value: f64) -> Result<()> {
    let slot = match key {
        "omega1" => &mut params.omega1,
        "omega2" => &mut params.omega2,
        "gamma1" => &mut params.gamma1,
        "gamma2" => &mut params.gamma2,
        "kappa" => &mut params.kappa,
        "kappa_s" => &mut params.kappa_s,
        "delta_c" => &mut params.delta_c,
        "delta_s" => &mut params.delta_s,
        "g1" => &mut params.g1,
        "g2" => &mut params.g2,
        "gs1" => &mut params.gs1,
        "gs2" => &mut params.gs2,
        "j_hop" => &mut params.j_hop,
        "eta_hop" => &mut params.eta_hop,
        "nbar1" => &mut params.nbar1,
        "nbar2" => &mut params.nbar2,
        other => {
            return Err(Error::Config {
                location: "<key>".into(),
                msg: unknown_key_message(other),
            })
        }
    };
    *slot = value;
    Ok(())
}

fn unknown_key_message(key: &str) -> String {
    format!(
        "unknown key `{key}`; valid keys are: {}",
        FIELD_NAMES.join(", ")
    )
}

/// Apply one raw `key = value` assignment.
fn apply_assignment(
    params: &mut NetworkParams,
    key: &str,
    raw: &str,
    location: &str,
) -> Result<()> {
    let config_err = |msg: String| Error::Config {
        location: location.to_string(),
        msg,
    };
    if key == "aux_present" {
        match raw {
            "true" | "1" => params.aux_present = true,
            "false" | "0" => params.aux_present = false,
            other => {
                return Err(config_err(format!(
                    "aux_present must be true/false (or 1/0), got `{other}`"
                )))
            }
        }
        return Ok(());
    }
    if !is_field(key) {
        return Err(config_err(unknown_key_message(key)));
    }
    let value: f64 = raw
        .parse()
        .map_err(|_| config_err(format!("could not parse `{raw}` as a number for `{key}`")))?;
    set_numeric_field(params, key, value).map_err(|_| config_err(unknown_key_message(key)))?;
    Ok(())
}

/// Parse a config document on top of the given base parameters.
pub fn parse_config_str(
    text: &str,
    source_name: &str,
    base: NetworkParams,
) -> Result<NetworkParams> {
    let mut params = base;
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let location = format!("{source_name}:{}", idx + 1);
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            location: location.clone(),
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if !seen.insert(key.to_string()) {
            return Err(Error::Config {
                location,
                msg: format!("duplicate key `{key}`"),
            });
        }
        apply_assignment(&mut params, key, value, &location)?;
    }
    Ok(params)
}

/// Load a config file on top of the defaults.
pub fn load_config(path: &Path) -> Result<NetworkParams> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text, &path.display().to_string(), NetworkParams::default())
}

/// Apply repeatable `--set key=value` overrides; inline overrides win over
/// config-file values, but conflicting duplicates among the overrides
/// themselves are an error.
pub fn apply_overrides(params: &mut NetworkParams, overrides: &[String]) -> Result<()> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (idx, entry) in overrides.iter().enumerate() {
        let location = format!("--set #{}", idx + 1);
        let (key, value) = entry.split_once('=').ok_or_else(|| Error::Config {
            location: location.clone(),
            msg: format!("expected key=value, got `{entry}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if !seen.insert(key.to_string()) {
            return Err(Error::Config {
                location,
                msg: format!("duplicate override for `{key}`"),
            });
        }
        apply_assignment(params, key, value, &location)?;
    }
    Ok(())
}
