use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use sparse_eq::gamegen::X3CInstance;
use sparse_eq::json::{distribution_from_entries, DistributionEntry, MultisetFile, X3CFile};
use sparse_eq::{Game, JointDistribution};

use crate::CliError;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serialisable value");
    text.push('\n');
    text
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn read_x3c(path: &Path) -> Result<X3CInstance, CliError> {
    Ok(read_json::<X3CFile>(path)?.into_instance()?)
}

/// Reads any file holding a distribution over the game's profiles: a list of
/// `{profile, prob}` entries, a multiset file, or the output of `solve` or
/// `sparsify`.
pub fn read_distribution(game: &Game, path: &Path) -> Result<JointDistribution, CliError> {
    let value: Value = read_json(path)?;
    let bad = |e: serde_json::Error| CliError::Usage(format!("{}: {e}", path.display()));
    let entries = |v: Value| -> Result<JointDistribution, CliError> {
        let list: Vec<DistributionEntry> = serde_json::from_value(v).map_err(bad)?;
        Ok(distribution_from_entries(game, &list)?)
    };
    let multiset = |v: Value| -> Result<JointDistribution, CliError> {
        let file: MultisetFile = serde_json::from_value(v).map_err(bad)?;
        Ok(file.into_multiset(game)?.to_distribution(game)?)
    };
    match value {
        Value::Array(_) => entries(value),
        Value::Object(mut map) => {
            if let Some(d) = map.remove("distribution") {
                entries(d)
            } else if let Some(m) = map.remove("multiset") {
                multiset(m)
            } else if map.contains_key("samples") {
                multiset(Value::Object(map))
            } else {
                Err(CliError::Usage(format!("{}: not a distribution file", path.display())))
            }
        }
        _ => Err(CliError::Usage(format!("{}: not a distribution file", path.display()))),
    }
}
