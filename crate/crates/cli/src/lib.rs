//! Command-line front end for `sparse_eq`: game generation, equilibrium
//! solving, sparsification and verification, plus a sweep harness that writes
//! one CSV row per (game, target, ε, seed).

use std::path::Path;

pub mod experiment;
pub mod game_spec;
pub mod io;

pub use experiment::{
    emit_csv, read_csv, reverify_artifact, run_experiment, write_csv, ExperimentConfig, ExperimentRow, RowArtifact,
    Target,
};
pub use game_spec::{BuiltGame, GameSpec};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sparse_eq::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 2 for bad arguments or inputs, 3 for budget refusals, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(sparse_eq::Error::InvalidArgument(_)) => 2,
            CliError::Core(sparse_eq::Error::BudgetExceeded { .. }) => 3,
            _ => 1,
        }
    }
}

/// Parses `a,b,c` and half-open ranges `lo..hi` into a seed list.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let mut seeds = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || CliError::Usage(format!("bad seed list entry `{part}`"));
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: u64 = lo.parse().map_err(|_| bad())?;
                let hi: u64 = hi.parse().map_err(|_| bad())?;
                seeds.extend(lo..hi);
            }
            None => seeds.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(seeds)
}

pub fn parse_epsilons(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::Usage(format!("bad epsilon `{s}`"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("0..3,7").unwrap(), vec![0, 1, 2, 7]);
        assert_eq!(parse_seeds("").unwrap(), Vec::<u64>::new());
        assert!(parse_seeds("a").is_err());
        assert!(parse_seeds("1..x").is_err());
    }

    #[test]
    fn epsilon_lists() {
        assert_eq!(parse_epsilons("0.1, 0.3").unwrap(), vec![0.1, 0.3]);
        assert!(parse_epsilons("0.1,z").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        let budget = sparse_eq::Error::BudgetExceeded { what: "w", required: 2, limit: 1 };
        assert_eq!(CliError::from(budget).exit_code(), 3);
        assert_eq!(CliError::from(sparse_eq::Error::Solver("s".into())).exit_code(), 1);
    }
}
