//! Computing, sparsifying and verifying approximate correlated (CE) and coarse
//! correlated (CCE) equilibria of finite normal-form games.
//!
//! The crate is organised bottom-up:
//!
//! - [`game`], [`distribution`] and [`regret`] hold the dense game store, the
//!   distributions over action profiles and the regret formulas;
//! - [`verify`] decides whether a distribution is an ε-CCE or ε-CE;
//! - [`lp`] is a dense two-phase simplex used by [`solve`];
//! - [`solve`] computes exact equilibria, maxmin strategies, regret-matching
//!   play and brute-force sparsest equilibria;
//! - [`sparsify`] draws k-uniform approximate equilibria from exact ones;
//! - [`gamegen`] builds the counterexample games and the X3C reduction.
//!
//! Actions and players are 0-based in the Rust API. The JSON formats in
//! [`json`] use 1-based action labels.

pub mod distribution;
pub mod game;
pub mod gamegen;
pub mod json;
pub mod lp;
pub mod regret;
pub mod solve;
pub mod sparsify;
pub mod verify;

pub use distribution::{JointDistribution, KUniformMultiset, MixedStrategy, ProfileMeasure};
pub use game::{ActionProfile, Game};
pub use regret::{Deviation, SwitchingRule};

/// Tolerance for probability sums and equality checks.
pub const PROB_TOL: f64 = 1e-9;

/// Slack added to ε when deciding whether a verifier is satisfied.
pub const VERIFY_SLACK: f64 = 1e-12;

/// Residual tolerance for LP certificates and "exact" equilibria.
pub const LP_TOL: f64 = 1e-7;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} needs {required}, over the budget of {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },
    #[error("solver failure: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

/// Caps on the exponential parts of the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of profile variables in a full-simplex LP.
    pub lp_variables: usize,
    /// Maximum number of candidate supports (or rules) an enumeration may visit.
    pub enumeration: u128,
    /// Maximum length of a dense payoff array.
    pub payoff_entries: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            lp_variables: 20_000,
            enumeration: 2_000_000,
            payoff_entries: 50_000_000,
        }
    }
}

impl Budget {
    /// A budget where `cap` bounds both LP size and enumeration size.
    pub fn uniform(cap: u64) -> Self {
        Budget {
            lp_variables: usize::try_from(cap).unwrap_or(usize::MAX),
            enumeration: cap as u128,
            ..Budget::default()
        }
    }

    pub(crate) fn check_lp(&self, vars: usize) -> Result<()> {
        if vars > self.lp_variables {
            return Err(Error::BudgetExceeded {
                what: "LP over the joint simplex",
                required: vars as u128,
                limit: self.lp_variables as u128,
            });
        }
        Ok(())
    }

    pub(crate) fn check_enumeration(&self, what: &'static str, count: u128) -> Result<()> {
        if count > self.enumeration {
            return Err(Error::BudgetExceeded {
                what,
                required: count,
                limit: self.enumeration,
            });
        }
        Ok(())
    }
}
