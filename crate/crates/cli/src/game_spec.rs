use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sparse_eq::gamegen::{
    dummy_pennies, figure1, matching_game, random_game, random_zero_sum, rps, scaled_pennies_chain, x3c_reduce,
};
use sparse_eq::json::GameFile;
use sparse_eq::{Budget, Game, JointDistribution};

use crate::io::{read_json, read_x3c};
use crate::CliError;

/// Where a game comes from: a JSON file or a generator with parameters.
///
/// Generators are written `family:key=value,...`, for example
/// `figure1:v=3`, `chain:pairs=2`, `matching:m=3`, `rps:m=3`,
/// `dummy-pennies:m=200`, `random:n=10,m=2,seed=7`, `zero-sum:m=4,seed=1`
/// or `x3c:instance.json`. Anything else is read as a game file path.
#[derive(Debug, Clone, PartialEq)]
pub enum GameSpec {
    File(PathBuf),
    Figure1 { v: f64 },
    Chain { pairs: usize },
    Matching { m: usize },
    Rps { m: usize },
    DummyPennies { m: usize },
    Random { n: usize, m: usize, seed: u64 },
    ZeroSum { m: usize, seed: u64 },
    X3c(PathBuf),
}

/// A generated or loaded game, with the exact CE the generator provides when
/// the LP would be too large.
#[derive(Debug, Clone)]
pub struct BuiltGame {
    pub game: Game,
    pub known_ce: Option<JointDistribution>,
}

const FAMILIES: [&str; 8] = ["figure1", "chain", "matching", "rps", "dummy-pennies", "random", "zero-sum", "x3c"];

struct Params<'a> {
    family: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(family: &'a str, body: &'a str) -> Result<Self, CliError> {
        let mut pairs = Vec::new();
        for item in body.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{family}: expected key=value, got `{item}`")))?;
            pairs.push((k.trim(), v.trim()));
        }
        Ok(Params { family, pairs })
    }

    fn get<T: FromStr>(&self, key: &str, default: Option<T>) -> Result<T, CliError> {
        match self.pairs.iter().find(|(k, _)| *k == key) {
            Some((_, v)) => v
                .parse()
                .map_err(|_| CliError::Usage(format!("{}: cannot parse {key}=`{v}`", self.family))),
            None => default.ok_or_else(|| CliError::Usage(format!("{}: missing parameter `{key}`", self.family))),
        }
    }

    fn only(&self, keys: &[&str]) -> Result<(), CliError> {
        match self.pairs.iter().find(|(k, _)| !keys.contains(k)) {
            Some((k, _)) => Err(CliError::Usage(format!("{}: unknown parameter `{k}`", self.family))),
            None => Ok(()),
        }
    }
}

impl FromStr for GameSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let Some((family, body)) = s.split_once(':').filter(|(f, _)| FAMILIES.contains(f)) else {
            return Ok(GameSpec::File(PathBuf::from(s)));
        };
        if family == "x3c" {
            return Ok(GameSpec::X3c(PathBuf::from(body)));
        }
        let p = Params::parse(family, body)?;
        let spec = match family {
            "figure1" => {
                p.only(&["v"])?;
                GameSpec::Figure1 { v: p.get("v", Some(1.0))? }
            }
            "chain" => {
                p.only(&["pairs"])?;
                GameSpec::Chain { pairs: p.get("pairs", None)? }
            }
            "matching" => {
                p.only(&["m"])?;
                GameSpec::Matching { m: p.get("m", None)? }
            }
            "rps" => {
                p.only(&["m"])?;
                GameSpec::Rps { m: p.get("m", Some(3))? }
            }
            "dummy-pennies" => {
                p.only(&["m"])?;
                GameSpec::DummyPennies { m: p.get("m", None)? }
            }
            "random" => {
                p.only(&["n", "m", "seed"])?;
                GameSpec::Random {
                    n: p.get("n", None)?,
                    m: p.get("m", None)?,
                    seed: p.get("seed", Some(0))?,
                }
            }
            _ => {
                p.only(&["m", "seed"])?;
                GameSpec::ZeroSum {
                    m: p.get("m", None)?,
                    seed: p.get("seed", Some(0))?,
                }
            }
        };
        Ok(spec)
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameSpec::File(p) => write!(f, "{}", p.display()),
            GameSpec::Figure1 { v } => write!(f, "figure1:v={v}"),
            GameSpec::Chain { pairs } => write!(f, "chain:pairs={pairs}"),
            GameSpec::Matching { m } => write!(f, "matching:m={m}"),
            GameSpec::Rps { m } => write!(f, "rps:m={m}"),
            GameSpec::DummyPennies { m } => write!(f, "dummy-pennies:m={m}"),
            GameSpec::Random { n, m, seed } => write!(f, "random:n={n},m={m},seed={seed}"),
            GameSpec::ZeroSum { m, seed } => write!(f, "zero-sum:m={m},seed={seed}"),
            GameSpec::X3c(p) => write!(f, "x3c:{}", p.display()),
        }
    }
}

impl GameSpec {
    pub fn build(&self, budget: &Budget) -> Result<BuiltGame, CliError> {
        let plain = |game: Game| BuiltGame { game, known_ce: None };
        Ok(match self {
            GameSpec::File(path) => plain(read_json::<GameFile>(path)?.into_game()?),
            GameSpec::Figure1 { v } => plain(figure1(*v)?),
            GameSpec::Chain { pairs } => plain(scaled_pennies_chain(*pairs, budget)?),
            GameSpec::Matching { m } => plain(matching_game(*m)?),
            GameSpec::Rps { m } => plain(rps(*m)?),
            GameSpec::DummyPennies { m } => {
                let (game, ce) = dummy_pennies(*m)?;
                BuiltGame { game, known_ce: Some(ce) }
            }
            GameSpec::Random { n, m, seed } => plain(random_game(*n, *m, *seed, budget)?),
            GameSpec::ZeroSum { m, seed } => plain(random_zero_sum(*m, *seed)?),
            GameSpec::X3c(path) => plain(x3c_reduce(&read_x3c(path)?)?),
        })
    }
}
