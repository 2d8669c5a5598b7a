//! Sweeps of sparsify-and-verify runs over games, targets, ε values and seeds.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sparse_eq::json::{GameFile, MultisetFile};
use sparse_eq::solve::{find_vertex_ce, solve_cce_lp, Objective};
use sparse_eq::sparsify::{sparsify_cce, sparsify_ce, SparsifyConfig, DEFAULT_MAX_ATTEMPTS};
use sparse_eq::verify::{verify_cce, verify_ce, VerifyReport};
use sparse_eq::{Budget, Game, JointDistribution, KUniformMultiset};

use crate::io::{read_json, to_json};
use crate::{BuiltGame, CliError, GameSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Cce,
    Ce,
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::Cce => "cce",
            Target::Ce => "ce",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "cce" => Some(Target::Cce),
            "ce" => Some(Target::Ce),
            _ => None,
        }
    }

    pub fn verify(self, game: &Game, x: &JointDistribution, epsilon: f64) -> sparse_eq::Result<VerifyReport> {
        match self {
            Target::Cce => verify_cce(game, x, epsilon),
            Target::Ce => verify_ce(game, x, epsilon),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub games: Vec<GameSpec>,
    pub epsilons: Vec<f64>,
    pub seeds: Vec<u64>,
    pub targets: Vec<Target>,
    pub max_attempts: usize,
    /// Fixed sample size in place of the closed-form bound.
    pub k_override: Option<usize>,
    pub budget: Budget,
    /// Directory for per-row multiset files; rows record the file name.
    pub artifacts: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(games: Vec<GameSpec>, epsilons: Vec<f64>, seeds: Vec<u64>, targets: Vec<Target>) -> Self {
        ExperimentConfig {
            games,
            epsilons,
            seeds,
            targets,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            k_override: None,
            budget: Budget::default(),
            artifacts: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |msg: &str| Err(CliError::Usage(msg.to_string()));
        if self.games.is_empty() {
            return usage("no games given");
        }
        if self.epsilons.is_empty() {
            return usage("empty epsilon grid");
        }
        if self.seeds.is_empty() {
            return usage("empty seed list");
        }
        if self.targets.is_empty() {
            return usage("no targets given");
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(**e > 0.0 && **e <= 1.0)) {
            return Err(CliError::Usage(format!("epsilon {e} is outside (0, 1]")));
        }
        if self.max_attempts == 0 {
            return usage("max_attempts must be at least 1");
        }
        if self.k_override == Some(0) {
            return usage("k must be at least 1");
        }
        Ok(())
    }
}

/// One sparsify run. Fields a failed run could not produce are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub game: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub epsilon: f64,
    pub seed: u64,
    pub target: Target,
    /// `ok`, `refused: <reason>` for budget refusals, or `error: <reason>`.
    pub status: String,
    pub k: Option<usize>,
    pub attempts: Option<usize>,
    pub verified: Option<bool>,
    pub support_size: Option<usize>,
    pub worst_value: Option<f64>,
    pub artifact: Option<String>,
    /// Milliseconds spent on the row; only written with `timing`.
    pub wall_ms: f64,
    pub multiset: Option<KUniformMultiset>,
}

/// Contents of a per-row artifact file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowArtifact {
    pub game_file: String,
    pub target: Target,
    pub epsilon: f64,
    pub seed: u64,
    pub multiset: MultisetFile,
}

fn failure(e: &CliError) -> String {
    match e {
        CliError::Core(sparse_eq::Error::BudgetExceeded { .. }) => format!("refused: {e}"),
        _ => format!("error: {e}"),
    }
}

fn base_equilibrium(built: &BuiltGame, target: Target, budget: &Budget) -> Result<JointDistribution, CliError> {
    if let Some(ce) = &built.known_ce {
        return Ok(ce.clone());
    }
    let sol = match target {
        Target::Ce => find_vertex_ce(&built.game, budget)?,
        Target::Cce => solve_cce_lp(&built.game, &Objective::AnyFeasible, budget)?,
    };
    Ok(sol.distribution)
}

struct Task {
    game: usize,
    target: usize,
    epsilon: f64,
    seed: u64,
}

/// Runs every (game, target, ε, seed) combination, in that nesting order.
///
/// Each game's base equilibrium is computed once per target by LP (or taken
/// from the generator). Rows run in parallel but come back in config order,
/// and failures become rows rather than errors.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>, CliError> {
    config.validate()?;
    let mut built: Vec<Result<BuiltGame, String>> = Vec::with_capacity(config.games.len());
    for spec in &config.games {
        built.push(match spec.build(&config.budget) {
            Ok(b) => Ok(b),
            Err(e @ CliError::Core(sparse_eq::Error::BudgetExceeded { .. })) => Err(failure(&e)),
            Err(e) => return Err(e),
        });
    }
    let bases: Vec<Vec<Result<JointDistribution, String>>> = built
        .par_iter()
        .map(|b| {
            config
                .targets
                .iter()
                .map(|&t| match b {
                    Ok(b) => base_equilibrium(b, t, &config.budget).map_err(|e| failure(&e)),
                    Err(msg) => Err(msg.clone()),
                })
                .collect()
        })
        .collect();

    let mut tasks = Vec::new();
    for game in 0..config.games.len() {
        for target in 0..config.targets.len() {
            for &epsilon in &config.epsilons {
                for &seed in &config.seeds {
                    tasks.push(Task { game, target, epsilon, seed });
                }
            }
        }
    }

    let mut rows: Vec<ExperimentRow> = tasks
        .par_iter()
        .map(|t| run_row(config, &built[t.game], &config.games[t.game], &bases[t.game][t.target], t))
        .collect();

    if let Some(dir) = &config.artifacts {
        write_artifacts(dir, &built, &tasks, &mut rows)?;
    }
    Ok(rows)
}

fn run_row(
    config: &ExperimentConfig,
    built: &Result<BuiltGame, String>,
    spec: &GameSpec,
    base: &Result<JointDistribution, String>,
    task: &Task,
) -> ExperimentRow {
    let start = Instant::now();
    let target = config.targets[task.target];
    let mut row = ExperimentRow {
        game: spec.to_string(),
        n: None,
        m: None,
        epsilon: task.epsilon,
        seed: task.seed,
        target,
        status: String::new(),
        k: None,
        attempts: None,
        verified: None,
        support_size: None,
        worst_value: None,
        artifact: None,
        wall_ms: 0.0,
        multiset: None,
    };
    let game = match built {
        Ok(b) => &b.game,
        Err(msg) => {
            row.status = msg.clone();
            return row;
        }
    };
    row.game = game.label().to_string();
    row.n = Some(game.num_players());
    row.m = Some(game.num_actions());
    let sigma = match base {
        Ok(s) => s,
        Err(msg) => {
            row.status = msg.clone();
            return row;
        }
    };
    let cfg = SparsifyConfig {
        epsilon: task.epsilon,
        seed: task.seed,
        max_attempts: config.max_attempts,
        k_override: config.k_override,
    };
    let outcome = match target {
        Target::Cce => sparsify_cce(game, sigma, &cfg),
        Target::Ce => sparsify_ce(game, sigma, &cfg),
    };
    match outcome {
        Ok(o) => {
            row.status = "ok".to_string();
            row.k = Some(o.k);
            row.attempts = Some(o.attempts);
            row.verified = Some(o.verified);
            row.support_size = Some(o.multiset.support_size());
            row.worst_value = Some(o.worst_value);
            row.multiset = Some(o.multiset);
        }
        Err(e) => row.status = failure(&CliError::Core(e)),
    }
    row.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    row
}

fn game_file_name(index: usize) -> String {
    format!("game-{index:03}.json")
}

fn write_artifacts(
    dir: &Path,
    built: &[Result<BuiltGame, String>],
    tasks: &[Task],
    rows: &mut [ExperimentRow],
) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (i, b) in built.iter().enumerate() {
        if let Ok(b) = b {
            let path = dir.join(game_file_name(i));
            fs::write(&path, to_json(&GameFile::from_game(&b.game))).map_err(|e| CliError::io(&path, e))?;
        }
    }
    for (r, (row, task)) in rows.iter_mut().zip(tasks).enumerate() {
        let (Some(ms), Ok(b)) = (&row.multiset, &built[task.game]) else {
            continue;
        };
        let artifact = RowArtifact {
            game_file: game_file_name(task.game),
            target: row.target,
            epsilon: row.epsilon,
            seed: row.seed,
            multiset: MultisetFile::from_multiset(&b.game, ms),
        };
        let name = format!("row-{r:05}.json");
        let path = dir.join(&name);
        fs::write(&path, to_json(&artifact)).map_err(|e| CliError::io(&path, e))?;
        row.artifact = Some(name);
    }
    Ok(())
}

/// Reloads a row artifact and its game and verifies the multiset again.
pub fn reverify_artifact(dir: &Path, name: &str) -> Result<VerifyReport, CliError> {
    let artifact: RowArtifact = read_json(&dir.join(name))?;
    let game = read_json::<GameFile>(&dir.join(&artifact.game_file))?.into_game()?;
    let x = artifact.multiset.into_multiset(&game)?.to_distribution(&game)?;
    Ok(artifact.target.verify(&game, &x, artifact.epsilon)?)
}

const COLUMNS: [&str; 13] = [
    "game",
    "n",
    "m",
    "epsilon",
    "seed",
    "target",
    "status",
    "k",
    "attempts",
    "verified",
    "support_size",
    "worst_value",
    "artifact",
];

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Header plus one record per row, RFC 4180 quoting, floats in shortest
/// round-trip form. `timing` appends a `wall_ms` column, which is the only
/// part of the output that varies between identical runs.
pub fn emit_csv<W: Write>(rows: &[ExperimentRow], timing: bool, out: W) -> Result<(), CliError> {
    if rows.is_empty() {
        return Err(CliError::Usage("no rows to write".into()));
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if timing {
        header.push("wall_ms");
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.game.clone(),
            cell(r.n),
            cell(r.m),
            r.epsilon.to_string(),
            r.seed.to_string(),
            r.target.as_str().to_string(),
            r.status.clone(),
            cell(r.k),
            cell(r.attempts),
            cell(r.verified),
            cell(r.support_size),
            cell(r.worst_value),
            r.artifact.clone().unwrap_or_default(),
        ];
        if timing {
            rec.push(r.wall_ms.to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| CliError::io(Path::new("<csv>"), e))?;
    Ok(())
}

pub fn write_csv(path: &Path, rows: &[ExperimentRow], timing: bool) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    emit_csv(rows, timing, std::io::BufWriter::new(file))
}

/// Parses a file written by [`emit_csv`]. Multisets are not part of the CSV.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<ExperimentRow>, CliError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let col = |name: &str| header.iter().position(|h| h == name);
    let idx: Vec<usize> = COLUMNS
        .iter()
        .map(|c| col(c).ok_or_else(|| CliError::Usage(format!("missing column {c}"))))
        .collect::<Result<_, _>>()?;
    let wall = col("wall_ms");
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let get = |i: usize| rec.get(idx[i]).unwrap_or("");
        let bad = |i: usize| CliError::Usage(format!("bad {} value `{}`", COLUMNS[i], get(i)));
        fn opt<T: std::str::FromStr>(s: &str) -> Result<Option<T>, ()> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| ())
            }
        }
        rows.push(ExperimentRow {
            game: get(0).to_string(),
            n: opt(get(1)).map_err(|_| bad(1))?,
            m: opt(get(2)).map_err(|_| bad(2))?,
            epsilon: get(3).parse().map_err(|_| bad(3))?,
            seed: get(4).parse().map_err(|_| bad(4))?,
            target: Target::parse(get(5)).ok_or_else(|| bad(5))?,
            status: get(6).to_string(),
            k: opt(get(7)).map_err(|_| bad(7))?,
            attempts: opt(get(8)).map_err(|_| bad(8))?,
            verified: opt(get(9)).map_err(|_| bad(9))?,
            support_size: opt(get(10)).map_err(|_| bad(10))?,
            worst_value: opt(get(11)).map_err(|_| bad(11))?,
            artifact: Some(get(12).to_string()).filter(|s| !s.is_empty()),
            wall_ms: match wall {
                Some(w) => rec.get(w).unwrap_or("0").parse().unwrap_or(0.0),
                None => 0.0,
            },
            multiset: None,
        });
    }
    Ok(rows)
}
