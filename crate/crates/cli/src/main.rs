use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sparse_eq::json::{distribution_to_entries, GameFile, OutcomeJson, ReportJson, SolutionJson};
use sparse_eq::solve::{
    find_vertex_ce, maxmin_strategy, regret_matching, solve_cce_lp, sparsest_cce_bruteforce, sparsest_ce_bruteforce,
    sparsest_ne_bruteforce, EquilibriumKind, EquilibriumSolution, Objective,
};
use sparse_eq::sparsify::{sparsify_cce, sparsify_ce, SparsifyConfig, DEFAULT_MAX_ATTEMPTS};
use sparse_eq::verify::{verify_cce, verify_ce, verify_ce_single_switch};
use sparse_eq::{Budget, JointDistribution};
use sparse_eq_cli::io::{emit, read_distribution, read_x3c, to_json};
use sparse_eq_cli::{
    parse_epsilons, parse_seeds, run_experiment, write_csv, emit_csv, CliError, ExperimentConfig, GameSpec, Target,
};

#[derive(Parser)]
#[command(name = "sparse-eq", version, about = "Sparse approximate correlated equilibria")]
struct Cli {
    /// Cap on LP variables and enumeration sizes.
    #[arg(long, global = true, env = "SPARSE_EQ_BUDGET")]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated game as JSON.
    Gen(GenArgs),
    /// Compute an equilibrium.
    Solve(SolveArgs),
    /// Check a distribution against ε-CCE or ε-CE; exits 4 when it fails.
    Verify(VerifyArgs),
    /// Sample a k-uniform approximate equilibrium from an exact one.
    Sparsify(SparsifyArgs),
    /// Run a sparsify sweep and write CSV.
    Experiment(ExperimentArgs),
    /// Reduce an exact-cover-by-3-sets instance to a zero-sum game.
    ReduceX3c(ReduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Figure1,
    Chain,
    Matching,
    Rps,
    DummyPennies,
    Random,
    ZeroSum,
    X3c,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Payoff parameter of figure1.
    #[arg(long, default_value_t = 1.0)]
    v: f64,
    /// Number of pennies pairs in the chain.
    #[arg(long, default_value_t = 2)]
    pairs: usize,
    /// Number of players (random).
    #[arg(short, long, default_value_t = 2)]
    n: usize,
    /// Number of actions (matching, rps, dummy-pennies labels, random, zero-sum).
    #[arg(short, long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance file for x3c.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the generator's exact CE (dummy-pennies).
    #[arg(long)]
    ce_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveKind {
    Ce,
    Cce,
    Maxmin,
    RegretMatching,
    SparsestCe,
    SparsestCce,
    SparsestNe,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    game: GameSpec,
    #[arg(long, value_enum)]
    kind: SolveKind,
    #[arg(long, default_value_t = 100_000)]
    rounds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest support tried by the sparsest searches.
    #[arg(long)]
    max_support: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DefinitionArg {
    Cce,
    Ce,
    CeSingleSwitch,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    game: GameSpec,
    /// Distribution, multiset, solve output or sparsify output.
    #[arg(long)]
    dist: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "ce")]
    definition: DefinitionArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SparsifyArgs {
    #[arg(long)]
    game: GameSpec,
    #[arg(long, value_enum)]
    target: Target,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    max_attempts: usize,
    #[arg(long)]
    k_override: Option<usize>,
    /// Exact equilibrium to sample from; computed by LP when omitted.
    #[arg(long)]
    base: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Repeat for several games.
    #[arg(long, required = true)]
    game: Vec<GameSpec>,
    /// Comma-separated ε grid.
    #[arg(long)]
    epsilon: String,
    /// Comma-separated seeds; `a..b` is a half-open range.
    #[arg(long)]
    seeds: String,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "cce")]
    target: Vec<Target>,
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    max_attempts: usize,
    #[arg(long)]
    k_override: Option<usize>,
    /// Directory for per-row multiset files.
    #[arg(long)]
    artifacts: Option<PathBuf>,
    /// Add a wall_ms column; the output is then no longer reproducible.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget.map(Budget::uniform).unwrap_or_default();
    match run(cli.command, &budget) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("sparse-eq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command, budget: &Budget) -> Result<u8, CliError> {
    match command {
        Command::Gen(a) => gen(a, budget),
        Command::Solve(a) => solve(a, budget),
        Command::Verify(a) => verify(a, budget),
        Command::Sparsify(a) => sparsify(a, budget),
        Command::Experiment(a) => experiment(a, budget),
        Command::ReduceX3c(a) => {
            let game = sparse_eq::gamegen::x3c_reduce(&read_x3c(&a.instance)?)?;
            emit(a.out.as_deref(), &to_json(&GameFile::from_game(&game)))?;
            Ok(0)
        }
    }
}

fn gen(a: GenArgs, budget: &Budget) -> Result<u8, CliError> {
    let spec = match a.family {
        Family::Figure1 => GameSpec::Figure1 { v: a.v },
        Family::Chain => GameSpec::Chain { pairs: a.pairs },
        Family::Matching => GameSpec::Matching { m: a.m },
        Family::Rps => GameSpec::Rps { m: a.m },
        Family::DummyPennies => GameSpec::DummyPennies { m: a.m },
        Family::Random => GameSpec::Random { n: a.n, m: a.m, seed: a.seed },
        Family::ZeroSum => GameSpec::ZeroSum { m: a.m, seed: a.seed },
        Family::X3c => GameSpec::X3c(
            a.instance
                .ok_or_else(|| CliError::Usage("--instance is required for x3c".into()))?,
        ),
    };
    let built = spec.build(budget)?;
    emit(a.out.as_deref(), &to_json(&GameFile::from_game(&built.game)))?;
    if let (Some(path), Some(ce)) = (a.ce_out.as_deref(), &built.known_ce) {
        emit(Some(path), &to_json(&distribution_to_entries(&built.game, ce)))?;
    }
    Ok(0)
}

fn solve(a: SolveArgs, budget: &Budget) -> Result<u8, CliError> {
    let game = a.game.build(budget)?.game;
    let max_support = a.max_support.unwrap_or(game.num_profiles());
    let none_found = || CliError::Usage(format!("no equilibrium with support at most {max_support}"));
    let sol = match a.kind {
        SolveKind::Ce => find_vertex_ce(&game, budget)?,
        SolveKind::Cce => solve_cce_lp(&game, &Objective::AnyFeasible, budget)?,
        SolveKind::Maxmin => {
            let (row, _) = maxmin_strategy(&game, 0)?;
            let (col, _) = maxmin_strategy(&game, 1)?;
            let x = JointDistribution::product(&game, &[row, col])?;
            EquilibriumSolution::new(x, EquilibriumKind::NeProduct, "maxmin-lp")
        }
        SolveKind::RegretMatching => {
            let play = regret_matching(&game, a.rounds, a.seed)?;
            EquilibriumSolution::new(play.to_distribution(&game)?, EquilibriumKind::Ce, "regret-matching")
        }
        SolveKind::SparsestCe => sparsest_ce_bruteforce(&game, max_support, budget)?.ok_or_else(none_found)?,
        SolveKind::SparsestCce => sparsest_cce_bruteforce(&game, max_support, budget)?.ok_or_else(none_found)?,
        SolveKind::SparsestNe => sparsest_ne_bruteforce(&game, budget)?,
    };
    emit(a.out.as_deref(), &to_json(&SolutionJson::from_solution(&game, &sol)))?;
    Ok(0)
}

fn verify(a: VerifyArgs, budget: &Budget) -> Result<u8, CliError> {
    let game = a.game.build(budget)?.game;
    let x = read_distribution(&game, &a.dist)?;
    let report = match a.definition {
        DefinitionArg::Cce => verify_cce(&game, &x, a.epsilon)?,
        DefinitionArg::Ce => verify_ce(&game, &x, a.epsilon)?,
        DefinitionArg::CeSingleSwitch => verify_ce_single_switch(&game, &x, a.epsilon)?,
    };
    emit(a.out.as_deref(), &to_json(&ReportJson::from_report(&report)))?;
    Ok(if report.satisfied { 0 } else { 4 })
}

fn sparsify(a: SparsifyArgs, budget: &Budget) -> Result<u8, CliError> {
    let built = a.game.build(budget)?;
    let game = &built.game;
    let sigma = match (&a.base, &built.known_ce) {
        (Some(path), _) => read_distribution(game, path)?,
        (None, Some(ce)) => ce.clone(),
        (None, None) => match a.target {
            Target::Ce => find_vertex_ce(game, budget)?.distribution,
            Target::Cce => solve_cce_lp(game, &Objective::AnyFeasible, budget)?.distribution,
        },
    };
    let cfg = SparsifyConfig {
        epsilon: a.epsilon,
        seed: a.seed,
        max_attempts: a.max_attempts,
        k_override: a.k_override,
    };
    let outcome = match a.target {
        Target::Cce => sparsify_cce(game, &sigma, &cfg)?,
        Target::Ce => sparsify_ce(game, &sigma, &cfg)?,
    };
    emit(a.out.as_deref(), &to_json(&OutcomeJson::from_outcome(game, &outcome)))?;
    Ok(0)
}

fn experiment(a: ExperimentArgs, budget: &Budget) -> Result<u8, CliError> {
    let mut config = ExperimentConfig::new(a.game, parse_epsilons(&a.epsilon)?, parse_seeds(&a.seeds)?, a.target);
    config.max_attempts = a.max_attempts;
    config.k_override = a.k_override;
    config.budget = *budget;
    config.artifacts = a.artifacts;
    let rows = run_experiment(&config)?;
    match a.out {
        Some(path) => write_csv(&path, &rows, a.timing)?,
        None => emit_csv(&rows, a.timing, std::io::stdout().lock())?,
    }
    Ok(0)
}
