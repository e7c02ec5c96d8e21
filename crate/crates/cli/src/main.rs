use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use fairshare::axioms::{check_all, Axiom, AxiomError, Verdict};
use fairshare::baselines::{compare_mechanisms, scaled_rho_shapley, shapley, BaselineError};
use fairshare::families::{gen_family, Family};
use fairshare::io::{
    describe_witness, parse_game_file, parse_reward_table, parse_rho, write_game_file, write_reward_table, AnyGame,
    GameFile, Labels, Rho, TableFormat,
};
use fairshare::mechanism::solve;
use fairshare::oracle::{brute_force_solve, global_enumeration_solve, OracleError};
use fairshare::{Game, Rational, RewardMatrix, Scalar, Tolerance};

/// Fair reward allocation for cooperative games with replicable rewards.
#[derive(Parser)]
#[command(name = "fairshare", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the fair reward matrix and each coalition's efficient player.
    Solve {
        game: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "table")]
        format: TableFormat,
    },
    /// Check a reward matrix (the solver's by default) against the axioms.
    Check {
        game: PathBuf,
        /// Reward table to check instead of the solver's output.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Compare in floating point with this absolute tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Shapley values per coalition, or the scaled rho-Shapley matrix.
    Shapley {
        game: PathBuf,
        /// Exponent in (0, 1]; accepts `p/q`, decimals and `log2(a)-b`.
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
        /// Also write the rho-Shapley matrix to this file.
        #[arg(long, requires = "rho")]
        emit_matrix: Option<PathBuf>,
        #[arg(long, default_value = "table")]
        format: TableFormat,
    },
    /// How far the rho-Shapley matrix is from the fair allocation.
    Compare {
        game: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
    },
    /// Write a game file from a named family.
    Gen {
        #[arg(long)]
        family: FamilyName,
        /// Additive weights, e.g. `1,2,3`.
        #[arg(long)]
        weights: Option<String>,
        /// Elements owned by each player, players separated by `;`, e.g. `0,1;1;2`.
        #[arg(long)]
        coverage: Option<String>,
        /// Weight of each element, e.g. `5,1,2`.
        #[arg(long)]
        element_weights: Option<String>,
        #[arg(long)]
        players: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "10")]
        max_increment: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rebuild the allocation with a reference oracle and compare.
    Verify {
        game: PathBuf,
        #[arg(long, default_value = "level")]
        depth: Depth,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Additive,
    Coverage,
    Example1,
    Counterexample3,
    RandomMonotone,
}

#[derive(Clone, Copy, ValueEnum)]
enum Depth {
    Level,
    Global,
}

enum Failure {
    Input(anyhow::Error),
    Violation,
    SizeLimit(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("FAIRSHARE_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring FAIRSHARE_THREADS={threads:?}"),
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Violation) => ExitCode::from(2),
        Err(Failure::SizeLimit(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

/// Exact arithmetic when both the game and rho are rational, floating point
/// otherwise or when the exact powers are irrational.
macro_rules! with_rho {
    ($game:expr, $rho:expr, |$g:ident, $r:ident| $body:expr) => {{
        let float_game = || match $game {
            AnyGame::Rational(g) => g.to_float(),
            AnyGame::Float(g) => g.clone(),
        };
        let float = |$g: &Game<f64>| {
            let $r = &$rho.to_f64();
            $body
        };
        let result: Result<String, BaselineError> = match ($game, $rho) {
            (AnyGame::Rational($g), Rho::Exact(r)) => {
                let $r = r;
                match $body {
                    Err(BaselineError::InexactPower(_)) => {
                        eprintln!("note: rho {} gives irrational rewards, computing in floating point", $rho.render());
                        float(&float_game())
                    }
                    other => other,
                }
            }
            _ => float(&float_game()),
        };
        result.map_err(anyhow::Error::from)
    }};
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Solve { game, output, format } => {
            let file = load_game(&game)?;
            let text = match &file.game {
                AnyGame::Rational(g) => solved_table(g, &file.labels, format),
                AnyGame::Float(g) => solved_table(g, &file.labels, format),
            };
            emit(output.as_deref(), &text)?;
            Ok(())
        }
        Command::Check { game, matrix, tolerance } => {
            let file = load_game(&game)?;
            let matrix_text = matrix
                .as_deref()
                .map(|p| fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))
                .transpose()?;
            let matrix_text = matrix_text.as_deref();
            match (tolerance, &file.game) {
                (Some(eps), g) => {
                    let tol = Tolerance::absolute(eps).ok_or_else(|| anyhow!("tolerance must be finite and >= 0"))?;
                    let g = match g {
                        AnyGame::Rational(g) => g.to_float(),
                        AnyGame::Float(g) => g.clone(),
                    };
                    check_game(&g, &file.labels, matrix_text, tol)
                }
                (None, AnyGame::Rational(g)) => check_game(g, &file.labels, matrix_text, Tolerance::Exact),
                (None, AnyGame::Float(g)) => check_game(g, &file.labels, matrix_text, Tolerance::FLOAT_DEFAULT),
            }
        }
        Command::Shapley {
            game,
            rho,
            emit_matrix,
            format,
        } => {
            let file = load_game(&game)?;
            let Some(rho) = rho else {
                print!(
                    "{}",
                    match &file.game {
                        AnyGame::Rational(g) => shapley_listing(g, &file.labels),
                        AnyGame::Float(g) => shapley_listing(g, &file.labels),
                    }
                );
                return Ok(());
            };
            let rho = parse_rho(&rho).map_err(anyhow::Error::from)?;
            let text = with_rho!(&file.game, &rho, |g, r| {
                scaled_rho_shapley(g, r).map(|m| write_reward_table(&m.matrix, &file.labels, None, format))
            })?;
            print!("{text}");
            if let Some(path) = emit_matrix {
                emit(Some(&path), &text)?;
            }
            Ok(())
        }
        Command::Compare { game, rho } => {
            let file = load_game(&game)?;
            let rho = parse_rho(&rho).map_err(anyhow::Error::from)?;
            let text = with_rho!(&file.game, &rho, |g, r| {
                compare_mechanisms(g, r).map(|report| {
                    let mut out = format!(
                        "rho: {}\nmax F5 residual: {}\nentries differing from the fair allocation: {}\nmax abs difference: {}\n",
                        rho.render(),
                        report.max_residual.render(),
                        report.diffs.len(),
                        report.max_abs_diff.render()
                    );
                    for d in &report.diffs {
                        out.push_str(&format!(
                            "  {} in {}: fair {}, rho-Shapley {}\n",
                            file.labels.label(d.player),
                            file.labels.describe(d.coalition),
                            d.mechanism.render(),
                            d.candidate.render()
                        ));
                    }
                    out
                })
            })?;
            print!("{text}");
            Ok(())
        }
        Command::Gen {
            family,
            weights,
            coverage,
            element_weights,
            players,
            seed,
            max_increment,
            output,
        } => {
            let family = match family {
                FamilyName::Additive => Family::Additive {
                    weights: parse_list(weights.as_deref().ok_or_else(|| anyhow!("--weights is required"))?)?,
                },
                FamilyName::Coverage => {
                    let owned = coverage
                        .as_deref()
                        .ok_or_else(|| anyhow!("--coverage is required"))?
                        .split(';')
                        .map(|part| {
                            part.split(',')
                                .map(str::trim)
                                .filter(|s| !s.is_empty())
                                .map(|s| s.parse::<usize>().with_context(|| format!("bad element id {s:?}")))
                                .collect::<anyhow::Result<Vec<_>>>()
                        })
                        .collect::<anyhow::Result<Vec<_>>>()?;
                    Family::Coverage {
                        owned,
                        element_weights: parse_list(
                            element_weights
                                .as_deref()
                                .ok_or_else(|| anyhow!("--element-weights is required"))?,
                        )?,
                    }
                }
                FamilyName::Example1 => Family::Example1,
                FamilyName::Counterexample3 => Family::Counterexample3,
                FamilyName::RandomMonotone => Family::RandomMonotone {
                    n: players.ok_or_else(|| anyhow!("--players is required"))?,
                    seed,
                    max_increment: Rational::parse(&max_increment)
                        .map_err(|e| anyhow!("bad --max-increment: {e}"))?,
                },
            };
            let game: Game<Rational> = gen_family(&family).map_err(anyhow::Error::from)?;
            let labels = Labels::numeric(game.n_players());
            emit(output.as_deref(), &write_game_file(&game, &labels))?;
            Ok(())
        }
        Command::Verify { game, depth } => {
            let file = load_game(&game)?;
            match &file.game {
                AnyGame::Rational(g) => verify(g, depth),
                AnyGame::Float(g) => verify(g, depth),
            }
        }
    }
}

fn load_game(path: &Path) -> anyhow::Result<GameFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_game_file(&text).with_context(|| format!("in {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_list(s: &str) -> anyhow::Result<Vec<Rational>> {
    s.split(',')
        .map(|x| Rational::parse(x.trim()).map_err(|e| anyhow!("bad number {x:?}: {e}")))
        .collect()
}

fn solved_table<S: Scalar>(game: &Game<S>, labels: &Labels, format: TableFormat) -> String {
    let sol = solve(game);
    write_reward_table(&sol.matrix, labels, Some(&sol.efficient), format)
}

fn check_game<S: Scalar>(game: &Game<S>, labels: &Labels, matrix_text: Option<&str>, tol: Tolerance) -> Outcome {
    let matrix: RewardMatrix<S> = match matrix_text {
        Some(text) => parse_reward_table(text, labels).map_err(anyhow::Error::from)?,
        None => solve(game).matrix,
    };
    let report = check_all(game, &matrix, tol).map_err(|e: AxiomError| anyhow::Error::from(e))?;
    for r in &report.reports {
        let verdict = match &r.verdict {
            Verdict::Pass => "pass".to_string(),
            Verdict::Vacuous => "pass (vacuous)".to_string(),
            Verdict::PremiseNotMet => "premise not met".to_string(),
            Verdict::Fail(w) => format!("FAIL: {}", describe_witness(w, labels)),
        };
        println!("{} {}: {verdict}", r.axiom, r.axiom.name());
    }
    println!("{} {}: not checked (compares two games)", Axiom::F4, Axiom::F4.name());
    if report.all_pass() {
        println!("all axioms hold");
        Ok(())
    } else {
        let failed: Vec<String> = report.failures().map(|r| r.axiom.to_string()).collect();
        println!("violated: {}", failed.join(", "));
        Err(Failure::Violation)
    }
}

fn shapley_listing<S: Scalar>(game: &Game<S>, labels: &Labels) -> String {
    let mut out = String::new();
    for c in labels.canonical_order().into_iter().skip(1) {
        let phi = shapley(game, c).expect("non-empty coalition of this game");
        let parts: Vec<String> = phi
            .iter()
            .map(|(i, x)| format!("{}={}", labels.label(i), x.render()))
            .collect();
        out.push_str(&format!("{}: {}\n", labels.describe(c), parts.join(" ")));
    }
    out
}

fn verify<S: Scalar>(game: &Game<S>, depth: Depth) -> Outcome {
    let tol = Tolerance::default_for(S::MODE);
    let solved = solve(game).matrix;
    let same = |m: &RewardMatrix<S>| m.entries().iter().zip(solved.entries()).all(|(a, b)| tol.eq(a, b));
    let size_limit = |e: OracleError| match e {
        OracleError::SizeLimitExceeded { .. } => Failure::SizeLimit(e.into()),
        other => Failure::Input(other.into()),
    };
    let (unique, matches) = match depth {
        Depth::Level => match brute_force_solve(game) {
            Ok(res) => (res.unique, same(&res.matrix)),
            Err(OracleError::NoFeasibleCandidate(c)) => {
                println!("no feasible allocation for {c}");
                (false, false)
            }
            Err(e) => return Err(size_limit(e)),
        },
        Depth::Global => {
            let res = global_enumeration_solve(game).map_err(size_limit)?;
            println!(
                "assignments: {}, surviving: {}, distinct matrices: {}",
                res.assignments,
                res.surviving_assignments,
                res.matrices.len()
            );
            (res.matrices.len() == 1, res.matrices.len() == 1 && same(&res.matrices[0]))
        }
    };
    println!("unique: {unique}, matches solver: {matches}");
    if unique && matches {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

