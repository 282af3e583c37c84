use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use cookie_core::classifier::classify;
use cookie_core::game::{
    conjecture_report_with_limit, default_search_limit, losing_pairs_search, wythoff_recurrence,
    GameEngine, GamePosition, LosingPairTable,
};
use cookie_core::heuristics::{self, Algorithm};
use cookie_core::jars::parse_uint_list;
use cookie_core::sequences::SequenceSpec;
use cookie_core::solver::{solve_with, SolveOptions, DEFAULT_SOLVE_LIMIT};
use cookie_core::{Error, Exec, JarSet};
use serde::Serialize;
use serde_json::{json, Value};

use crate::api::{self, ApiConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cookie",
    version,
    about = "Exact solver and game engine for the Cookie Monster problem"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ListArg {
    /// Jar counts: `13,10,7,6`, `"{13, 10, 7, 6}"` or `13 10 7 6`.
    #[arg(value_name = "VALUES", required = true, num_args = 1..)]
    values: Vec<String>,
}

impl ListArg {
    fn parse(&self) -> cookie_core::Result<Vec<u64>> {
        parse_uint_list(&self.values.join(","))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimum number of moves, with a witness multiset.
    Solve {
        #[command(flatten)]
        set: ListArg,
        /// Print a replayable move sequence.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
        /// Largest jar value accepted.
        #[arg(long, default_value_t = DEFAULT_SOLVE_LIMIT)]
        max_value: u64,
        /// Run the search on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Universal lower and upper bounds.
    Bounds {
        #[command(flatten)]
        set: ListArg,
    },
    /// Size-three rule, equation systems and equal-sum subsets.
    Classify {
        #[command(flatten)]
        set: ListArg,
        #[arg(long)]
        json: bool,
    },
    /// Runs the greedy strategies.
    Heuristics {
        #[command(flatten)]
        set: ListArg,
        #[arg(long, value_enum, default_value_t = AlgoArg::All)]
        algo: AlgoArg,
        #[arg(long)]
        json: bool,
    },
    /// Builds a structured set and compares its closed form with the solver.
    Sequence {
        #[arg(value_enum)]
        kind: SequenceKind,
        /// Number of terms. Fibonacci sets start at F(2) = 1 and hold n - 1 values.
        #[arg(long)]
        n: usize,
        /// Step (arithmetic) or ratio (geometric).
        #[arg(long, default_value_t = 1)]
        y: u64,
        /// Offset (arithmetic).
        #[arg(long, default_value_t = 0)]
        z: u64,
        /// Scale (geometric).
        #[arg(long, default_value_t = 1)]
        w: u64,
        /// Skip the exact solve.
        #[arg(long)]
        no_solve: bool,
        #[arg(long)]
        json: bool,
    },
    /// The two-player game.
    Game {
        #[command(subcommand)]
        command: GameCommand,
    },
    /// JSON service (and optional static files).
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory served at `/`.
        #[arg(long = "static", value_name = "DIR")]
        static_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        max_jars: usize,
        #[arg(long, default_value_t = cookie_core::game::DEFAULT_GAME_LIMIT)]
        limit: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GameCommand {
    /// Losing pairs `{0, p, q}` (wythoff) or `{1, p, q}` (one).
    Table {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        count: usize,
        /// Search limit for the `one` family (default: 3 * count + 16).
        #[arg(long)]
        limit: Option<u64>,
        /// Write CSV to this path (`-` for stdout).
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// P/N status and winning moves.
    Eval {
        #[command(flatten)]
        jars: ListArg,
        #[arg(long)]
        json: bool,
    },
    /// Play against the engine on the terminal.
    Play {
        #[command(flatten)]
        jars: ListArg,
        /// Let the engine move first.
        #[arg(long)]
        engine_first: bool,
    },
    /// Compares the wythoff and one families index by index.
    Report {
        #[arg(long, default_value_t = 40)]
        count: usize,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AlgoArg {
    Emja,
    Tmca,
    Ba,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SequenceKind {
    Arithmetic,
    Geometric,
    Fibonacci,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Wythoff,
    One,
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    /// Subcommand path whose help follows a usage error.
    pub help_for: Vec<&'static str>,
}

impl Failure {
    fn from_core(e: Error, path: &[&'static str]) -> Self {
        let code = match e {
            Error::LimitExceeded { .. } => EXIT_LIMIT,
            Error::Parse(_)
            | Error::InvalidParameter(_)
            | Error::WrongSize { .. }
            | Error::InvalidMove(_) => EXIT_USAGE,
            Error::EmptyState | Error::NoMoves => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
            help_for: if code == EXIT_USAGE {
                path.to_vec()
            } else {
                Vec::new()
            },
        }
    }

    fn io(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_FAILURE,
            message: e.to_string(),
            help_for: Vec::new(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn with_schema(value: impl Serialize) -> Value {
    let mut v = serde_json::to_value(value).expect("serialisable");
    match v.as_object_mut() {
        Some(map) => {
            map.insert("schema".into(), json!(1));
            v
        }
        None => json!({ "schema": 1, "data": v }),
    }
}

fn print_json(out: &mut dyn Write, value: impl Serialize) -> CmdResult {
    let text = serde_json::to_string_pretty(&with_schema(value)).expect("serialisable");
    writeln!(out, "{text}").map_err(Failure::io)
}

/// Runs a parsed command, writing results to `out` and reading `input` for
/// interactive play.
pub fn run(cli: Cli, out: &mut dyn Write, input: &mut dyn BufRead) -> CmdResult {
    match cli.command {
        Command::Solve {
            set,
            trace,
            json,
            max_value,
            sequential,
        } => {
            let path = ["solve"];
            let set = JarSet::new(set.parse().map_err(|e| Failure::from_core(e, &path))?);
            let opts = SolveOptions {
                max_value,
                exec: if sequential {
                    Exec::Sequential
                } else {
                    Exec::Parallel
                },
            };
            let r = solve_with(&set, &opts).map_err(|e| Failure::from_core(e, &path))?;
            if json {
                return print_json(out, &r);
            }
            let mut s = String::new();
            writeln!(s, "S = {}", r.set).unwrap();
            writeln!(s, "CM = {}", r.cm).unwrap();
            writeln!(s, "witness: {}", r.witness).unwrap();
            writeln!(s, "bounds: lower={} upper={}", r.lower_bound, r.upper_bound).unwrap();
            if trace {
                let mut state = r.set.clone();
                for (i, mv) in r.trace.iter().enumerate() {
                    state = state.apply(mv).expect("solver traces replay");
                    writeln!(s, "{}. {mv} -> {state}", i + 1).unwrap();
                }
            }
            out.write_all(s.as_bytes()).map_err(Failure::io)
        }
        Command::Bounds { set } => {
            let set = JarSet::new(
                set.parse()
                    .map_err(|e| Failure::from_core(e, &["bounds"]))?,
            );
            let b = set.bounds();
            writeln!(out, "lower={} upper={}", b.lower, b.upper).map_err(Failure::io)
        }
        Command::Classify { set, json } => {
            let path = ["classify"];
            let set = JarSet::new(set.parse().map_err(|e| Failure::from_core(e, &path))?);
            let r = classify(&set).map_err(|e| Failure::from_core(e, &path))?;
            let opts = SolveOptions {
                exec: Exec::Parallel,
                ..Default::default()
            };
            let cm = solve_with(&set, &opts)
                .map_err(|e| Failure::from_core(e, &path))?
                .cm;
            if json {
                let mut v = serde_json::to_value(&r).expect("serialisable");
                v["cm"] = json!(cm);
                return print_json(out, v);
            }
            let mut s = String::new();
            writeln!(s, "S = {} (n = {})", r.set, r.n).unwrap();
            writeln!(s, "solved CM = {cm}").unwrap();
            if let Some(rule) = r.size3_rule {
                let cm = if rule { 2 } else { 3 };
                writeln!(s, "size-three rule: k1 + k2 = k3 is {rule}, so CM = {cm}").unwrap();
            }
            if (4..=7).contains(&r.n) {
                match &r.cm3_match {
                    Some(m) => {
                        writeln!(s, "three-move system: {}", m.id).unwrap();
                        for e in &m.equations {
                            writeln!(s, "  {e}").unwrap();
                        }
                    }
                    None => writeln!(s, "three-move system: none matches").unwrap(),
                }
            }
            let e = &r.equal_sums;
            writeln!(
                s,
                "equal-sum disjoint pairs: {}{}",
                e.equal_sum_pairs.len(),
                if e.pairs_truncated {
                    " (truncated)"
                } else {
                    ""
                }
            )
            .unwrap();
            for p in e.equal_sum_pairs.iter().take(10) {
                writeln!(s, "  {:?} = {:?} (sum {})", p.left, p.right, p.sum).unwrap();
            }
            writeln!(
                s,
                "disjoint collection x = {}, so CM <= {}",
                e.x, e.bound_from_x
            )
            .unwrap();
            out.write_all(s.as_bytes()).map_err(Failure::io)
        }
        Command::Heuristics { set, algo, json } => {
            let path = ["heuristics"];
            let set = JarSet::new(set.parse().map_err(|e| Failure::from_core(e, &path))?);
            let algs: Vec<Algorithm> = match algo {
                AlgoArg::Emja => vec![Algorithm::Emja],
                AlgoArg::Tmca => vec![Algorithm::Tmca],
                AlgoArg::Ba => vec![Algorithm::Ba],
                AlgoArg::All => Algorithm::ALL.to_vec(),
            };
            let runs = algs
                .into_iter()
                .map(|a| heuristics::run(a, &set))
                .collect::<cookie_core::Result<Vec<_>>>()
                .map_err(|e| Failure::from_core(e, &path))?;
            if json {
                return print_json(out, json!({ "set": set, "runs": runs }));
            }
            let mut s = String::new();
            writeln!(s, "S = {set}").unwrap();
            for r in &runs {
                writeln!(s, "{}: {} moves", r.algorithm, r.move_count).unwrap();
                let mut state = set.clone();
                for mv in &r.trace {
                    state = state.apply(mv).expect("heuristic traces replay");
                    writeln!(s, "  {mv} -> {state}").unwrap();
                }
            }
            out.write_all(s.as_bytes()).map_err(Failure::io)
        }
        Command::Sequence {
            kind,
            n,
            y,
            z,
            w,
            no_solve,
            json,
        } => {
            let path = ["sequence"];
            let spec = match kind {
                SequenceKind::Arithmetic => SequenceSpec::Arithmetic { y, z, n },
                SequenceKind::Geometric => SequenceSpec::Geometric { w, y, n },
                SequenceKind::Fibonacci => SequenceSpec::Fibonacci { n },
            };
            let set = spec.generate().map_err(|e| Failure::from_core(e, &path))?;
            let predicted = spec
                .predicted_cm()
                .map_err(|e| Failure::from_core(e, &path))?;
            let solved = if no_solve {
                None
            } else {
                let opts = SolveOptions {
                    exec: Exec::Parallel,
                    ..Default::default()
                };
                Some(
                    solve_with(&set, &opts)
                        .map_err(|e| Failure::from_core(e, &path))?
                        .cm,
                )
            };
            if json {
                return print_json(
                    out,
                    json!({ "spec": spec, "set": set, "predicted_cm": predicted, "solved_cm": solved }),
                );
            }
            let mut s = String::new();
            writeln!(s, "S = {set}").unwrap();
            writeln!(s, "predicted CM = {predicted}").unwrap();
            if let Some(cm) = solved {
                let verdict = if cm == predicted { "agrees" } else { "differs" };
                writeln!(s, "solved CM = {cm} ({verdict})").unwrap();
            }
            out.write_all(s.as_bytes()).map_err(Failure::io)
        }
        Command::Game { command } => run_game(command, out, input),
        Command::Serve {
            port,
            host,
            static_dir,
            max_jars,
            limit,
        } => {
            let config = ApiConfig {
                game_limit: limit,
                max_jars,
                static_dir,
                ..Default::default()
            };
            let runtime = tokio::runtime::Runtime::new().map_err(Failure::io)?;
            runtime
                .block_on(async move {
                    let listener = tokio::net::TcpListener::bind((host.as_str(), port)).await?;
                    writeln!(out, "listening on http://{}", listener.local_addr()?)?;
                    out.flush()?;
                    axum::serve(listener, api::router(config))
                        .with_graceful_shutdown(async {
                            let _ = tokio::signal::ctrl_c().await;
                        })
                        .await
                })
                .map_err(Failure::io)
        }
    }
}

fn run_game(command: GameCommand, out: &mut dyn Write, input: &mut dyn BufRead) -> CmdResult {
    match command {
        GameCommand::Table {
            family,
            count,
            limit,
            csv,
        } => {
            let path = ["game", "table"];
            let table = match family {
                FamilyArg::Wythoff => wythoff_recurrence(count),
                FamilyArg::One => {
                    let limit = limit.unwrap_or_else(|| default_search_limit(count));
                    let t =
                        losing_pairs_search(1, limit).map_err(|e| Failure::from_core(e, &path))?;
                    if t.rows.len() < count {
                        return Err(Failure {
                            code: EXIT_LIMIT,
                            message: format!(
                                "only {} rows up to limit {limit}; raise --limit for {count} rows",
                                t.rows.len()
                            ),
                            help_for: Vec::new(),
                        });
                    }
                    t.truncated(count)
                }
            };
            match csv {
                Some(p) if p.as_os_str() == "-" => out
                    .write_all(table.to_csv().as_bytes())
                    .map_err(Failure::io),
                Some(p) => {
                    std::fs::write(&p, table.to_csv()).map_err(Failure::io)?;
                    writeln!(out, "wrote {} rows to {}", table.rows.len(), p.display())
                        .map_err(Failure::io)
                }
                None => out
                    .write_all(render_table(&table).as_bytes())
                    .map_err(Failure::io),
            }
        }
        GameCommand::Eval { jars, json } => {
            let path = ["game", "eval"];
            let pos = GamePosition::new(jars.parse().map_err(|e| Failure::from_core(e, &path))?);
            let engine = GameEngine::default();
            let class = engine
                .classify(&pos)
                .map_err(|e| Failure::from_core(e, &path))?;
            if json {
                return print_json(
                    out,
                    json!({ "jars": pos, "status": class.status, "winningMoves": class.winning_moves }),
                );
            }
            let mut s = String::new();
            writeln!(s, "{pos}: {}", class.status).unwrap();
            for mv in &class.winning_moves {
                let next = pos.apply(mv).expect("listed moves are legal");
                writeln!(s, "  {mv} -> {next}").unwrap();
            }
            out.write_all(s.as_bytes()).map_err(Failure::io)
        }
        GameCommand::Play { jars, engine_first } => {
            let path = ["game", "play"];
            let pos = GamePosition::new(jars.parse().map_err(|e| Failure::from_core(e, &path))?);
            crate::play::play(pos, engine_first, out, input).map_err(|e| match e {
                crate::play::PlayError::Core(e) => Failure::from_core(e, &path),
                crate::play::PlayError::Io(e) => Failure::io(e),
            })
        }
        GameCommand::Report { count, limit, json } => {
            let path = ["game", "report"];
            let limit = limit.unwrap_or_else(|| default_search_limit(count));
            let r = conjecture_report_with_limit(count, limit)
                .map_err(|e| Failure::from_core(e, &path))?;
            if json {
                return print_json(out, &r);
            }
            let mut s = String::new();
            writeln!(
                s,
                "pairs compared: {} (search limit {})",
                r.count, r.search_limit
            )
            .unwrap();
            writeln!(
                s,
                "mean q/p: wythoff {:.6}, one {:.6}",
                r.mean_ratio_wythoff, r.mean_ratio_one
            )
            .unwrap();
            let verdict = |ok: bool| if ok { "within" } else { "outside" };
            writeln!(
                s,
                "p1 - p0 in [{}, {}]: {} [{}, {}]",
                r.p_diff_range.0,
                r.p_diff_range.1,
                verdict(r.p_diff_within_bounds),
                r.p_diff_bounds.0,
                r.p_diff_bounds.1
            )
            .unwrap();
            writeln!(
                s,
                "(q1 - p1) - (q0 - p0) in [{}, {}]: {} [{}, {}]",
                r.d_diff_range.0,
                r.d_diff_range.1,
                verdict(r.d_diff_within_bounds),
                r.d_diff_bounds.0,
                r.d_diff_bounds.1
            )
            .unwrap();
            if !r.violations.is_empty() {
                writeln!(s, "indices outside the bounds: {:?}", r.violations).unwrap();
            }
            out.write_all(s.as_bytes()).map_err(Failure::io)
        }
    }
}

fn render_table(t: &LosingPairTable) -> String {
    let mut s = format!("{:>4} {:>6} {:>6} {:>6}\n", "i", "p", "q", "d");
    for r in &t.rows {
        writeln!(s, "{:>4} {:>6} {:>6} {:>6}", r.i, r.p, r.q, r.d).unwrap();
    }
    s
}

/// Help text for a subcommand path, for usage errors.
pub fn help_text(path: &[&str]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    for name in path {
        match cmd.find_subcommand(name) {
            Some(c) => cmd = c.clone(),
            None => break,
        }
    }
    cmd.render_help().to_string()
}

/// Parses `argv`, runs it and returns the process exit code.
pub fn main_with(
    args: impl IntoIterator<Item = String>,
    out: &mut dyn Write,
    input: &mut dyn BufRead,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, out, input) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {}", f.message);
            if !f.help_for.is_empty() {
                eprintln!("\n{}", help_text(&f.help_for));
            }
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_definition_is_valid() {
        Cli::command().debug_assert();
    }
}
