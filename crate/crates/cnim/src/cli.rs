//! `cnim` command line. [`run`] returns the process exit code: 0 on
//! success, 1 on a domain error, 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use cnim_core::characterize::{membership, CharacterizedGame};
use cnim_core::circuits::{
    circuit_size_range, circuit_sizes, construct_circuit, enumerate_circuits, CircuitError,
};
use cnim_core::coverage::{coverage_report, COVERAGE_LEMMAS};
use cnim_core::game::{GameSpec, Position};
use cnim_core::solver::{Outcome, SolveLimits};
use cnim_core::strategy::{winning_move_traced, StrategyError};
use serde_json::{json, Value};

use crate::cache::{solve_cached, CacheStatus, CACHE_DIR_ENV};
use crate::explore::{canonical_losses, empty_stack_check, search_conjecture};
use crate::service::{serve, GameService, ServiceConfig};
use crate::verify::verify_table;

#[derive(Parser, Debug)]
#[command(name = "cnim", version, about = "Circular Nim CN(n,k): solver, closed forms, strategies, circuits")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GameArgs {
    /// Number of stacks.
    #[arg(long)]
    pub n: usize,
    /// Most consecutive stacks one move may touch.
    #[arg(long)]
    pub k: usize,
}

impl GameArgs {
    fn spec(&self) -> Result<GameSpec, Failure> {
        GameSpec::new(self.n, self.k).map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Args, Debug, Clone)]
pub struct CacheArgs {
    /// Directory of solved tables.
    #[arg(long, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Largest number of positions a solve may touch.
    #[arg(long, default_value_t = SolveLimits::default().max_positions)]
    pub max_positions: u64,
}

impl CacheArgs {
    fn limits(&self) -> SolveLimits {
        SolveLimits { max_positions: self.max_positions }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve every position up to a height and report the loss count.
    Solve {
        #[command(flatten)]
        game: GameArgs,
        /// Largest stack height (default: the largest that fits --max-positions).
        #[arg(long)]
        max_height: Option<u16>,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Classify one position by closed form and by solver.
    Classify {
        #[command(flatten)]
        game: GameArgs,
        /// Position such as `(3,5,4,2)`.
        #[arg(long)]
        pos: String,
        /// Solve up to this height (default: the position's largest stack).
        #[arg(long)]
        max_height: Option<u16>,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Check the closed form against the solver and both losing-set conditions.
    Verify {
        #[command(flatten)]
        game: GameArgs,
        /// Largest stack height (default: the largest that fits --max-positions).
        #[arg(long)]
        max_height: Option<u16>,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Print a winning move from a position.
    Strategy {
        #[command(flatten)]
        game: GameArgs,
        /// Position such as `(3,5,4,2)`.
        #[arg(long)]
        pos: String,
    },
    /// Lemma coverage over the 2520 arrangements of distinct heights.
    Coverage,
    /// Circuits of the game's simplicial complex.
    Circuits {
        /// Number of stacks (vertices).
        #[arg(long)]
        n: Option<usize>,
        /// Most consecutive stacks one move may touch.
        #[arg(long)]
        k: Option<usize>,
        /// List every circuit.
        #[arg(long, group = "what")]
        enumerate: bool,
        /// Smallest and largest circuit size.
        #[arg(long, group = "what")]
        range: bool,
        /// Build one circuit with ELL vertices.
        #[arg(long, group = "what", value_name = "ELL")]
        construct: Option<usize>,
        /// Circuit sizes for every k with 1 < k < n, for n = 3..=10 and 15
        /// (or just --n).
        #[arg(long, group = "what")]
        table: bool,
    },
    /// Loss lists for open games and the diagonal-sum conjecture search.
    Explore {
        /// Number of stacks (vertices).
        #[arg(long)]
        n: Option<usize>,
        /// Most consecutive stacks one move may touch.
        #[arg(long)]
        k: Option<usize>,
        /// Largest stack height (default: 4 with --conjecture, else the largest that fits --max-positions).
        #[arg(long)]
        max_height: Option<u16>,
        /// Conjecture family; only `2m-m` exists.
        #[arg(long, value_name = "FAMILY")]
        conjecture: Option<String>,
        /// Search CN(2m,m) for this m.
        #[arg(long)]
        m: Option<usize>,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Run the HTTP game service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Sessions are written here on shutdown and read back on start.
        #[arg(long)]
        snapshot: Option<PathBuf>,
        /// Height of solved tables for TABLE-mode games.
        #[arg(long)]
        table_height: Option<u16>,
        #[command(flatten)]
        cache: CacheArgs,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
    /// Output closed early by the reader (e.g. `| head`).
    Closed,
}

fn io(e: std::io::Error) -> Failure {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        Failure::Closed
    } else {
        Failure::Domain(e.to_string())
    }
}

fn domain(e: impl ToString) -> Failure {
    Failure::Domain(e.to_string())
}

fn parse_pos(spec: &GameSpec, text: &str) -> Result<Position, Failure> {
    let pos: Position = text.parse().map_err(|e: cnim_core::game::GameError| Failure::Usage(e.to_string()))?;
    if pos.len() != spec.n() {
        return Err(Failure::Usage(format!("{spec} needs {} stacks, got {}", spec.n(), pos.len())));
    }
    Ok(pos)
}

struct Output<'a> {
    json: bool,
    out: &'a mut dyn Write,
}

impl Output<'_> {
    /// Prints `text` lines, or `value` as one JSON document with `--json`.
    fn emit(&mut self, text: &[String], value: Value) -> std::io::Result<()> {
        if self.json {
            writeln!(self.out, "{value}")
        } else {
            text.iter().try_for_each(|l| writeln!(self.out, "{l}"))
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let mut o = Output { json: cli.json, out };
    match dispatch(cli.command, &mut o) {
        Ok(()) | Err(Failure::Closed) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn dispatch(cmd: Command, o: &mut Output<'_>) -> Result<(), Failure> {
    match cmd {
        Command::Solve { game, max_height, cache } => {
            let spec = game.spec()?;
            let limits = cache.limits();
            let h = max_height.unwrap_or_else(|| limits.default_height(spec.n()));
            let (table, status) = solve_cached(&spec, h, &limits, cache.cache_dir.as_deref()).map_err(domain)?;
            let status = match status {
                CacheStatus::Hit => "cache-hit",
                CacheStatus::Solved => "solved-and-cached",
                CacheStatus::Uncached => "solved",
            };
            o.emit(
                &[
                    format!("{spec} H={h}: {} positions, {} LOSS", table.position_count(), table.loss_count()),
                    format!("table: {status}"),
                ],
                json!({"n": spec.n(), "k": spec.k(), "max_height": h, "positions": table.position_count(),
                       "losses": table.loss_count(), "table": status}),
            )
            .map_err(io)
        }
        Command::Classify { game, pos, max_height, cache } => {
            let spec = game.spec()?;
            let pos = parse_pos(&spec, &pos)?;
            let theorem = membership(&spec, &pos).ok().map(|m| if m { Outcome::Loss } else { Outcome::Win });
            let top = Position::max(&pos);
            let h = max_height.unwrap_or(top.min(u16::MAX as u32) as u16);
            let solver = if top <= h as u32 {
                solve_cached(&spec, h, &cache.limits(), cache.cache_dir.as_deref())
                    .ok()
                    .and_then(|(t, _)| t.outcome(&pos).ok())
            } else {
                None
            };
            let disagree = matches!((theorem, solver), (Some(a), Some(b)) if a != b);
            let show = |o: Option<Outcome>, why: &str| o.map_or_else(|| why.to_string(), |o| o.as_str().to_string());
            let mut text = vec![
                format!("theorem: {}", show(theorem, "n/a (no closed form)")),
                format!("solver: {}", show(solver, "n/a (out of range)")),
            ];
            if disagree {
                text.push("*** DISAGREEMENT between closed form and solver ***".into());
            }
            o.emit(
                &text,
                json!({"n": spec.n(), "k": spec.k(), "position": pos.heights(),
                       "theorem": theorem.map(|t| t.as_str()), "solver": solver.map(|t| t.as_str()),
                       "disagreement": disagree}),
            )
            .map_err(io)
        }
        Command::Verify { game, max_height, cache } => {
            let spec = game.spec()?;
            if CharacterizedGame::for_spec(&spec).is_none() {
                return Err(Failure::Domain(format!("no closed-form losing set is known for {spec}")));
            }
            let limits = cache.limits();
            let h = max_height.unwrap_or_else(|| limits.default_height(spec.n()));
            let (table, _) = solve_cached(&spec, h, &limits, cache.cache_dir.as_deref()).map_err(domain)?;
            let r = verify_table(&table).expect("characterized");
            let verdict = if r.passed() { "PASS" } else { "FAIL" };
            let mut text = vec![
                format!("{spec} H={h}: {} positions, {} LOSS", r.positions, r.losses),
                format!("closed form vs solver disagreements: {}", r.disagreements),
                format!("condition (I) failures: {}", r.condition_one_failures),
                format!("condition (II) failures: {}", r.condition_two_failures),
                format!("winning moves needing search: {}", r.fallbacks),
            ];
            text.extend(r.examples.iter().map(|e| format!("  {e}")));
            text.push(verdict.to_string());
            let mut value = serde_json::to_value(&r).map_err(domain)?;
            value["passed"] = json!(r.passed());
            o.emit(&text, value).map_err(io)?;
            if r.passed() {
                Ok(())
            } else {
                Err(Failure::Domain("verification failed".into()))
            }
        }
        Command::Strategy { game, pos } => {
            let spec = game.spec()?;
            let pos = parse_pos(&spec, &pos)?;
            match winning_move_traced(&spec, &pos) {
                Ok(w) => o
                    .emit(
                        &[format!("move: {}", w.mv), format!("to: {}", w.target), format!("via: {}", w.route)],
                        json!({"losing": false, "move": {"start": w.mv.start + 1, "removals": w.mv.removals},
                               "target": w.target.heights(), "via": w.route.to_string()}),
                    )
                    .map_err(io),
                Err(StrategyError::NotApplicable) => {
                    o.emit(&["losing position".into()], json!({"losing": true})).map_err(io)
                }
                Err(e) => Err(domain(e)),
            }
        }
        Command::Coverage => {
            let r = coverage_report();
            let mut text = vec![format!("arrangements {}", r.total)];
            text.extend(COVERAGE_LEMMAS.iter().map(|&t| format!("{t} {}", r.count(t))));
            text.push(format!("CLEANUP-only {}", r.cleanup_only));
            text.push(format!("uncovered {}", r.uncovered.len()));
            text.push("regions:".into());
            text.extend(r.regions.iter().map(|(set, c)| format!("  {set} {c}")));
            let regions: Vec<Value> = r
                .regions
                .iter()
                .map(|(set, c)| json!({"lemmas": set.iter().map(|t| t.name()).collect::<Vec<_>>(), "count": c}))
                .collect();
            let counts: serde_json::Map<String, Value> =
                COVERAGE_LEMMAS.iter().map(|&t| (t.name().to_string(), json!(r.count(t)))).collect();
            o.emit(
                &text,
                json!({"arrangements": r.total, "lemmas": counts, "cleanup_only": r.cleanup_only,
                       "uncovered": r.uncovered.iter().map(|p| p.heights().to_vec()).collect::<Vec<_>>(),
                       "regions": regions}),
            )
            .map_err(io)
        }
        Command::Circuits { n, k, enumerate, range, construct, table } => {
            if table {
                return circuit_table(n, o);
            }
            let (Some(n), Some(k)) = (n, k) else {
                return Err(Failure::Usage("--n and --k are required".into()));
            };
            let spec = GameSpec::new(n, k).map_err(|e| Failure::Usage(e.to_string()))?;
            let circ = |e: CircuitError| domain(e);
            if let Some(ell) = construct {
                let v = construct_circuit(&spec, ell).map_err(circ)?;
                o.emit(&[v.to_string()], json!({"n": n, "k": k, "ell": ell, "vertices": v.vertices()})).map_err(io)
            } else if enumerate {
                let all = enumerate_circuits(&spec).map_err(circ)?;
                let mut text: Vec<String> = all.iter().map(|v| v.to_string()).collect();
                text.push(format!("{} circuits", all.len()));
                let lists: Vec<&[usize]> = all.iter().map(|v| v.vertices()).collect();
                o.emit(&text, json!({"n": n, "k": k, "circuits": lists})).map_err(io)
            } else {
                let _ = range;
                let r = circuit_size_range(&spec).map_err(circ)?;
                o.emit(&[r.to_string()], json!({"n": n, "k": k, "s": r.s, "lower": r.lower, "upper": r.upper}))
                    .map_err(io)
            }
        }
        Command::Explore { n, k, max_height, conjecture, m, cache } => {
            let limits = cache.limits();
            if let Some(family) = conjecture {
                if family != "2m-m" {
                    return Err(Failure::Usage(format!("unknown conjecture family `{family}` (expected 2m-m)")));
                }
                let m = m.ok_or_else(|| Failure::Usage("--m is required".into()))?;
                let h = max_height.unwrap_or(4);
                let found = search_conjecture(m, h, &limits).map_err(domain)?;
                let spec = format!("CN({},{m})", 2 * m);
                return match found {
                    Some((at, c)) => o.emit(
                        &[format!(
                            "{spec}: counterexample at H={at}: {} (opposite pair sums {}, solver {})",
                            c.position,
                            if c.predicate { "equal" } else { "unequal" },
                            c.outcome
                        )],
                        json!({"m": m, "found": true, "height": at, "position": c.position.heights(),
                               "predicate": c.predicate, "solver": c.outcome.as_str()}),
                    ),
                    None => o.emit(
                        &[format!("{spec}: no counterexample up to H={h}")],
                        json!({"m": m, "found": false, "max_height": h}),
                    ),
                }
                .map_err(io);
            }
            let (Some(n), Some(k)) = (n, k) else {
                return Err(Failure::Usage("--n and --k (or --conjecture) are required".into()));
            };
            let spec = GameSpec::new(n, k).map_err(|e| Failure::Usage(e.to_string()))?;
            let h = max_height.unwrap_or_else(|| limits.default_height(n));
            let (table, _) = solve_cached(&spec, h, &limits, cache.cache_dir.as_deref()).map_err(domain)?;
            let losses = canonical_losses(&table);
            let empty = empty_stack_check(&table);
            let mut text: Vec<String> = losses.iter().map(|p| format!("{} {p}", p.total())).collect();
            text.push(format!("{spec} H={h}: {} canonical LOSS positions ({} in all)", losses.len(), empty.losses));
            text.push(format!(
                "LOSS positions with every stack nonempty: {}{}",
                empty.without_empty_stack,
                empty.first.as_ref().map_or(String::new(), |p| format!(" (first {p})"))
            ));
            let lists: Vec<&[u32]> = losses.iter().map(|p| p.heights()).collect();
            o.emit(
                &text,
                json!({"n": n, "k": k, "max_height": h, "canonical_losses": lists, "losses": empty.losses,
                       "losses_without_empty_stack": empty.without_empty_stack}),
            )
            .map_err(io)
        }
        Command::Serve { port, snapshot, table_height, cache } => {
            let config = ServiceConfig { table_height, cache_dir: cache.cache_dir.clone(), limits: cache.limits() };
            let svc = Arc::new(GameService::new(config));
            let rt = tokio::runtime::Runtime::new().map_err(io)?;
            writeln!(o.out, "listening on port {port}").map_err(io)?;
            rt.block_on(serve(port, svc, snapshot)).map_err(io)
        }
    }
}

/// Default rows of the size table, each with its columns `k = 2..`.
const TABLE_ROWS: [(usize, usize); 9] = [(3, 2), (4, 3), (5, 4), (6, 5), (7, 6), (8, 7), (9, 8), (10, 9), (15, 10)];

fn circuit_table(n: Option<usize>, o: &mut Output<'_>) -> Result<(), Failure> {
    let rows: Vec<(usize, usize)> = match n {
        Some(n) if n >= 3 => vec![(n, n - 1)],
        Some(_) => return Err(Failure::Usage("--n must be at least 3".into())),
        None => TABLE_ROWS.to_vec(),
    };
    let mut text = Vec::new();
    let mut rows_json = Vec::new();
    for (n, last_k) in rows {
        let mut cells = Vec::new();
        let mut cells_json = Vec::new();
        for k in 2..=last_k {
            let spec = GameSpec::new(n, k).map_err(|e| Failure::Usage(e.to_string()))?;
            let sizes: Vec<usize> = match circuit_sizes(&spec) {
                Ok(s) => s.into_iter().collect(),
                Err(_) => {
                    let r = circuit_size_range(&spec).map_err(domain)?;
                    (r.lower..=r.upper).collect()
                }
            };
            cells.push(if sizes.len() == 1 {
                sizes[0].to_string()
            } else {
                format!("{{{}}}", sizes.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            });
            cells_json.push(json!({"k": k, "sizes": sizes}));
        }
        text.push(format!("n={n:<3} {}", cells.join("  ")));
        rows_json.push(json!({"n": n, "cells": cells_json}));
    }
    o.emit(&text, json!({"rows": rows_json})).map_err(io)
}
