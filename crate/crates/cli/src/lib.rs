//! Command-line driver: game files, solver dispatch and run reports.

pub mod gamefile;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num::{BigInt, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use refinery_core::circuit::circuit_from_tensor;
use refinery_core::congestion::{run_matroid_dynamics, solve_network, MatroidConfig};
use refinery_core::dynamics::{certifying_epsilon, run_dynamics, solve_exhaustive, DynamicsConfig, Termination};
use refinery_core::efg::{run_efg_dynamics, EfgConfig, EfgScheme};
use refinery_core::eps::{fmt_rat, parse_rat, rat_to_f64, EpsPoly, Rat};
use refinery_core::game::{embed_numeric, perturbed_potential, EpsPureProfile, PerturbScheme, PureStrategy};
use refinery_core::gamegen::{self, GenSpec, Generated, WeightedGraph};
use refinery_core::oracles::{self, ExplicitCongestion};
use refinery_core::polymatrix::{default_numeric_eps, grid_starts, run_gd, sweep, GdConfig, PolymatrixGame};

use gamefile::{Game, GameBody, GameFile};

pub const EXIT_CONVERGED: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_STEP_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "refinery", version, about = "Perfect and proper equilibrium refinements of potential games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a game file and print a JSON run report.
    Solve(SolveArgs),
    /// Solve with tracing on and print the trace as JSON lines.
    Trace(SolveArgs),
    /// Write a generated game file.
    Gen(GenArgs),
    /// Check a numeric profile against the definition of a refinement.
    Verify(VerifyArgs),
    /// Projected gradient ascent from a grid of starts; CSV on stdout.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Refinement {
    Perfect,
    Proper,
    Efpe,
    NfProper,
}

#[derive(clap::Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long, value_enum, default_value = "perfect")]
    pub refinement: Refinement,
    /// Step cap for dynamics, iteration cap for gradient ascent [default: none / 10000].
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Write the trace as JSON lines to this file.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
    /// Round-robin player order, comma separated [default: file order, then 0..n].
    #[arg(long, value_delimiter = ',')]
    pub order: Option<Vec<usize>>,
    /// Numeric tremble for polymatrix games [default: from the game's bit size].
    #[arg(long)]
    pub eps: Option<String>,
    /// Random start for polymatrix games [default: uniform start].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Enumerate all ε-pure profiles instead of running dynamics (normal-form games).
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Fig1,
    Fig2,
    Fig2Efg,
    Fig3,
    Fig4,
    Fig6,
    MpChristmas,
    DoubleExp,
    DoubleExp3,
    MaxCutTriplet,
    MaxCutEscape,
    TeamBot,
    Knapsack,
}

#[derive(clap::Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Vertex count for MaxCut kinds.
    #[arg(long)]
    pub vertices: Option<usize>,
    /// Weighted edges `u-v:w`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub edges: Vec<String>,
    /// Three-player table file holding the adversary's payoffs (team-bot).
    #[arg(long)]
    pub team_game: Option<PathBuf>,
    #[arg(long, default_value = "0")]
    pub r: String,
    #[arg(long, default_value = "1")]
    pub delta: String,
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    pub capacity: i64,
    /// Output path [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    EpsPerfect,
    EpsProper,
    NoDeviation,
}

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// JSON `{"strategies": [[..]]}` or, for congestion games, `{"sets": [[..]]}`.
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long, value_enum)]
    pub refinement: Check,
    /// [default: the profile file's `eps`, else 2^(−2·bits)].
    #[arg(long)]
    pub eps: Option<String>,
}

#[derive(clap::Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// Starts per axis for two-player 2×2 games.
    #[arg(long, default_value_t = 10)]
    pub grid: usize,
    /// Use this many random starts instead of the grid.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tremble; `0` runs vanilla ascent.
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: usize,
    /// Also write the CSV here.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
}

fn parse_r(s: &str) -> Result<Rat> {
    parse_rat(s).map_err(|e| anyhow!("bad rational {s:?}: {e}"))
}

fn strs(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

fn strs2(v: &[Vec<Rat>]) -> Vec<Vec<String>> {
    v.iter().map(|r| strs(r)).collect()
}

fn poly_strs(v: &[Vec<EpsPoly>]) -> Vec<Vec<String>> {
    v.iter().map(|r| r.iter().map(EpsPoly::to_string).collect()).collect()
}

struct Outcome {
    result: Value,
    steps: usize,
    termination: Termination,
    trace: Vec<String>,
}

fn strategy_json(s: &PureStrategy) -> Value {
    match s {
        PureStrategy::Favored(a) => json!({ "favored": a }),
        PureStrategy::Ranked(pi) => json!({ "ranks": pi }),
    }
}

fn resolve_order(explicit: &Option<Vec<usize>>, file: &Option<Vec<usize>>, n: usize) -> Vec<usize> {
    explicit.clone().or_else(|| file.clone()).unwrap_or_else(|| (0..n).collect())
}

fn solve_game(game: &Game, a: &SolveArgs, trace: bool) -> Result<Outcome> {
    match game {
        Game::Normal { game, player_order } => {
            let scheme = match a.refinement {
                Refinement::Perfect => PerturbScheme::PerfectBox,
                Refinement::Proper => PerturbScheme::ProperPermutahedron,
                r => bail!("refinement {r:?} needs an extensive-form game"),
            };
            let (profile, steps, termination, lines) = if a.exhaustive {
                (solve_exhaustive(game, scheme)?, 0, Termination::Converged, Vec::new())
            } else {
                let mut cfg = DynamicsConfig::new(scheme, game.num_players());
                cfg.player_order = resolve_order(&a.order, player_order, game.num_players());
                cfg.max_steps = a.max_steps;
                cfg.trace = trace;
                let start = EpsPureProfile::default_start(scheme, game.actions());
                let r = run_dynamics(game, &start, &cfg)?;
                let lines = r.trace.iter().map(|t| t.to_json_line()).collect();
                (r.final_profile, r.steps, r.termination, lines)
            };
            let potential = perturbed_potential(game, &profile, scheme)?;
            let eps = certifying_epsilon(game, &profile, scheme)?;
            let numeric = embed_numeric(&profile, scheme, game.actions(), &eps)?;
            Ok(Outcome {
                result: json!({
                    "favored": profile.tops(),
                    "strategies": profile.strategies.iter().map(strategy_json).collect::<Vec<_>>(),
                    "potential": potential.to_string(),
                    "numeric": { "eps": fmt_rat(&eps), "strategies": strs2(&numeric) },
                }),
                steps,
                termination,
                trace: lines,
            })
        }
        Game::Efg(g) => {
            let scheme = match a.refinement {
                Refinement::Efpe => EfgScheme::Efpe,
                Refinement::NfProper | Refinement::Proper => EfgScheme::NormalFormProper,
                r => bail!("refinement {r:?} is not available for extensive-form games"),
            };
            let mut cfg = EfgConfig::new(scheme, g.num_players());
            cfg.player_order = resolve_order(&a.order, &None, g.num_players());
            cfg.max_steps = a.max_steps;
            cfg.trace = trace;
            let r = run_efg_dynamics(g, None, &cfg)?;
            Ok(Outcome {
                result: json!({
                    "strategies": poly_strs(&r.profile),
                    "limit": strs2(&r.limit()),
                    "potential": r.potential.to_string(),
                }),
                steps: r.steps,
                termination: r.termination,
                trace: r.trace.iter().map(|t| t.to_json_line()).collect(),
            })
        }
        Game::Matroid(g) => {
            if a.refinement != Refinement::Perfect {
                bail!("congestion games support the perfect refinement only");
            }
            let mut cfg = MatroidConfig::new(g.num_players());
            cfg.player_order = resolve_order(&a.order, &None, g.num_players());
            cfg.max_steps = a.max_steps;
            cfg.trace = trace;
            let r = run_matroid_dynamics(g, &cfg)?;
            Ok(Outcome {
                result: json!({ "bases": r.profile, "potential": r.potential.to_string(), "step_bound": g.step_bound() }),
                steps: r.steps,
                termination: r.termination,
                trace: r.trace.iter().map(|t| t.to_json_line()).collect(),
            })
        }
        Game::Network(g) => {
            if a.refinement != Refinement::Perfect {
                bail!("congestion games support the perfect refinement only");
            }
            let s = solve_network(g)?;
            Ok(Outcome {
                result: json!({ "paths": s.paths, "flow": s.flow, "potential": s.potential.to_string() }),
                steps: 0,
                termination: Termination::Converged,
                trace: Vec::new(),
            })
        }
        Game::Polymatrix(g) => {
            if a.refinement != Refinement::Perfect {
                bail!("polymatrix games support the perfect refinement only");
            }
            let eps = match &a.eps {
                Some(s) => parse_r(s)?,
                None => default_numeric_eps(g),
            };
            let mut cfg = GdConfig::new(eps.clone(), a.max_steps.unwrap_or(10_000));
            cfg.record = trace;
            let start = match a.seed {
                Some(seed) => random_start(g, &eps, &mut ChaCha8Rng::seed_from_u64(seed)),
                None => uniform_start(g),
            };
            let r = run_gd(g, &start, &cfg)?;
            let trace = r
                .trajectory
                .iter()
                .map(|row| {
                    json!({ "iter": row.iter, "x": strs2(&row.x), "potential": fmt_rat(&row.potential), "gap": fmt_rat(&row.gap) })
                        .to_string()
                })
                .collect();
            Ok(Outcome {
                result: json!({
                    "x": strs2(&r.x),
                    "potential": fmt_rat(&r.potential),
                    "gap": fmt_rat(&r.gap),
                    "eps": fmt_rat(&eps),
                    "eta": fmt_rat(&r.eta),
                    "fixed_point": r.fixed_point,
                }),
                steps: r.iters,
                termination: if r.fixed_point { Termination::Converged } else { Termination::StepCapHit },
                trace,
            })
        }
        Game::ZeroSumEfg(_) => bail!("zero-sum extensive-form games are best-response test vectors and cannot be solved"),
        Game::Hypercube { .. } => bail!("hypercube utility files are best-response test vectors and cannot be solved"),
    }
}

fn uniform_start(g: &PolymatrixGame) -> Vec<Vec<Rat>> {
    g.actions().iter().map(|&m| vec![Rat::new(BigInt::one(), BigInt::from(m)); m]).collect()
}

fn random_start(g: &PolymatrixGame, eps: &Rat, rng: &mut ChaCha8Rng) -> Vec<Vec<Rat>> {
    g.actions()
        .iter()
        .map(|&m| {
            let w: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=1000)).collect();
            let total: i64 = w.iter().sum();
            let free = Rat::one() - Rat::from_integer(BigInt::from(m)) * eps;
            let mut x: Vec<Rat> = w.iter().map(|&wi| eps + &free * Rat::new(wi.into(), total.into())).collect();
            let rest: Rat = x[1..].iter().sum();
            x[0] = Rat::one() - rest;
            x
        })
        .collect()
}

fn write_lines(path: &Path, lines: &[String]) -> Result<()> {
    let mut f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    for l in lines {
        writeln!(f, "{l}")?;
    }
    Ok(())
}

fn exit_for(t: Termination) -> i32 {
    match t {
        Termination::Converged => EXIT_CONVERGED,
        Termination::StepCapHit => EXIT_STEP_CAP,
    }
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let t0 = Instant::now();
    let (file, game) = gamefile::parse_game_file(&a.game)?;
    let o = solve_game(&game, a, a.trace_out.is_some())?;
    if let Some(p) = &a.trace_out {
        write_lines(p, &o.trace)?;
    }
    let report = json!({
        "command": "solve",
        "game_digest": file.digest(),
        "kind": file.body.kind(),
        "refinement": format!("{:?}", a.refinement).to_lowercase(),
        "termination": format!("{:?}", o.termination),
        "steps": o.steps,
        "result": o.result,
        "trace_out": a.trace_out.as_ref().map(|p| p.display().to_string()),
        "wall_time_ms": t0.elapsed().as_millis() as u64,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(exit_for(o.termination))
}

fn cmd_trace(a: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let (_, game) = gamefile::parse_game_file(&a.game)?;
    let o = solve_game(&game, a, true)?;
    match &a.trace_out {
        Some(p) => write_lines(p, &o.trace)?,
        None => {
            for l in &o.trace {
                writeln!(out, "{l}")?;
            }
        }
    }
    Ok(exit_for(o.termination))
}

fn parse_edges(vertices: Option<usize>, edges: &[String]) -> Result<WeightedGraph> {
    let mut out = Vec::new();
    for e in edges {
        let (uv, w) = e.split_once(':').unwrap_or((e.as_str(), "1"));
        let (u, v) = uv.split_once('-').ok_or_else(|| anyhow!("edge {e:?} is not of the form u-v:w"))?;
        out.push((u.trim().parse()?, v.trim().parse()?, w.trim().parse()?));
    }
    let inferred = out.iter().map(|&(u, v, _): &(usize, usize, u64)| u.max(v) + 1).max().unwrap_or(0);
    Ok(WeightedGraph { vertices: vertices.unwrap_or(inferred), edges: out })
}

/// Builds the file body for a generator kind.
pub fn generate_body(a: &GenArgs) -> Result<GameBody> {
    use gamegen::{FIG1, FIG2, FIG3};
    let ints = |v: &[i64]| -> Vec<Rat> { v.iter().map(|&c| Rat::from_integer(c.into())).collect() };
    let spec = match a.kind {
        GenKind::Fig1 => return Ok(gamefile::table_body(&[2, 2], &ints(&FIG1.concat()))),
        GenKind::Fig2 => return Ok(gamefile::table_body(&[3, 3], &ints(&FIG2.concat()))),
        GenKind::Fig3 => return Ok(gamefile::table_body(&[2, 2], &ints(&FIG3.concat()))),
        GenKind::Fig2Efg => return Ok(gamefile::efg_body(&gamegen::fig2_efg())),
        GenKind::Fig4 => GenSpec::Fig4RandomGd,
        GenKind::Fig6 => GenSpec::Fig6SymbolicGd,
        GenKind::MpChristmas => GenSpec::MpChristmas,
        GenKind::DoubleExp => GenSpec::DoubleExp { n: a.n },
        GenKind::DoubleExp3 => GenSpec::DoubleExp3Player { n: a.n },
        GenKind::MaxCutTriplet => GenSpec::MaxCutTriplet { graph: parse_edges(a.vertices, &a.edges)? },
        GenKind::MaxCutEscape => GenSpec::MaxCutEscape { graph: parse_edges(a.vertices, &a.edges)? },
        GenKind::TeamBot => {
            let path = a.team_game.as_ref().ok_or_else(|| anyhow!("team-bot needs --team-game"))?;
            let (file, _) = gamefile::parse_game_file(path)?;
            let GameBody::Table { actions, potential, .. } = file.body else {
                bail!("--team-game must be a table file");
            };
            GenSpec::TeamBot { actions, values: potential, r: a.r.clone(), delta: a.delta.clone() }
        }
        GenKind::Knapsack => GenSpec::KnapsackHypercube { weights: a.weights.clone(), capacity: a.capacity },
    };
    Ok(match gamegen::generate(&spec)? {
        Generated::NormalForm { game, player_order } => gamefile::from_circuit_game(&game, player_order),
        Generated::Polymatrix(g) => gamefile::polymatrix_body(&g),
        Generated::Efg(g) => gamefile::efg_body(&g),
        Generated::ZeroSumEfg(g) => gamefile::zero_sum_body(&g),
        Generated::Hypercube { utility, knapsack_count } => gamefile::hypercube_body(&utility, knapsack_count),
    })
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let file = GameFile::new(generate_body(a)?);
    file.validate()?;
    let text = file.to_json();
    match &a.out {
        Some(p) => std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_CONVERGED)
}

fn explicit_congestion(game: &Game) -> Result<ExplicitCongestion> {
    Ok(match game {
        Game::Matroid(g) => ExplicitCongestion {
            players: g.num_players(),
            resources: g.matroid().size(),
            strategies: oracles::brute_bases(g.matroid())?,
            delays: g.delays().to_vec(),
        },
        Game::Network(g) => ExplicitCongestion {
            players: g.num_players(),
            resources: g.graph().edges.len(),
            strategies: oracles::brute_paths(g.graph(), g.source(), g.sink()),
            delays: g.delays().to_vec(),
        },
        _ => bail!("no-deviation checks need a congestion game"),
    })
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let (_, game) = gamefile::parse_game_file(&a.game)?;
    let text = std::fs::read_to_string(&a.profile).with_context(|| format!("reading {}", a.profile.display()))?;
    let prof: Value = serde_json::from_str(&text).with_context(|| format!("schema error in {}", a.profile.display()))?;
    let file_eps = prof.get("eps").and_then(Value::as_str).map(parse_r).transpose()?;
    let strategies = || -> Result<Vec<Vec<Rat>>> {
        let s: Vec<Vec<String>> = serde_json::from_value(prof.get("strategies").cloned().ok_or_else(|| anyhow!("profile needs \"strategies\""))?)?;
        s.iter().map(|r| r.iter().map(|c| parse_r(c)).collect()).collect()
    };
    let eps = match (&a.eps, file_eps) {
        (Some(s), _) => parse_r(s)?,
        (None, Some(e)) => e,
        (None, None) => match &game {
            Game::Normal { game, .. } => oracles::numeric_eps(oracles::game_bits(game)),
            Game::Polymatrix(g) => default_numeric_eps(g),
            _ => oracles::numeric_eps(24),
        },
    };
    let report = match (a.refinement, &game) {
        (Check::EpsPerfect | Check::EpsProper, Game::Normal { game, .. }) => {
            let x = strategies()?;
            let v = if a.refinement == Check::EpsPerfect {
                oracles::check_eps_perfect(game, &x, &eps)?
            } else {
                oracles::check_eps_proper(game, &x, &eps)?
            };
            v.to_json()
        }
        (Check::EpsPerfect | Check::EpsProper, Game::Polymatrix(g)) => {
            oracles::check_polymatrix(g, &strategies()?, &eps, a.refinement == Check::EpsProper)?.to_json()
        }
        (Check::NoDeviation, Game::Matroid(_) | Game::Network(_)) => {
            let ec = explicit_congestion(&game)?;
            let sets: Vec<Vec<usize>> = serde_json::from_value(prof.get("sets").cloned().ok_or_else(|| anyhow!("profile needs \"sets\""))?)?;
            let idx = sets
                .iter()
                .map(|s| ec.strategy_index(s).ok_or_else(|| anyhow!("{s:?} is not a pure strategy")))
                .collect::<Result<Vec<_>>>()?;
            let v = ec.check_no_deviation(&idx, &eps)?;
            json!({
                "pass": v.pass,
                "eps": fmt_rat(&v.eps),
                "witness": v.witness.map(|(p, s, gain)| json!({ "player": p, "strategy": ec.strategies[s], "improvement": fmt_rat(&gain) })),
            })
        }
        (c, _) => bail!("check {c:?} does not apply to this game kind"),
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(if report["pass"] == json!(true) { EXIT_CONVERGED } else { EXIT_CHECK_FAILED })
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let (_, game) = gamefile::parse_game_file(&a.game)?;
    let Game::Polymatrix(g) = game else { bail!("sweep needs a polymatrix game") };
    let eps = match &a.eps {
        Some(s) => parse_r(s)?,
        None => default_numeric_eps(&g),
    };
    let starts = match a.random {
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..k).map(|_| random_start(&g, &eps, &mut rng)).collect()
        }
        None => {
            if g.actions() != [2, 2] {
                bail!("grid starts need a two-player 2×2 game; use --random");
            }
            grid_starts(a.grid, &eps)
        }
    };
    let cfg = GdConfig::new(eps, a.max_steps);
    let results = sweep(&g, &starts, &cfg)?;
    let mut csv = String::from("start,iters,fixed_point,potential,potential_f64,gap,start_x,final_x\n");
    let flat = |x: &[Vec<Rat>]| x.iter().flatten().map(fmt_rat).collect::<Vec<_>>().join(" ");
    for (k, (s, r)) in starts.iter().zip(&results).enumerate() {
        csv.push_str(&format!(
            "{k},{},{},{},{},{},{},{}\n",
            r.iters,
            r.fixed_point,
            fmt_rat(&r.potential),
            rat_to_f64(&r.potential),
            fmt_rat(&r.gap),
            flat(s),
            flat(&r.x)
        ));
    }
    if let Some(p) = &a.trace_out {
        std::fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?;
    }
    out.write_all(csv.as_bytes())?;
    Ok(if results.iter().all(|r| r.fixed_point) { EXIT_CONVERGED } else { EXIT_STEP_CAP })
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Trace(a) => cmd_trace(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_CONVERGED };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match dispatch(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INVALID
        }
    }
}

/// Table game from integer payoffs, for tests and examples.
pub fn table_file(actions: &[usize], values: &[i64]) -> Result<GameFile> {
    let v: Vec<Rat> = values.iter().map(|&c| Rat::from_integer(c.into())).collect();
    circuit_from_tensor(actions, &v)?;
    Ok(GameFile::new(gamefile::table_body(actions, &v)))
}
