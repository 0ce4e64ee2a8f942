//! Command-line front end. Exit codes: 0 ok, 1 self-test failure,
//! 2 usage or parse error, 3 solver precondition, 4 solver disagreement.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use tardy_core::model::{Algorithm, JobInstance};
use tardy_core::sched::{CostModel, SolverChoice};

use crate::bench::{self, BenchConfig, BenchError, Kernel, Solver};
use crate::config::load_cost_model;
use crate::format::{parse_instance, render_instance};
use crate::gen::{generate, Family, GenParams};
use crate::run::{parse_choice, timed_solve};
use crate::selftest::{run_case, run_suites, Kernels, Scale, Suite};

/// Success.
pub const EXIT_OK: i32 = 0;
/// A self-test case failed.
pub const EXIT_SELFTEST: i32 = 1;
/// Bad flags, unreadable or malformed input.
pub const EXIT_USAGE: i32 = 2;
/// A solver precondition was violated.
pub const EXIT_PRECONDITION: i32 = 3;
/// Solvers returned different objectives.
pub const EXIT_DISAGREEMENT: i32 = 4;

/// Exact solvers for minimizing the total processing time of tardy jobs.
#[derive(Debug, Parser)]
#[command(name = "tardy", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance file (`-` reads standard input).
    Solve(SolveArgs),
    /// Print a generated instance.
    Gen(GenArgs),
    /// Time solvers on generated instances, or time convolution kernels.
    Bench(BenchArgs),
    /// Run the differential self-test suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    path: PathBuf,
    /// brute, lm, sumset, conv or auto.
    #[arg(long, default_value = "auto", value_parser = parse_choice_arg)]
    algo: SolverChoice,
    /// Print one JSON object instead of text.
    #[arg(long)]
    json: bool,
    /// TOML file with cost-model constants for `auto`.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_choice_arg(s: &str) -> Result<SolverChoice, String> {
    parse_choice(s).ok_or_else(|| format!("unknown algorithm `{s}` (expected brute, lm, sumset, conv or auto)"))
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    pmax: u64,
    #[arg(long)]
    dsharp: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "uniform")]
    family: Family,
}

/// Options of `bench`.
#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Instance families.
    #[arg(long, value_delimiter = ',', default_value = "uniform")]
    families: Vec<Family>,
    /// Job counts, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    sizes: Vec<usize>,
    /// Solvers, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "lm,sumset,conv")]
    algos: Vec<Algorithm>,
    /// Timed runs per cell.
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 100)]
    pmax: u64,
    #[arg(long, default_value_t = 4)]
    dsharp: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where a shrunk disagreeing instance is written.
    #[arg(long, default_value = "tardy-repro.txt")]
    repro: PathBuf,
    /// Time the convolution kernels instead and report log–log slopes.
    #[arg(long)]
    kernels: bool,
    /// Length exponents for `--kernels`.
    #[arg(long, value_delimiter = ',', default_value = "10,11,12,13,14")]
    exponents: Vec<u32>,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, conflicts_with = "full")]
    quick: bool,
    #[arg(long)]
    full: bool,
    /// Run only this suite.
    #[arg(long)]
    suite: Option<Suite>,
    /// Replay a single case.
    #[arg(long, requires = "suite")]
    seed: Option<u64>,
}

/// Runs a parsed command line; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Solve(args) => solve(args, out, err),
        Command::Gen(args) => gen(args, out, err),
        Command::Bench(args) => {
            let solvers = args.algos.iter().map(|&a| Solver::builtin(a)).collect();
            bench_with(&args, solvers, out, err)
        }
        Command::Selftest(args) => selftest(args, out),
    }
}

#[derive(Serialize)]
struct SolveJson<'a> {
    algorithm: &'a str,
    n: usize,
    #[serde(rename = "P")]
    p: u64,
    d_sharp: usize,
    objective: u64,
    wall_time_ms: u64,
}

fn read_instance(path: &Path) -> Result<JobInstance, String> {
    let mut text = String::new();
    let read = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn solve(args: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let costs = match &args.config {
        Some(path) => match load_cost_model(path) {
            Ok(c) => c,
            Err(e) => return fail(err, EXIT_USAGE, e),
        },
        None => CostModel::default(),
    };
    let inst = match read_instance(&args.path) {
        Ok(i) => i,
        Err(e) => return fail(err, EXIT_USAGE, e),
    };
    let result = match timed_solve(&inst, args.algo, &costs) {
        Ok(r) => r,
        Err(e) => return fail(err, EXIT_PRECONDITION, e),
    };
    let written = if args.json {
        let json = SolveJson {
            algorithm: result.algorithm.id(),
            n: inst.len(),
            p: inst.total_processing(),
            d_sharp: inst.distinct_due_dates(),
            objective: result.objective,
            wall_time_ms: result.wall_time.as_millis() as u64,
        };
        writeln!(out, "{}", serde_json::to_string(&json).expect("plain struct"))
    } else {
        let mut text = format!("algorithm: {}\nobjective: {}\n", result.algorithm, result.objective);
        if let Some(early) = &result.early_set {
            let ids: Vec<String> = early.iter().map(|j| (j + 1).to_string()).collect();
            text.push_str(&format!("early: {}\n", ids.join(" ")));
        }
        write!(out, "{text}")
    };
    written.map_or(EXIT_USAGE, |_| EXIT_OK)
}

fn gen(args: GenArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let params = GenParams {
        n: args.n,
        pmax: args.pmax,
        dsharp: args.dsharp,
        seed: args.seed,
        family: args.family,
    };
    match generate(&params) {
        Ok(inst) => write!(out, "{}", render_instance(&inst)).map_or(EXIT_USAGE, |_| EXIT_OK),
        Err(e) => fail(err, EXIT_USAGE, e),
    }
}

/// `bench` with an explicit solver list.
pub fn bench_with(args: &BenchArgs, solvers: Vec<Solver>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if args.kernels {
        let samples = bench::kernel_scaling(&Kernel::ALL, &args.exponents, args.reps, args.seed);
        if let Some(path) = &args.out {
            let mut csv = String::from("kernel,n,wall_time_ms\n");
            for s in &samples {
                csv.push_str(&format!("{},{},{}\n", s.kernel.id(), s.n, s.wall.as_millis()));
            }
            if let Err(e) = std::fs::write(path, csv) {
                return fail(err, EXIT_USAGE, format!("cannot write {}: {e}", path.display()));
            }
        }
        return write!(out, "{}", bench::scaling_report(&samples)).map_or(EXIT_USAGE, |_| EXIT_OK);
    }
    let config = BenchConfig {
        families: args.families.clone(),
        sizes: args.sizes.clone(),
        pmax: args.pmax,
        dsharp: args.dsharp,
        seed: args.seed,
        reps: args.reps,
    };
    let records = match bench::run_bench(&config, &solvers) {
        Ok(r) => r,
        Err(BenchError::Disagreement(d)) => {
            let p = d.params;
            let header = format!(
                "# solvers disagree: {}\n# shrunk from: tardy gen --n {} --pmax {} --dsharp {} --seed {} --family {}\n",
                d.objectives
                    .iter()
                    .map(|(id, o)| format!("{id}={o}"))
                    .collect::<Vec<_>>()
                    .join(" "),
                p.n,
                p.pmax,
                p.dsharp,
                p.seed,
                p.family
            );
            let text = header + &render_instance(&d.reproducer);
            let message = match std::fs::write(&args.repro, text) {
                Ok(()) => format!("reproducer written to {}", args.repro.display()),
                Err(e) => format!("cannot write reproducer {}: {e}", args.repro.display()),
            };
            let _ = writeln!(err, "error: {}", BenchError::Disagreement(d));
            return fail(err, EXIT_DISAGREEMENT, message);
        }
        Err(e @ BenchError::Solve { .. }) => return fail(err, EXIT_PRECONDITION, e),
        Err(e) => return fail(err, EXIT_USAGE, e),
    };
    let written = match &args.out {
        Some(path) => std::fs::File::create(path)
            .map_err(|e| e.to_string())
            .and_then(|f| bench::write_csv(f, &records).map_err(|e| e.to_string())),
        None => bench::write_csv(&mut *out, &records).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => fail(err, EXIT_USAGE, e),
    }
}

fn selftest(args: SelftestArgs, out: &mut dyn Write) -> i32 {
    let scale = if args.full { Scale::Full } else { Scale::Quick };
    let kernels = Kernels::default();
    if let (Some(suite), Some(seed)) = (args.suite, args.seed) {
        return match run_case(suite, scale, seed, &kernels) {
            Ok(()) => {
                let _ = writeln!(out, "{suite} seed {seed} ok");
                EXIT_OK
            }
            Err(f) => {
                let _ = writeln!(out, "{suite} seed {seed} FAILED: {}", f.message);
                EXIT_SELFTEST
            }
        };
    }
    let suites: Vec<Suite> = args.suite.map_or(Suite::ALL.to_vec(), |s| vec![s]);
    let reports = run_suites(&suites, scale, 0, &kernels);
    for r in &reports {
        let _ = writeln!(out, "{r}");
    }
    if reports.iter().all(|r| r.ok()) {
        EXIT_OK
    } else {
        EXIT_SELFTEST
    }
}

fn fail(err: &mut dyn Write, code: i32, message: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "error: {message}");
    code
}
