//! Benchmark harness: generated instances × solvers × repetitions, with
//! cross-solver verification, plus a kernel scaling experiment.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use tardy_core::maxmin::{maxmin_conv_fast, maxmin_conv_naive, ExtInt, ExtVec};
use tardy_core::model::{Algorithm, Job, JobInstance};
use tardy_core::sched::{solve, CostModel, SolveError, SolverChoice};
use tardy_core::skewed::{skewed_conv_fast, skewed_conv_naive};

use crate::gen::{generate, Family, GenError, GenParams, Rng};

/// Fixed CSV header.
pub const CSV_HEADER: &str = "algorithm,n,P,d_sharp,D,seed,objective,wall_time_ms";

/// One measurement row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    /// Solver identifier.
    pub algorithm: String,
    /// Job count.
    pub n: usize,
    /// Total processing time.
    #[serde(rename = "P")]
    pub p: u64,
    /// Distinct due dates.
    pub d_sharp: usize,
    /// Sum of distinct due dates.
    #[serde(rename = "D")]
    pub d: u128,
    /// Generator seed of the instance.
    pub seed: u64,
    /// Objective found.
    pub objective: u64,
    /// Solver wall time, whole milliseconds.
    pub wall_time_ms: u64,
}

type SolveFn = dyn Fn(&JobInstance) -> Result<u64, SolveError> + Send + Sync;

/// A named solver under test.
pub struct Solver {
    id: String,
    run: Box<SolveFn>,
}

impl Solver {
    /// One of the library's solvers.
    pub fn builtin(alg: Algorithm) -> Self {
        Solver::new(alg.id(), move |inst| {
            solve(inst, SolverChoice::Fixed(alg), &CostModel::default()).map(|r| r.objective)
        })
    }

    /// Any objective-producing function.
    pub fn new(
        id: impl Into<String>,
        run: impl Fn(&JobInstance) -> Result<u64, SolveError> + Send + Sync + 'static,
    ) -> Self {
        Solver {
            id: id.into(),
            run: Box::new(run),
        }
    }

    /// Identifier written to the CSV.
    pub fn id(&self) -> &str {
        &self.id
    }

    fn objective(&self, inst: &JobInstance) -> Result<u64, SolveError> {
        (self.run)(inst)
    }
}

/// What to run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    /// Instance families.
    pub families: Vec<Family>,
    /// Job counts.
    pub sizes: Vec<usize>,
    /// Largest processing time.
    pub pmax: u64,
    /// Distinct due dates (capped at `n`; the subset-sum family uses 1).
    pub dsharp: usize,
    /// Seed of the first instance; later instances count up from it.
    pub seed: u64,
    /// Timed runs per (instance, solver).
    pub reps: usize,
}

/// Solvers that returned different objectives on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    /// Generator parameters of the original instance.
    pub params: GenParams,
    /// Objective per solver on the original instance.
    pub objectives: Vec<(String, u64)>,
    /// A smaller instance on which the solvers still disagree.
    pub reproducer: JobInstance,
}

/// Harness failures.
#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    /// `--sizes` was empty.
    #[error("no instance sizes given")]
    NoSizes,
    /// No families or solvers given, or zero repetitions.
    #[error("{0}")]
    Usage(&'static str),
    /// Generator rejected the parameters.
    #[error(transparent)]
    Gen(#[from] GenError),
    /// A solver precondition failed.
    #[error("{solver} on n = {n}: {source}")]
    Solve {
        /// Solver id.
        solver: String,
        /// Job count.
        n: usize,
        /// The failure.
        source: SolveError,
    },
    /// Solvers disagree.
    #[error("solvers disagree on {family} n = {n} seed = {seed}: {summary}", family = .0.params.family, n = .0.params.n, seed = .0.params.seed, summary = summary(&.0.objectives))]
    Disagreement(Box<Disagreement>),
}

fn summary(objectives: &[(String, u64)]) -> String {
    objectives
        .iter()
        .map(|(id, o)| format!("{id}={o}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs every (instance, solver, repetition) cell. Objectives are compared
/// per instance before any record is returned.
pub fn run_bench(config: &BenchConfig, solvers: &[Solver]) -> Result<Vec<BenchRecord>, BenchError> {
    if config.sizes.is_empty() {
        return Err(BenchError::NoSizes);
    }
    if config.families.is_empty() {
        return Err(BenchError::Usage("no families given"));
    }
    if solvers.is_empty() {
        return Err(BenchError::Usage("no algorithms given"));
    }
    if config.reps == 0 {
        return Err(BenchError::Usage("reps must be at least 1"));
    }
    let mut records = Vec::new();
    let mut seed = config.seed;
    for &family in &config.families {
        for &n in &config.sizes {
            let params = GenParams {
                n,
                pmax: config.pmax,
                dsharp: if family == Family::SubsetSum { 1 } else { config.dsharp.min(n) },
                seed,
                family,
            };
            seed = seed.wrapping_add(1);
            let inst = generate(&params)?;
            let mut objectives = Vec::with_capacity(solvers.len());
            for solver in solvers {
                for _ in 0..config.reps {
                    let start = Instant::now();
                    let objective = solver.objective(&inst).map_err(|source| BenchError::Solve {
                        solver: solver.id().to_owned(),
                        n,
                        source,
                    })?;
                    let wall = start.elapsed();
                    records.push(record(solver.id(), &inst, params.seed, objective, wall));
                    objectives.push((solver.id().to_owned(), objective));
                }
            }
            objectives.dedup();
            if objectives.iter().any(|(_, o)| *o != objectives[0].1) {
                return Err(BenchError::Disagreement(Box::new(Disagreement {
                    params,
                    reproducer: minimize(&inst, solvers),
                    objectives,
                })));
            }
        }
    }
    Ok(records)
}

fn record(algorithm: &str, inst: &JobInstance, seed: u64, objective: u64, wall: Duration) -> BenchRecord {
    BenchRecord {
        algorithm: algorithm.to_owned(),
        n: inst.len(),
        p: inst.total_processing(),
        d_sharp: inst.distinct_due_dates(),
        d: inst.due_date_sum(),
        seed,
        objective,
        wall_time_ms: wall.as_millis() as u64,
    }
}

fn disagree(inst: &JobInstance, solvers: &[Solver]) -> bool {
    let mut seen = None;
    for s in solvers {
        let Ok(o) = s.objective(inst) else { return false };
        match seen {
            None => seen = Some(o),
            Some(first) if first != o => return true,
            _ => {}
        }
    }
    false
}

/// Greedy shrinking: drop jobs, then lower processing times and due dates,
/// keeping every step on which the solvers still disagree.
pub fn minimize(inst: &JobInstance, solvers: &[Solver]) -> JobInstance {
    let mut jobs: Vec<Job> = inst.jobs().to_vec();
    let still = |jobs: &[Job]| JobInstance::new(jobs.to_vec()).is_ok_and(|i| disagree(&i, solvers));
    let mut changed = true;
    while changed {
        changed = false;
        let mut j = 0;
        while j < jobs.len() {
            let mut fewer = jobs.clone();
            fewer.remove(j);
            if !fewer.is_empty() && still(&fewer) {
                jobs = fewer;
                changed = true;
            } else {
                j += 1;
            }
        }
        for j in 0..jobs.len() {
            for due in [false, true] {
                while let Some(next) = [Step::Halve, Step::Decrement]
                    .into_iter()
                    .filter_map(|step| lowered(&jobs, j, due, step))
                    .find(|cand| still(cand))
                {
                    jobs = next;
                    changed = true;
                }
            }
        }
    }
    JobInstance::new(jobs).expect("shrinking keeps instances valid")
}

#[derive(Clone, Copy)]
enum Step {
    Halve,
    Decrement,
}

/// `jobs` with one processing time (or due date) lowered, if it can go lower.
fn lowered(jobs: &[Job], j: usize, due: bool, step: Step) -> Option<Vec<Job>> {
    let mut out = jobs.to_vec();
    let (v, floor) = if due { (&mut out[j].d, 0) } else { (&mut out[j].p, 1) };
    if *v <= floor {
        return None;
    }
    *v = match step {
        Step::Halve => (*v / 2).max(floor),
        Step::Decrement => *v - 1,
    };
    Some(out)
}

/// Writes records as CSV with the fixed header.
pub fn write_csv<W: std::io::Write>(out: W, records: &[BenchRecord]) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Convolution kernels timed by [`kernel_scaling`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// `maxmin_conv_fast`.
    MaxminFast,
    /// `maxmin_conv_naive`.
    MaxminNaive,
    /// `skewed_conv_fast`.
    SkewedFast,
    /// `skewed_conv_naive`.
    SkewedNaive,
}

impl Kernel {
    /// Every kernel.
    pub const ALL: [Kernel; 4] = [Kernel::MaxminFast, Kernel::MaxminNaive, Kernel::SkewedFast, Kernel::SkewedNaive];

    /// Report name.
    pub fn id(self) -> &'static str {
        match self {
            Kernel::MaxminFast => "maxmin_fast",
            Kernel::MaxminNaive => "maxmin_naive",
            Kernel::SkewedFast => "skewed_fast",
            Kernel::SkewedNaive => "skewed_naive",
        }
    }

    fn run(self, a: &[ExtInt], b: &[ExtInt]) -> ExtVec {
        match self {
            Kernel::MaxminFast => maxmin_conv_fast(a, b),
            Kernel::MaxminNaive => maxmin_conv_naive(a, b),
            Kernel::SkewedFast => skewed_conv_fast(a, b),
            Kernel::SkewedNaive => skewed_conv_naive(a, b),
        }
    }
}

/// Best-of-`reps` time of one kernel at one length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSample {
    /// The kernel.
    pub kernel: Kernel,
    /// Operand length.
    pub n: usize,
    /// Fastest run.
    pub wall: Duration,
}

/// Times each kernel on random pairs of length `2^e` for every exponent,
/// with finite values uniform in `0..4n`.
pub fn kernel_scaling(kernels: &[Kernel], exponents: &[u32], reps: usize, seed: u64) -> Vec<KernelSample> {
    let mut rng = Rng::new(seed);
    let mut samples = Vec::new();
    for &e in exponents {
        let n = 1usize << e;
        let mut draw = || -> ExtVec { (0..n).map(|_| ExtInt::Finite(rng.below(4 * n as u64) as i64)).collect() };
        let (a, b) = (draw(), draw());
        for &kernel in kernels {
            let mut best = Duration::MAX;
            for _ in 0..reps.max(1) {
                let start = Instant::now();
                std::hint::black_box(kernel.run(&a, &b));
                best = best.min(start.elapsed());
            }
            samples.push(KernelSample { kernel, n, wall: best });
        }
    }
    samples
}

/// Least-squares slope of `log t` against `log n`.
pub fn loglog_slope(points: &[(usize, Duration)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, t)| ((n as f64).ln(), t.as_secs_f64().max(1e-9).ln()))
        .collect();
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Per-kernel slope of the samples.
pub fn slopes(samples: &[KernelSample]) -> Vec<(Kernel, Option<f64>)> {
    let mut out = Vec::new();
    for kernel in Kernel::ALL {
        let points: Vec<(usize, Duration)> = samples
            .iter()
            .filter(|s| s.kernel == kernel)
            .map(|s| (s.n, s.wall))
            .collect();
        if !points.is_empty() {
            out.push((kernel, loglog_slope(&points)));
        }
    }
    out
}

/// Human-readable timing table and slopes.
pub fn scaling_report(samples: &[KernelSample]) -> String {
    let mut out = String::from("kernel         n        ms\n");
    for s in samples {
        out.push_str(&format!(
            "{:<14} {:<8} {:.3}\n",
            s.kernel.id(),
            s.n,
            s.wall.as_secs_f64() * 1e3
        ));
    }
    for (kernel, slope) in slopes(samples) {
        match slope {
            Some(v) => out.push_str(&format!("slope {:<14} {v:.3}\n", kernel.id())),
            None => out.push_str(&format!("slope {:<14} n/a\n", kernel.id())),
        }
    }
    out
}
