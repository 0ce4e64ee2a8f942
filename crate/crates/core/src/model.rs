//! Jobs, instances and EDD evaluation.
//!
//! A job is *early* when it completes no later than its due date (`C_j ≤ d_j`)
//! and *tardy* otherwise. Every instance has an optimal schedule in EDD form:
//! the early jobs run first in non-decreasing due-date order, the tardy jobs
//! follow in any order. A schedule is therefore fully described by its set of
//! early jobs, which is what certificates carry.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use core::time::Duration;

/// Upper bound accepted for the total processing time and for any due date.
pub const MAX_MAGNITUDE: u64 = 1 << 62;

/// A single job: processing time `p ≥ 1` and due date `d ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Job {
    /// Processing time.
    pub p: u64,
    /// Due date.
    pub d: u64,
}

impl Job {
    /// Creates a job. Validation happens in [`JobInstance::new`].
    pub const fn new(p: u64, d: u64) -> Self {
        Job { p, d }
    }
}

/// Jobs sharing one due date.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DueGroup {
    /// The common due date `d^(i)`.
    pub due: u64,
    /// Processing times of the group, as a multiset in job-index order.
    pub processing: Vec<u64>,
    /// Indices (into [`JobInstance::jobs`]) of the jobs in this group, ascending.
    pub jobs: Vec<usize>,
}

impl DueGroup {
    /// Total processing time of the group.
    pub fn total(&self) -> u64 {
        self.processing.iter().sum()
    }
}

/// Reasons an instance is rejected.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    /// No jobs were given.
    #[error("instance has no jobs")]
    Empty,
    /// A job has processing time zero.
    #[error("job {job} has processing time 0")]
    ZeroProcessingTime {
        /// Index of the offending job.
        job: usize,
    },
    /// A due date exceeds [`MAX_MAGNITUDE`].
    #[error("job {job} has due date {due} above 2^62")]
    DueDateTooLarge {
        /// Index of the offending job.
        job: usize,
        /// The rejected due date.
        due: u64,
    },
    /// The total processing time exceeds [`MAX_MAGNITUDE`].
    #[error("total processing time exceeds 2^62")]
    TotalTooLarge,
}

/// A validated instance with its due-date grouping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobInstance {
    jobs: Vec<Job>,
    groups: Vec<DueGroup>,
    total: u64,
}

impl JobInstance {
    /// Validates `jobs` and groups them by due date (ascending).
    pub fn new(jobs: Vec<Job>) -> Result<Self, InstanceError> {
        if jobs.is_empty() {
            return Err(InstanceError::Empty);
        }
        let mut total: u64 = 0;
        for (idx, job) in jobs.iter().enumerate() {
            if job.p == 0 {
                return Err(InstanceError::ZeroProcessingTime { job: idx });
            }
            if job.d > MAX_MAGNITUDE {
                return Err(InstanceError::DueDateTooLarge { job: idx, due: job.d });
            }
            total = total
                .checked_add(job.p)
                .filter(|&t| t <= MAX_MAGNITUDE)
                .ok_or(InstanceError::TotalTooLarge)?;
        }

        let mut order: Vec<usize> = (0..jobs.len()).collect();
        order.sort_by_key(|&j| (jobs[j].d, j));
        let mut groups: Vec<DueGroup> = Vec::new();
        for j in order {
            let job = jobs[j];
            match groups.last_mut() {
                Some(g) if g.due == job.d => {
                    g.processing.push(job.p);
                    g.jobs.push(j);
                }
                _ => groups.push(DueGroup {
                    due: job.d,
                    processing: alloc::vec![job.p],
                    jobs: alloc::vec![j],
                }),
            }
        }
        Ok(JobInstance { jobs, groups, total })
    }

    /// The jobs in input order.
    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    /// Number of jobs `n`.
    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    /// Always false; instances have at least one job.
    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    /// Total processing time `P`.
    pub fn total_processing(&self) -> u64 {
        self.total
    }

    /// Due-date groups sorted by strictly increasing due date.
    pub fn groups(&self) -> &[DueGroup] {
        &self.groups
    }

    /// Number of distinct due dates `D#`.
    pub fn distinct_due_dates(&self) -> usize {
        self.groups.len()
    }

    /// Sum `D` of the distinct due dates. Can exceed `u64` in principle.
    pub fn due_date_sum(&self) -> u128 {
        self.groups.iter().map(|g| g.due as u128).sum()
    }

    /// Largest due date.
    pub fn max_due(&self) -> u64 {
        self.groups.last().map_or(0, |g| g.due)
    }

    /// Job indices in EDD order (due date ascending, ties by index).
    pub fn edd_order(&self) -> impl Iterator<Item = usize> + '_ {
        self.groups.iter().flat_map(|g| g.jobs.iter().copied())
    }
}

/// Solver identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Exhaustive search over early sets.
    BruteForce,
    /// Lawler–Moore dynamic program.
    LawlerMoore,
    /// Sumset / subset-sum scheduler.
    Sumset,
    /// Skewed-convolution scheduler.
    Conv,
}

impl Algorithm {
    /// All solvers, in a fixed order.
    pub const ALL: [Algorithm; 4] = [
        Algorithm::BruteForce,
        Algorithm::LawlerMoore,
        Algorithm::Sumset,
        Algorithm::Conv,
    ];

    /// Short identifier used on the command line and in CSV output.
    pub fn id(self) -> &'static str {
        match self {
            Algorithm::BruteForce => "brute",
            Algorithm::LawlerMoore => "lm",
            Algorithm::Sumset => "sumset",
            Algorithm::Conv => "conv",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Error for unknown algorithm identifiers.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown algorithm identifier")]
pub struct UnknownAlgorithm;

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "brute" => Ok(Algorithm::BruteForce),
            "lm" | "lawler_moore" => Ok(Algorithm::LawlerMoore),
            "sumset" => Ok(Algorithm::Sumset),
            "conv" => Ok(Algorithm::Conv),
            _ => Err(UnknownAlgorithm),
        }
    }
}

/// Outcome of a solver run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleResult {
    /// Total processing time of tardy jobs.
    pub objective: u64,
    /// Early jobs of an optimal EDD schedule (0-based indices, ascending), when
    /// the solver recovers one.
    pub early_set: Option<Vec<usize>>,
    /// The solver that produced the result.
    pub algorithm: Algorithm,
    /// Measured solve time. Zero unless set by a timing wrapper; this crate
    /// has no clock.
    pub wall_time: Duration,
}

impl ScheduleResult {
    pub(crate) fn new(algorithm: Algorithm, objective: u64, early_set: Option<Vec<usize>>) -> Self {
        ScheduleResult {
            objective,
            early_set,
            algorithm,
            wall_time: Duration::ZERO,
        }
    }
}

/// Result of evaluating an early set as an EDD schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EddOutcome {
    /// Whether every early job meets its due date.
    pub feasible: bool,
    /// Total processing time of the jobs not in the early set.
    pub objective: u64,
}

/// An early-set index outside `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("job index {index} out of range for {len} jobs")]
pub struct IndexOutOfRange {
    /// The offending index.
    pub index: usize,
    /// Number of jobs in the instance.
    pub len: usize,
}

/// Schedules `early` (0-based job indices, duplicates ignored) first in EDD
/// order, ties by index, and reports feasibility and the tardy total.
pub fn edd_schedule_from_early_set(
    instance: &JobInstance,
    early: &[usize],
) -> Result<EddOutcome, IndexOutOfRange> {
    let n = instance.len();
    let mut selected = alloc::vec![false; n];
    for &idx in early {
        if idx >= n {
            return Err(IndexOutOfRange { index: idx, len: n });
        }
        selected[idx] = true;
    }
    let mut clock: u64 = 0;
    let mut feasible = true;
    for j in instance.edd_order().filter(|&j| selected[j]) {
        let job = instance.jobs[j];
        clock += job.p;
        if clock > job.d {
            feasible = false;
        }
    }
    Ok(EddOutcome {
        feasible,
        objective: instance.total - clock,
    })
}

/// True iff `result` carries an early set whose EDD schedule is feasible and
/// has exactly `result.objective` tardy processing time.
pub fn verify_result(instance: &JobInstance, result: &ScheduleResult) -> bool {
    let Some(early) = result.early_set.as_deref() else {
        return false;
    };
    matches!(
        edd_schedule_from_early_set(instance, early),
        Ok(EddOutcome { feasible: true, objective }) if objective == result.objective
    )
}
