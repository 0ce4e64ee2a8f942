//! Timed solver invocation.

use std::time::Instant;

use tardy_core::model::{JobInstance, ScheduleResult};
use tardy_core::sched::{solve, CostModel, SolveError, SolverChoice};

/// Runs a solver and records its wall time; parsing and I/O are not timed.
pub fn timed_solve(
    instance: &JobInstance,
    choice: SolverChoice,
    costs: &CostModel,
) -> Result<ScheduleResult, SolveError> {
    let start = Instant::now();
    let mut result = solve(instance, choice, costs)?;
    result.wall_time = start.elapsed();
    Ok(result)
}

/// Parses `brute|lm|sumset|conv|auto`.
pub fn parse_choice(s: &str) -> Option<SolverChoice> {
    if s == "auto" {
        return Some(SolverChoice::Auto);
    }
    s.parse().ok().map(SolverChoice::Fixed)
}
