//! The sumset scheduler, the skewed-convolution scheduler and a dispatcher.
//!
//! Both schedulers work on the due-date groups `J_1, …, J_{D#}` of an
//! instance and only ever need the subset sums of each group's processing
//! times, since any subset of one group runs back to back in an EDD schedule.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::baseline::{brute_force, lawler_moore, lawler_moore_value, TooManyJobs};
use crate::maxmin::{ExtInt, ExtVec};
use crate::model::{Algorithm, JobInstance, ScheduleResult};
use crate::numseq::{subset_sums, sumset, SumSet};
use crate::skewed::SkewedConv;

/// Early totals reachable after each due-date group.
///
/// `result[i]` holds every `x` such that early sets `E_1 ⊆ J_1, …, E_{i+1} ⊆ J_{i+1}`
/// have total `x` and every prefix total respects its group's due date.
pub fn sumset_prefix_sets(instance: &JobInstance) -> Vec<SumSet> {
    let p = instance.total_processing();
    let mut reach = SumSet::zero();
    let mut out = Vec::with_capacity(instance.distinct_due_dates());
    for group in instance.groups() {
        let limit = group.due.min(p) as usize;
        let mut own = subset_sums(&group.processing);
        own.truncate(limit);
        reach = sumset(&reach, &own);
        reach.truncate(limit);
        out.push(reach.clone());
    }
    out
}

/// Merges the groups' subset sums one due date at a time, pruning totals that
/// overshoot the current due date. Objective only.
pub fn sumset_scheduler(instance: &JobInstance) -> ScheduleResult {
    let last = sumset_prefix_sets(instance)
        .pop()
        .expect("instances have at least one group");
    let best = last.max().expect("0 is always reachable") as u64;
    ScheduleResult::new(Algorithm::Sumset, instance.total_processing() - best, None)
}

/// Per early total `x`, the latest start time from which a subset of the
/// covered groups with total exactly `x` can run early in EDD order; `-∞`
/// where no subset qualifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MVector(pub ExtVec);

impl MVector {
    /// Entries indexed by early total.
    pub fn entries(&self) -> &ExtVec {
        &self.0
    }

    /// Largest `x` whose latest start is at least 0.
    pub fn best_total(&self) -> Option<usize> {
        self.0.iter().rposition(|&v| v >= ExtInt::Finite(0))
    }
}

/// M-vector of a single group: `due - x` when `x` is a subset sum of the
/// group not exceeding `due`, else `-∞`. Length `total + 1`.
pub fn singleton_m(processing: &[u64], due: u64, total: u64) -> MVector {
    let sums = subset_sums(processing);
    let len = total as usize + 1;
    let reach = sums.cap().min(len - 1).min(due.min(total) as usize);
    let mut entries = vec![ExtInt::NegInf; len];
    for x in sums.iter().take_while(|&x| x <= reach) {
        entries[x] = ExtInt::Finite(due as i64 - x as i64);
    }
    MVector(ExtVec::new(entries))
}

/// Neutral element of `⊗`: `+∞` at 0, `-∞` elsewhere.
pub fn identity_m(len: usize) -> MVector {
    let mut e = ExtVec::filled(len.max(1), ExtInt::NegInf);
    e[0] = ExtInt::PosInf;
    MVector(e)
}

/// `M(I)` for a consecutive range of groups, combined pairwise with `⊗`.
/// Length `P + 1`.
pub fn group_m_vector(instance: &JobInstance, range: Range<usize>) -> MVector {
    group_m_vector_with(instance, range, &SkewedConv::default())
}

/// [`group_m_vector`] with explicit skewed-convolution parameters.
pub fn group_m_vector_with(instance: &JobInstance, range: Range<usize>, conv: &SkewedConv) -> MVector {
    let p = instance.total_processing();
    let len = p as usize + 1;
    let mut layer: Vec<MVector> = instance.groups()[range]
        .iter()
        .map(|g| singleton_m(&g.processing, g.due, p))
        .collect();
    if layer.is_empty() {
        return identity_m(len);
    }
    while layer.len() > 1 {
        layer = pairwise(layer, |x, y| {
            let mut c = conv.combine(&x.0, &y.0).into_inner();
            c.truncate(len);
            MVector(ExtVec::new(c))
        });
    }
    layer.pop().expect("non-empty")
}

/// Combines neighbours; an odd last element passes through unchanged.
fn pairwise(layer: Vec<MVector>, mut combine: impl FnMut(&MVector, &MVector) -> MVector) -> Vec<MVector> {
    let mut next = Vec::with_capacity(layer.len().div_ceil(2));
    let mut it = layer.chunks(2);
    for pair in &mut it {
        match pair {
            [x, y] => next.push(combine(x, y)),
            [x] => next.push(x.clone()),
            _ => unreachable!(),
        }
    }
    next
}

/// Skewed-convolution scheduler with `δ = 3/4`.
pub fn conv_scheduler(instance: &JobInstance) -> ScheduleResult {
    conv_scheduler_with(instance, &SkewedConv::default())
}

/// Skewed-convolution scheduler.
///
/// Builds one M-vector per due-date group, pads the list to a power of two
/// with identity vectors and combines neighbours with `⊗` until one vector
/// remains; the answer is `P - x` for the largest `x` with a start time
/// `≥ 0`. Between rounds every vector is cut to its support:
///
///  * due dates above `P` never bind and are lowered to `P`;
///  * negative start times stay negative under `⊗` (both operands only
///    decrease), so they are replaced by `-∞`;
///  * trailing `-∞` entries are dropped (the combine pads with `-∞`).
pub fn conv_scheduler_with(instance: &JobInstance, conv: &SkewedConv) -> ScheduleResult {
    let p = instance.total_processing();
    let len = p as usize + 1;
    let mut layer: Vec<MVector> = instance
        .groups()
        .iter()
        .map(|g| {
            let due = g.due.min(p);
            let mut m = singleton_m(&g.processing, due, p);
            trim(&mut m);
            m
        })
        .collect();
    let padded = layer.len().next_power_of_two();
    layer.resize(padded, identity_m(1));

    while layer.len() > 1 {
        layer = pairwise(layer, |x, y| {
            let mut c = conv.combine(&x.0, &y.0).into_inner();
            c.truncate(len);
            for v in c.iter_mut() {
                if *v < ExtInt::Finite(0) {
                    *v = ExtInt::NegInf;
                }
            }
            let mut m = MVector(ExtVec::new(c));
            trim(&mut m);
            m
        });
    }
    let best = layer[0].best_total().expect("the empty early set starts at the first due date");
    ScheduleResult::new(Algorithm::Conv, p - best as u64, None)
}

fn trim(m: &mut MVector) {
    let keep = m.0.iter().rposition(|&v| v != ExtInt::NegInf).map_or(1, |i| i + 1);
    if keep < m.0.len() {
        let mut v = core::mem::take(&mut m.0).into_inner();
        v.truncate(keep);
        m.0 = ExtVec::new(v);
    }
}

/// Which solver to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverChoice {
    /// Run this solver.
    Fixed(Algorithm),
    /// Pick by the cost model.
    Auto,
}

/// Multiplicative calibration constants for the predicted running times
/// `P·n` (Lawler–Moore), `min(P·D#, P + D)` (sumset) and `P^{7/4}` (conv).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostModel {
    /// Constant for Lawler–Moore.
    pub lawler_moore: f64,
    /// Constant for the sumset scheduler.
    pub sumset: f64,
    /// Constant for the skewed-convolution scheduler.
    pub conv: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            lawler_moore: 1.0,
            sumset: 1.0,
            conv: 1.0,
        }
    }
}

impl CostModel {
    /// Predicted costs, in tie-breaking order (sumset, Lawler–Moore, conv).
    pub fn predict(&self, instance: &JobInstance) -> [(Algorithm, f64); 3] {
        let p = instance.total_processing() as f64;
        let n = instance.len() as f64;
        let groups = instance.distinct_due_dates() as f64;
        let d = instance.due_date_sum() as f64;
        [
            (Algorithm::Sumset, self.sumset * (p * groups).min(p + d)),
            (Algorithm::LawlerMoore, self.lawler_moore * p * n),
            (Algorithm::Conv, self.conv * libm::pow(p, 1.75)),
        ]
    }

    /// The cheapest predicted solver; earlier entries win ties.
    pub fn choose(&self, instance: &JobInstance) -> Algorithm {
        let mut best = (Algorithm::Sumset, f64::INFINITY);
        for (alg, cost) in self.predict(instance) {
            if cost < best.1 {
                best = (alg, cost);
            }
        }
        best.0
    }
}

/// Solver precondition failures.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    /// Exhaustive search on too many jobs.
    #[error(transparent)]
    TooManyJobs(#[from] TooManyJobs),
}

/// Back-pointer budget for Lawler–Moore certificates, in bits.
const CERTIFICATE_BITS: u128 = 1 << 31;

/// Runs the chosen solver. `wall_time` is left at zero.
pub fn solve(
    instance: &JobInstance,
    choice: SolverChoice,
    costs: &CostModel,
) -> Result<ScheduleResult, SolveError> {
    let alg = match choice {
        SolverChoice::Fixed(a) => a,
        SolverChoice::Auto => costs.choose(instance),
    };
    Ok(match alg {
        Algorithm::BruteForce => brute_force(instance)?,
        Algorithm::LawlerMoore => {
            let cap = instance.total_processing().min(instance.max_due()) as u128 + 1;
            if cap * instance.len() as u128 <= CERTIFICATE_BITS {
                lawler_moore(instance)
            } else {
                lawler_moore_value(instance)
            }
        }
        Algorithm::Sumset => sumset_scheduler(instance),
        Algorithm::Conv => conv_scheduler(instance),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;
    use ExtInt::{Finite as F, NegInf as N};

    fn inst(jobs: &[(u64, u64)]) -> JobInstance {
        JobInstance::new(jobs.iter().map(|&(p, d)| Job::new(p, d)).collect()).unwrap()
    }

    #[test]
    fn sumset_scheduler_examples() {
        let i = inst(&[(2, 2), (2, 2), (3, 7)]);
        let sets = sumset_prefix_sets(&i);
        assert_eq!(sets[0].iter().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(sets[1].iter().collect::<Vec<_>>(), vec![0, 2, 3, 5]);
        assert_eq!(sumset_scheduler(&i).objective, 2);
        assert_eq!(sumset_scheduler(&inst(&[(3, 9), (5, 9), (7, 9)])).objective, 7);
        assert_eq!(sumset_scheduler(&inst(&[(5, 3)])).objective, 5);
    }

    #[test]
    fn singleton_examples() {
        assert_eq!(
            singleton_m(&[2, 3], 4, 5).0,
            ExtVec::new(vec![F(4), N, F(2), F(1), N, N])
        );
        assert_eq!(singleton_m(&[], 6, 3).0, ExtVec::new(vec![F(6), N, N, N]));
        assert_eq!(singleton_m(&[1], 0, 1).0, ExtVec::new(vec![F(0), N]));
    }

    #[test]
    fn conv_scheduler_examples() {
        let i = inst(&[(2, 2), (2, 2), (3, 7)]);
        assert_eq!(conv_scheduler(&i).objective, 2);
        let m = group_m_vector(&i, 0..2);
        assert_eq!(m.best_total(), Some(5));
        let single = inst(&[(3, 9), (5, 9), (7, 9)]);
        assert_eq!(conv_scheduler(&single).objective, sumset_scheduler(&single).objective);
        assert_eq!(conv_scheduler(&inst(&[(5, 3)])).objective, 5);
    }

    #[test]
    fn three_groups_need_identity_padding() {
        let i = inst(&[(3, 3), (2, 4), (4, 9), (1, 1)]);
        assert_eq!(i.distinct_due_dates(), 4);
        let j = inst(&[(3, 3), (2, 4), (4, 9)]);
        assert_eq!(conv_scheduler(&j).objective, lawler_moore(&j).objective);
        assert_eq!(conv_scheduler(&i).objective, lawler_moore(&i).objective);
    }

    #[test]
    fn auto_choice() {
        let costs = CostModel::default();
        assert_eq!(costs.choose(&inst(&[(3, 9), (5, 9), (7, 9)])), Algorithm::Sumset);
        assert_eq!(costs.choose(&inst(&[(5, 9)])), Algorithm::Sumset);
        let unit: Vec<(u64, u64)> = (0..50).map(|j| (1, j)).collect();
        // P^{7/4} = 935 beats min(P·D#, P + D) = 1275 and P·n = 2500
        assert_eq!(costs.choose(&inst(&unit)), Algorithm::Conv);
        let tilted = CostModel {
            conv: 10.0,
            ..costs
        };
        assert_eq!(tilted.choose(&inst(&unit)), Algorithm::Sumset);
    }

    #[test]
    fn solve_dispatches() {
        let i = inst(&[(2, 2), (2, 2), (3, 7)]);
        let costs = CostModel::default();
        for alg in Algorithm::ALL {
            let r = solve(&i, SolverChoice::Fixed(alg), &costs).unwrap();
            assert_eq!((r.algorithm, r.objective), (alg, 2));
        }
        let big = inst(&[(1, 100); 30]);
        assert!(matches!(
            solve(&big, SolverChoice::Fixed(Algorithm::BruteForce), &costs),
            Err(SolveError::TooManyJobs(_))
        ));
        assert_eq!(solve(&big, SolverChoice::Auto, &costs).unwrap().objective, 0);
    }
}
