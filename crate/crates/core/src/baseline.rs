//! Reference solvers: exhaustive search and the Lawler–Moore dynamic program.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::model::{Algorithm, JobInstance, ScheduleResult};

/// Largest instance [`brute_force`] accepts.
pub const BRUTE_FORCE_MAX_JOBS: usize = 25;

/// Instance too large for exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("brute force supports at most {max} jobs, got {n}", max = BRUTE_FORCE_MAX_JOBS)]
pub struct TooManyJobs {
    /// Number of jobs in the rejected instance.
    pub n: usize,
}

/// Enumerates all `2^n` early sets and keeps the best feasible one.
///
/// Among optimal early sets the certificate is the lexicographically smallest
/// ascending index list.
pub fn brute_force(instance: &JobInstance) -> Result<ScheduleResult, TooManyJobs> {
    let n = instance.len();
    if n > BRUTE_FORCE_MAX_JOBS {
        return Err(TooManyJobs { n });
    }
    let jobs = instance.jobs();
    let edd: Vec<usize> = instance.edd_order().collect();
    let mut best_mask: u32 = 0;
    let mut best_early: u64 = 0;
    for mask in 1u32..(1u32 << n) {
        let mut clock = 0u64;
        let mut feasible = true;
        for &j in &edd {
            if mask >> j & 1 == 1 {
                clock += jobs[j].p;
                if clock > jobs[j].d {
                    feasible = false;
                    break;
                }
            }
        }
        if !feasible {
            continue;
        }
        if clock > best_early || (clock == best_early && lex_less(mask, best_mask)) {
            best_early = clock;
            best_mask = mask;
        }
    }
    let early: Vec<usize> = (0..n).filter(|&j| best_mask >> j & 1 == 1).collect();
    Ok(ScheduleResult::new(
        Algorithm::BruteForce,
        instance.total_processing() - best_early,
        Some(early),
    ))
}

/// Compares the ascending index lists encoded by two masks.
fn lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let i = diff.trailing_zeros();
    let above = |m: u32| i < 31 && m >> (i + 1) != 0;
    if a >> i & 1 == 1 {
        // a continues with i, b continues with something larger or stops
        above(b)
    } else {
        !above(a)
    }
}

/// Lawler–Moore DP over achievable early totals, with certificate recovery.
///
/// Jobs are processed in EDD order while maintaining the set `S` of totals
/// that some feasible early set reaches; job `j` adds `{s + p_j ≤ d_j}`. For
/// every job the bits it newly added are kept, one bit per `(job, total)`, so
/// that an optimal early set can be read back.
pub fn lawler_moore(instance: &JobInstance) -> ScheduleResult {
    run_lawler_moore(instance, true)
}

/// Same DP without back-pointers: `O(P)` bits of memory, no certificate.
pub fn lawler_moore_value(instance: &JobInstance) -> ScheduleResult {
    run_lawler_moore(instance, false)
}

fn run_lawler_moore(instance: &JobInstance, certificate: bool) -> ScheduleResult {
    let cap = instance.total_processing().min(instance.max_due()) as usize;
    let mut reach = BitSet::new(cap + 1);
    reach.insert(0);
    let words = reach.words().len();
    let order: Vec<usize> = instance.edd_order().collect();
    let mut added: Vec<u64> = if certificate {
        vec![0; words * order.len()]
    } else {
        Vec::new()
    };

    for (pos, &j) in order.iter().enumerate() {
        let job = instance.jobs()[j];
        let p = job.p as usize;
        let limit = job.d.min(cap as u64) as usize;
        let slot = certificate.then(|| &mut added[pos * words..(pos + 1) * words]);
        reach.or_shifted(p, limit, slot);
    }

    let best = reach.max().unwrap_or(0);
    let early_set = certificate.then(|| {
        let mut early = Vec::new();
        let mut s = best;
        for (pos, &j) in order.iter().enumerate().rev() {
            let row = &added[pos * words..(pos + 1) * words];
            if s > 0 && row[s / 64] >> (s % 64) & 1 == 1 {
                early.push(j);
                s -= instance.jobs()[j].p as usize;
            }
        }
        debug_assert_eq!(s, 0);
        early.sort_unstable();
        early
    });
    ScheduleResult::new(
        Algorithm::LawlerMoore,
        instance.total_processing() - best as u64,
        early_set,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{verify_result, Job};

    fn inst(jobs: &[(u64, u64)]) -> JobInstance {
        JobInstance::new(jobs.iter().map(|&(p, d)| Job::new(p, d)).collect()).unwrap()
    }

    #[test]
    fn brute_force_examples() {
        let i = inst(&[(2, 2), (2, 2), (3, 7)]);
        let r = brute_force(&i).unwrap();
        assert_eq!(r.objective, 2);
        assert_eq!(r.early_set.as_deref(), Some(&[0usize, 2][..]));
        assert!(verify_result(&i, &r));
        assert_eq!(brute_force(&inst(&[(5, 9)])).unwrap().objective, 0);
        assert_eq!(brute_force(&inst(&[(5, 3)])).unwrap().objective, 5);
        let big = inst(&[(1, 1); 26]);
        assert_eq!(brute_force(&big), Err(TooManyJobs { n: 26 }));
    }

    #[test]
    fn lawler_moore_examples() {
        let i = inst(&[(2, 2), (2, 2), (3, 7)]);
        let r = lawler_moore(&i);
        assert_eq!(r.objective, 2);
        assert!(verify_result(&i, &r));
        assert_eq!(lawler_moore(&inst(&[(3, 9), (5, 9), (7, 9)])).objective, 7);
        let r = lawler_moore(&inst(&[(1, 1)]));
        assert_eq!(r.objective, 0);
        assert_eq!(r.early_set, Some(vec![0]));
        assert_eq!(lawler_moore_value(&i).early_set, None);
    }

    #[test]
    fn lex_order_of_masks() {
        assert!(lex_less(0b011, 0b101));
        assert!(lex_less(0b001, 0b101));
        assert!(!lex_less(0b101, 0b001));
        assert!(lex_less(0b100, 0b1000));
        assert!(!lex_less(0b111, 0b111));
    }

    #[test]
    fn lexicographically_smallest_certificate() {
        // {0} and {1} both optimal (one unit job of two fits)
        let i = inst(&[(1, 1), (1, 1)]);
        assert_eq!(brute_force(&i).unwrap().early_set, Some(vec![0]));
    }
}
