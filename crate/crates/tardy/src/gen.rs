//! Seeded instance generators.
//!
//! The random source is SplitMix64 (`rand_xoshiro::SplitMix64`) seeded with
//! the raw 64-bit seed. Bounded draws use rejection sampling on the full
//! 64-bit output: for a range of size `s`, outputs at or above
//! `2^64 - (2^64 mod s)` are redrawn and the rest are reduced modulo `s`.
//! Both steps use only wrapping 64-bit integer arithmetic, so a seed
//! produces the same instance on every platform.

use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use tardy_core::model::{Job, JobInstance, MAX_MAGNITUDE};

/// Portable bounded draws over SplitMix64.
#[derive(Clone, Debug)]
pub struct Rng(SplitMix64);

impl Rng {
    /// Generator for `seed`.
    pub fn new(seed: u64) -> Self {
        Rng(SplitMix64::seed_from_u64(seed))
    }

    /// Next raw output.
    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..bound`. Panics if `bound == 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let reject_from = bound.wrapping_neg() % bound; // 2^64 mod bound
        loop {
            let x = self.next_u64();
            if x >= reject_from {
                return x % bound;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi);
        match (hi - lo).checked_add(1) {
            Some(size) => lo + self.below(size),
            None => self.next_u64(),
        }
    }

    /// Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// `count` distinct values from `lo..=hi`, ascending (Floyd's algorithm).
    pub fn distinct(&mut self, count: usize, lo: u64, hi: u64) -> Vec<u64> {
        let size = hi - lo + 1;
        assert!(count as u64 <= size);
        let mut chosen = std::collections::BTreeSet::new();
        for top in size - count as u64..size {
            let t = self.range(0, top);
            if !chosen.insert(lo + t) {
                chosen.insert(lo + top);
            }
        }
        chosen.into_iter().collect()
    }
}

/// Instance families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Processing times uniform in `1..=pmax`; `dsharp` distinct due dates
    /// drawn uniformly from `0..=P`, each used at least once.
    Uniform,
    /// One common due date uniform in `1..=P` (a subset-sum instance).
    SubsetSum,
    /// Jobs in random order cut into `dsharp` consecutive blocks; a block's
    /// due date sits just below the prefix sum at its end.
    Tight,
}

impl Family {
    /// Every family.
    pub const ALL: [Family; 3] = [Family::Uniform, Family::SubsetSum, Family::Tight];

    /// Command-line name.
    pub fn id(self) -> &'static str {
        match self {
            Family::Uniform => "uniform",
            Family::SubsetSum => "subsetsum",
            Family::Tight => "tight",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Unknown family name.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown family `{0}` (expected uniform, subsetsum or tight)")]
pub struct UnknownFamily(pub String);

impl FromStr for Family {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| UnknownFamily(s.to_owned()))
    }
}

/// Generator parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    /// Number of jobs.
    pub n: usize,
    /// Largest processing time.
    pub pmax: u64,
    /// Number of distinct due dates.
    pub dsharp: usize,
    /// PRNG seed.
    pub seed: u64,
    /// Instance family.
    pub family: Family,
}

/// Rejected generator parameters.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    /// `n = 0`.
    #[error("n must be at least 1")]
    NoJobs,
    /// `pmax = 0`.
    #[error("pmax must be at least 1")]
    ZeroPmax,
    /// `dsharp` outside `1..=n`.
    #[error("dsharp must lie in 1..=n (got dsharp {dsharp}, n {n})")]
    DSharpRange {
        /// Requested distinct due dates.
        dsharp: usize,
        /// Job count.
        n: usize,
    },
    /// The subset-sum family has exactly one due date.
    #[error("family subsetsum has a single due date; use --dsharp 1")]
    SubsetSumDSharp,
    /// `n · pmax` could exceed 2^62.
    #[error("n * pmax exceeds 2^62")]
    TooLarge,
}

impl GenParams {
    /// Checks the parameter preconditions.
    pub fn validate(&self) -> Result<(), GenError> {
        if self.n == 0 {
            return Err(GenError::NoJobs);
        }
        if self.pmax == 0 {
            return Err(GenError::ZeroPmax);
        }
        if self.dsharp == 0 || self.dsharp > self.n {
            return Err(GenError::DSharpRange {
                dsharp: self.dsharp,
                n: self.n,
            });
        }
        if self.family == Family::SubsetSum && self.dsharp != 1 {
            return Err(GenError::SubsetSumDSharp);
        }
        match (self.n as u64).checked_mul(self.pmax) {
            Some(total) if total <= MAX_MAGNITUDE => Ok(()),
            _ => Err(GenError::TooLarge),
        }
    }
}

/// Generates an instance; identical parameters give identical instances.
pub fn generate(params: &GenParams) -> Result<JobInstance, GenError> {
    params.validate()?;
    let GenParams {
        n,
        pmax,
        dsharp,
        seed,
        family,
    } = *params;
    let mut rng = Rng::new(seed);
    let p: Vec<u64> = (0..n).map(|_| rng.range(1, pmax)).collect();
    let total: u64 = p.iter().sum();
    let d: Vec<u64> = match family {
        Family::Uniform => {
            let dues = rng.distinct(dsharp, 0, total);
            let mut slots: Vec<usize> = (0..n).map(|j| if j < dsharp { j } else { rng.below(dsharp as u64) as usize }).collect();
            rng.shuffle(&mut slots);
            slots.into_iter().map(|s| dues[s]).collect()
        }
        Family::SubsetSum => vec![rng.range(1, total); n],
        Family::Tight => {
            let mut order: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut order);
            let mut d = vec![0; n];
            let mut prefix = 0;
            let mut previous: Option<u64> = None;
            let mut start = 0;
            for block in 0..dsharp {
                let end = n * (block + 1) / dsharp;
                prefix += order[start..end].iter().map(|&j| p[j]).sum::<u64>();
                let jitter = rng.range(0, pmax);
                let mut due = prefix.saturating_sub(jitter);
                if let Some(prev) = previous {
                    due = due.max(prev + 1);
                }
                for &j in &order[start..end] {
                    d[j] = due;
                }
                previous = Some(due);
                start = end;
            }
            d
        }
    };
    let jobs = p.into_iter().zip(d).map(|(p, d)| Job::new(p, d)).collect();
    Ok(JobInstance::new(jobs).expect("generated instances are valid"))
}
