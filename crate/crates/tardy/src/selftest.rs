//! Differential self-test: every fast routine against its reference on
//! seeded random inputs.

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use tardy_core::baseline::{brute_force, lawler_moore};
use tardy_core::maxmin::{maxmin_conv_fast, maxmin_conv_naive, ExtInt, ExtVec};
use tardy_core::numseq::{subset_sums, subset_sums_naive, sumset, sumset_naive, SumSet};
use tardy_core::sched::{conv_scheduler_with, sumset_scheduler};
use tardy_core::skewed::{maxmin_via_skewed, skewed_conv_naive, SkewedConv};

use crate::gen::{generate, Family, GenParams, Rng};

/// Test suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Sumsets and subset sums.
    Numseq,
    /// `(max,min)`-convolution.
    Maxmin,
    /// Skewed convolution, `⊗` and the `(max,min)` bridge.
    Skewed,
    /// Scheduler agreement on generated instances.
    Schedulers,
}

impl Suite {
    /// Every suite, in run order.
    pub const ALL: [Suite; 4] = [Suite::Numseq, Suite::Maxmin, Suite::Skewed, Suite::Schedulers];

    /// Command-line name.
    pub fn id(self) -> &'static str {
        match self {
            Suite::Numseq => "numseq",
            Suite::Maxmin => "maxmin",
            Suite::Skewed => "skewed",
            Suite::Schedulers => "schedulers",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.id() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Case counts and input sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// Seconds.
    Quick,
    /// Minutes.
    Full,
}

impl Scale {
    fn cases(self) -> u64 {
        match self {
            Scale::Quick => 60,
            Scale::Full => 600,
        }
    }

    fn max_len(self) -> u64 {
        match self {
            Scale::Quick => 160,
            Scale::Full => 1200,
        }
    }

    fn max_jobs(self) -> u64 {
        match self {
            Scale::Quick => 40,
            Scale::Full => 64,
        }
    }
}

/// The routines under test; swap one out to check the suites notice.
#[derive(Clone, Copy, Debug)]
pub struct Kernels {
    /// Sumset.
    pub sumset: fn(&SumSet, &SumSet) -> SumSet,
    /// Subset sums.
    pub subset_sums: fn(&[u64]) -> SumSet,
    /// `(max,min)`-convolution.
    pub maxmin: fn(&[ExtInt], &[ExtInt]) -> ExtVec,
    /// Skewed convolution, also used inside the conv scheduler.
    pub skewed: SkewedConv,
}

impl Default for Kernels {
    fn default() -> Self {
        Kernels {
            sumset,
            subset_sums,
            maxmin: maxmin_conv_fast,
            skewed: SkewedConv::default(),
        }
    }
}

/// First failing case of a suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    /// Case seed.
    pub seed: u64,
    /// What went wrong.
    pub message: String,
    /// How to rerun the case.
    pub replay: String,
}

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    /// The suite.
    pub suite: Suite,
    /// Cases that passed.
    pub passed: u64,
    /// Cases attempted.
    pub run: u64,
    /// The failure that stopped the suite, if any.
    pub failure: Option<Failure>,
}

impl SuiteReport {
    /// True when no case failed.
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "ok" } else { "FAILED" };
        write!(f, "{:<10} {}/{} {status}", self.suite.id(), self.passed, self.run)?;
        if let Some(fail) = &self.failure {
            write!(f, "\n  seed {}: {}\n  replay: {}", fail.seed, fail.message, fail.replay)?;
        }
        Ok(())
    }
}

/// Runs the suites at the given scale, case seeds `base_seed, base_seed+1, …`.
pub fn run_suites(suites: &[Suite], scale: Scale, base_seed: u64, kernels: &Kernels) -> Vec<SuiteReport> {
    suites
        .iter()
        .map(|&suite| {
            let mut report = SuiteReport {
                suite,
                passed: 0,
                run: 0,
                failure: None,
            };
            for seed in base_seed..base_seed + scale.cases() {
                report.run += 1;
                match run_case(suite, scale, seed, kernels) {
                    Ok(()) => report.passed += 1,
                    Err(failure) => {
                        report.failure = Some(failure);
                        break;
                    }
                }
            }
            report
        })
        .collect()
}

/// Runs one case; a panic counts as a failure.
pub fn run_case(suite: Suite, scale: Scale, seed: u64, kernels: &Kernels) -> Result<(), Failure> {
    let outcome = catch_unwind(AssertUnwindSafe(|| match suite {
        Suite::Numseq => numseq_case(scale, seed, kernels),
        Suite::Maxmin => maxmin_case(scale, seed, kernels),
        Suite::Skewed => skewed_case(scale, seed, kernels),
        Suite::Schedulers => scheduler_case(scale, seed, kernels),
    }));
    let message = match outcome {
        Ok(Ok(())) => return Ok(()),
        Ok(Err(msg)) => msg,
        Err(panic) => {
            let text = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            format!("panicked: {text}")
        }
    };
    let scale_flag = match scale {
        Scale::Quick => "--quick",
        Scale::Full => "--full",
    };
    let mut replay = format!("tardy selftest {scale_flag} --suite {suite} --seed {seed}");
    if suite == Suite::Schedulers {
        let p = scheduler_params(scale, seed);
        replay.push_str(&format!(
            "; instance: tardy gen --n {} --pmax {} --dsharp {} --seed {} --family {}",
            p.n, p.pmax, p.dsharp, p.seed, p.family
        ));
    }
    Err(Failure { seed, message, replay })
}

fn random_ext(rng: &mut Rng, len: u64, max: u64, sentinel_pct: u64) -> ExtVec {
    (0..len)
        .map(|_| {
            let roll = rng.below(100);
            if roll < sentinel_pct / 2 {
                ExtInt::NegInf
            } else if roll < sentinel_pct {
                ExtInt::PosInf
            } else {
                ExtInt::Finite(rng.range(0, max) as i64)
            }
        })
        .collect()
}

fn value_range(rng: &mut Rng) -> u64 {
    [3, 30, 1000, 1 << 40][rng.below(4) as usize]
}

fn numseq_case(scale: Scale, seed: u64, k: &Kernels) -> Result<(), String> {
    let mut rng = Rng::new(seed);
    let cap = 8 * scale.max_len();
    let density = [1, 50, 500, 950][rng.below(4) as usize];
    let set = |rng: &mut Rng| {
        let c = rng.range(0, cap) as usize;
        SumSet::from_elements(c, (0..=c).filter(|_| rng.below(1000) < density))
    };
    let (x1, x2) = (set(&mut rng), set(&mut rng));
    if (k.sumset)(&x1, &x2) != sumset_naive(&x1, &x2) {
        return Err(format!("sumset differs (caps {} and {})", x1.cap(), x2.cap()));
    }
    let xs: Vec<u64> = (0..rng.range(0, 16)).map(|_| rng.range(1, 50)).collect();
    if (k.subset_sums)(&xs) != subset_sums_naive(&xs).expect("small input") {
        return Err(format!("subset sums differ on {xs:?}"));
    }
    Ok(())
}

fn maxmin_case(scale: Scale, seed: u64, k: &Kernels) -> Result<(), String> {
    let mut rng = Rng::new(seed);
    let max = value_range(&mut rng);
    let sentinel = rng.range(0, 20);
    let (la, lb) = (rng.range(1, scale.max_len()), rng.range(1, scale.max_len()));
    let a = random_ext(&mut rng, la, max, sentinel);
    let b = random_ext(&mut rng, lb, max, sentinel);
    if (k.maxmin)(&a, &b) != maxmin_conv_naive(&a, &b) {
        return Err(format!("maxmin differs (lengths {} and {}, values ≤ {max})", a.len(), b.len()));
    }
    Ok(())
}

fn skewed_case(scale: Scale, seed: u64, k: &Kernels) -> Result<(), String> {
    let mut rng = Rng::new(seed);
    let max = value_range(&mut rng);
    let sentinel = rng.range(0, 20);
    let len = rng.range(1, scale.max_len());
    let a = random_ext(&mut rng, len, max, sentinel);
    let b = random_ext(&mut rng, len, max, sentinel);
    if k.skewed.convolve(&a, &b) != skewed_conv_naive(&a, &b) {
        return Err(format!("skewed convolution differs (length {len}, values ≤ {max})"));
    }
    let small = random_ext(&mut rng, len, 1000, sentinel);
    let other = random_ext(&mut rng, len, 1000, sentinel);
    if maxmin_via_skewed(&small, &other).ok() != Some(maxmin_conv_naive(&small, &other)) {
        return Err(format!("maxmin via skewed differs (length {len})"));
    }
    Ok(())
}

fn scheduler_params(scale: Scale, seed: u64) -> GenParams {
    let mut rng = Rng::new(seed ^ 0x5eed);
    let n = if seed.is_multiple_of(2) { rng.range(1, 10) } else { rng.range(1, scale.max_jobs()) } as usize;
    let family = Family::ALL[rng.below(3) as usize];
    let dsharp = if family == Family::SubsetSum { 1 } else { rng.range(1, n as u64) as usize };
    GenParams {
        n,
        pmax: rng.range(1, 40),
        dsharp,
        seed,
        family,
    }
}

fn scheduler_case(scale: Scale, seed: u64, k: &Kernels) -> Result<(), String> {
    let inst = generate(&scheduler_params(scale, seed)).expect("valid parameters");
    let lm = lawler_moore(&inst).objective;
    let mut got = vec![
        ("sumset", sumset_scheduler(&inst).objective),
        ("conv", conv_scheduler_with(&inst, &k.skewed).objective),
    ];
    if let Ok(b) = brute_force(&inst) {
        got.push(("brute", b.objective));
    }
    for (name, o) in got {
        if o != lm {
            return Err(format!("{name} = {o} but lm = {lm}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        for report in run_suites(&Suite::ALL, Scale::Quick, 0, &Kernels::default()) {
            assert!(report.ok(), "{report}");
            assert_eq!(report.passed, Scale::Quick.cases());
        }
    }

    #[test]
    fn broken_sparsification_is_caught() {
        let kernels = Kernels {
            skewed: SkewedConv::default().with_broken_sparsification(),
            ..Kernels::default()
        };
        let reports = run_suites(&[Suite::Skewed], Scale::Quick, 0, &kernels);
        let failure = reports[0].failure.as_ref().expect("mutant survives");
        assert!(failure.replay.contains(&format!("--seed {}", failure.seed)));
    }

    #[test]
    fn wrong_maxmin_is_caught() {
        let kernels = Kernels {
            maxmin: |a, b| {
                let mut c = maxmin_conv_naive(a, b);
                c[0] = ExtInt::PosInf;
                c
            },
            ..Kernels::default()
        };
        assert!(!run_suites(&[Suite::Maxmin], Scale::Quick, 0, &kernels)[0].ok());
    }
}
