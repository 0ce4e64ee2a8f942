//! `(max,min)`-skewed convolution `C[k] = max_{i+j=k} min(A[i], B[j] + k)`.
//!
//! The fast algorithm works on coarsened copies of the inputs. At level `ℓ`
//! the operands are `A^ℓ = ⌊A / 2^ℓ⌋`, `B^ℓ = ⌊B / 2^ℓ⌋` and the target is
//!
//! ```text
//! C^ℓ[k] = max_{i+j=k} min(A^ℓ[i], B^ℓ[j] + ⌊k / 2^ℓ⌋).
//! ```
//!
//! Once `2^ℓ > 2n` the shift term vanishes and `C^ℓ` is a plain
//! `(max,min)`-convolution. Going down one level, `2·C^{ℓ+1}` is within 2 of
//! `C^ℓ` from below, so each level only has to decide which of three candidate
//! values is attained. That refinement splits every output into the value
//! contributed by the `A` side (`L`) and by the `B` side (`R`):
//!
//!  * *light* outputs, whose 3-wide value window holds few entries, are
//!    settled by scanning those entries;
//!  * entries with few neighbours within ±2 can then only matter for light
//!    outputs and are dropped (*sparsification*);
//!  * the few distinct surviving values each get one `(max,min)`-convolution
//!    of an indicator vector against the other operand, settling the *heavy*
//!    outputs.

use alloc::vec;
use alloc::vec::Vec;

use crate::maxmin::{maxmin_conv_fast, ExtInt, ExtVec};

/// Reference: the defining double loop.
///
/// Operands may differ in length; the output has `|A| + |B| - 1` entries.
pub fn skewed_conv_naive(a: &[ExtInt], b: &[ExtInt]) -> ExtVec {
    skewed_level_naive(a, b, 0)
}

/// `C^ℓ` by its definition, with the operands coarsened here.
pub fn skewed_level_naive(a: &[ExtInt], b: &[ExtInt], level: u32) -> ExtVec {
    assert!(!a.is_empty() && !b.is_empty(), "empty convolution operand");
    let a = level_vector(a, level);
    let b = level_vector(b, level);
    let mut out = vec![ExtInt::NegInf; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == ExtInt::NegInf {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let k = i + j;
            let m = x.min(y.shift(level_shift(k, level)));
            if m > out[k] {
                out[k] = m;
            }
        }
    }
    ExtVec::new(out)
}

/// `⌊A / 2^ℓ⌋` componentwise (toward `-∞`); sentinels unchanged.
pub fn level_vector(a: &[ExtInt], level: u32) -> ExtVec {
    a.iter().map(|x| x.floor_div_pow2(level)).collect()
}

/// `⌊k / 2^ℓ⌋`.
#[inline]
pub fn level_shift(k: usize, level: u32) -> i64 {
    if level >= usize::BITS {
        0
    } else {
        (k >> level) as i64
    }
}

/// Smallest level whose shift term is zero for every output index `< out_len`.
pub fn top_level(out_len: usize) -> u32 {
    usize::BITS - (out_len.saturating_sub(1)).leading_zeros()
}

/// Inputs of one refinement step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelState {
    /// The level `ℓ`.
    pub level: u32,
    /// `A^ℓ`.
    pub a: ExtVec,
    /// `B^ℓ`.
    pub b: ExtVec,
    /// A good approximation `D^ℓ` of `C^ℓ`: `C^ℓ - 2 ≤ D^ℓ ≤ C^ℓ` on finite
    /// entries, and equal to `C^ℓ` on sentinel entries.
    pub approx: ExtVec,
}

/// A refinement input that cannot be a good approximation.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RefineError {
    /// Vector lengths do not fit together.
    #[error("approximation has length {got}, expected {expected}")]
    LengthMismatch {
        /// Required length `|A| + |B| - 1`.
        expected: usize,
        /// Supplied length.
        got: usize,
    },
    /// No value in `[D[k], D[k] + 2]` is attained at output `k`.
    #[error("approximation at index {index} is not within 2 below the exact value")]
    NotGoodApproximation {
        /// The output index.
        index: usize,
    },
    /// One operand is empty.
    #[error("empty convolution operand")]
    Empty,
}

/// Fast skewed convolution with a tunable light/heavy exponent `δ`.
///
/// An output is light when its value window holds at most `⌈(n+1)^δ⌉`
/// entries, `n + 1` being the longer operand length. `δ = 3/4` balances the
/// light scans against the heavy convolutions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkewedConv {
    delta: f64,
    broken_sparsification: bool,
}

impl Default for SkewedConv {
    fn default() -> Self {
        SkewedConv::new(0.75)
    }
}

impl SkewedConv {
    /// Panics unless `0 < delta < 1`.
    pub fn new(delta: f64) -> Self {
        assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
        SkewedConv {
            delta,
            broken_sparsification: false,
        }
    }

    /// Deliberately wrong variant whose sparsification discards every value,
    /// leaving heavy outputs unresolved. Exists to check that test suites
    /// notice.
    #[doc(hidden)]
    pub fn with_broken_sparsification(mut self) -> Self {
        self.broken_sparsification = true;
        self
    }

    /// The exponent `δ`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Light/heavy threshold `⌈len^δ⌉` for operands of length `len`.
    pub fn threshold(&self, len: usize) -> usize {
        libm::ceil(libm::pow(len as f64, self.delta)) as usize
    }

    /// Skewed convolution; equals [`skewed_conv_naive`].
    pub fn convolve(&self, a: &[ExtInt], b: &[ExtInt]) -> ExtVec {
        self.run_levels(a, b, |_, _| {})
    }

    /// Every level's exact vector, `result[ℓ] = C^ℓ` for `ℓ = 0..=top`.
    pub fn levels(&self, a: &[ExtInt], b: &[ExtInt]) -> Vec<ExtVec> {
        let mut levels = Vec::new();
        self.run_levels(a, b, |_, c| levels.push(c.clone()));
        levels.reverse();
        levels
    }

    fn run_levels(&self, a: &[ExtInt], b: &[ExtInt], mut visit: impl FnMut(u32, &ExtVec)) -> ExtVec {
        assert!(!a.is_empty() && !b.is_empty(), "empty convolution operand");
        let out_len = a.len() + b.len() - 1;
        let top = top_level(out_len);
        let mut current = maxmin_conv_fast(&level_vector(a, top), &level_vector(b, top));
        visit(top, &current);
        for level in (0..top).rev() {
            let approx: ExtVec = current.iter().map(|c| c.checked_scale(2).expect("value overflow")).collect();
            let next = self.refine(&level_vector(a, level), &level_vector(b, level), &approx, level);
            debug_assert!(
                next.iter().zip(approx.iter()).all(|(c, d)| is_within_window(*c, *d)),
                "2·C^(ℓ+1) is not a good approximation of C^ℓ at level {level}"
            );
            current = next;
            visit(level, &current);
        }
        current
    }

    /// Exact `C^ℓ` from `A^ℓ`, `B^ℓ` and a good approximation `D^ℓ`.
    pub fn refine_level(&self, state: &LevelState) -> Result<ExtVec, RefineError> {
        let (l, r) = self.left_right(state)?;
        let out: ExtVec = l.iter().zip(r.iter()).map(|(&x, &y)| x.max(y)).collect();
        for (index, (&c, &d)) in out.iter().zip(state.approx.iter()).enumerate() {
            if !is_within_window(c, d) {
                return Err(RefineError::NotGoodApproximation { index });
            }
        }
        Ok(out)
    }

    /// The two halves of a refinement: `L^ℓ[k]` is the largest `A^ℓ[i]` in
    /// `[D[k], D[k]+2]` that is the minimum of its pair, `R^ℓ[k]` likewise for
    /// `B^ℓ[j] + ⌊k/2^ℓ⌋`. Entries with a sentinel `D[k]` carry `D[k]` in both.
    pub fn left_right(&self, state: &LevelState) -> Result<(ExtVec, ExtVec), RefineError> {
        let LevelState { level, a, b, approx } = state;
        if a.is_empty() || b.is_empty() {
            return Err(RefineError::Empty);
        }
        let expected = a.len() + b.len() - 1;
        if approx.len() != expected {
            return Err(RefineError::LengthMismatch {
                expected,
                got: approx.len(),
            });
        }
        let t = self.threshold(a.len().max(b.len()));
        let level = *level;
        let broken = self.broken_sparsification;
        let left = side_values(a, b, approx, t, broken, |_| 0, |k| level_shift(k, level));
        let right = side_values(b, a, approx, t, broken, |k| level_shift(k, level), |_| 0);
        Ok((left, right))
    }

    fn refine(&self, a: &[ExtInt], b: &[ExtInt], approx: &[ExtInt], level: u32) -> ExtVec {
        let t = self.threshold(a.len().max(b.len()));
        let broken = self.broken_sparsification;
        let left = side_values(a, b, approx, t, broken, |_| 0, |k| level_shift(k, level));
        let right = side_values(b, a, approx, t, broken, |k| level_shift(k, level), |_| 0);
        left.iter().zip(right.iter()).map(|(&x, &y)| x.max(y)).collect()
    }

    /// `A ⊗ B` with `C[x] = max_{x1+x2=x} min(A[x1], B[x2] - x1)`, through one
    /// skewed convolution of `A0[x] = B[x] + x` and `B0[x] = A[x]`, then
    /// `C[x] = C0[x] - x`. The shorter operand is padded with `-∞`.
    pub fn combine(&self, a: &[ExtInt], b: &[ExtInt]) -> ExtVec {
        assert!(!a.is_empty() && !b.is_empty(), "empty convolution operand");
        let len = a.len().max(b.len());
        let pad = |v: &[ExtInt], i: usize| v.get(i).copied().unwrap_or(ExtInt::NegInf);
        let a0: ExtVec = (0..len).map(|x| pad(b, x).shift(x as i64)).collect();
        let b0: ExtVec = (0..len).map(|x| pad(a, x)).collect();
        let c0 = self.convolve(&a0, &b0);
        c0.iter()
            .enumerate()
            .map(|(x, c)| c.shift(-(x as i64)))
            .collect()
    }
}

/// `C` finite and within `[D, D+2]`, or both the same sentinel.
fn is_within_window(c: ExtInt, d: ExtInt) -> bool {
    match (c, d) {
        (ExtInt::Finite(c), ExtInt::Finite(d)) => d <= c && c <= d + 2,
        (c, d) => c == d,
    }
}

/// Side maxima for one operand.
///
/// `own` is the side whose values are candidates (`A` for `L`, `B` for `R`).
/// A candidate `own[i]` at output `k` has value `own[i] + offset(k)` and is
/// admissible when that value is at most `partner[k-i] + slack(k)` and lies in
/// `[D[k], D[k]+2]`.
fn side_values(
    own: &[ExtInt],
    partner: &[ExtInt],
    approx: &[ExtInt],
    threshold: usize,
    broken: bool,
    offset: impl Fn(usize) -> i64,
    slack: impl Fn(usize) -> i64,
) -> ExtVec {
    let mut best: Vec<ExtInt> = approx
        .iter()
        .map(|&d| if d.is_finite() { ExtInt::NegInf } else { d })
        .collect();

    let mut sorted: Vec<(i64, usize)> = own
        .iter()
        .enumerate()
        .filter_map(|(i, x)| x.finite().map(|v| (v, i)))
        .collect();
    sorted.sort_unstable();
    let lower = |v: i64| sorted.partition_point(|e| e.0 < v);
    let upper = |v: i64| sorted.partition_point(|e| e.0 <= v);

    // Light outputs: scan the window directly.
    let mut heavy: Vec<usize> = Vec::new();
    for (k, &d) in approx.iter().enumerate() {
        let ExtInt::Finite(d) = d else { continue };
        let (o, e) = (offset(k), slack(k));
        let window = lower(d - o)..upper(d + 2 - o);
        if window.len() > threshold {
            heavy.push(k);
            continue;
        }
        for &(x, i) in sorted[window].iter().rev() {
            let Some(j) = k.checked_sub(i) else { continue };
            if j < partner.len() && partner[j].shift(e) >= ExtInt::Finite(x + o) {
                best[k] = ExtInt::Finite(x + o);
                break;
            }
        }
    }
    if heavy.is_empty() {
        return ExtVec::new(best);
    }

    // Sparsification: keep values with more than `threshold` entries within ±2.
    let mut survivors: Vec<(i64, core::ops::Range<usize>)> = Vec::new();
    let mut run = 0;
    while run < sorted.len() {
        let v = sorted[run].0;
        let run_end = upper(v);
        if !broken && upper(v + 2) - lower(v - 2) > threshold {
            survivors.push((v, run..run_end));
        }
        run = run_end;
    }
    debug_assert!(
        survivors.len() * threshold <= 25 * own.len(),
        "{} distinct values survive sparsification (threshold {threshold}, length {})",
        survivors.len(),
        own.len()
    );

    // Heavy outputs: one indicator convolution per requested surviving value.
    let mut requests: Vec<Vec<usize>> = vec![Vec::new(); survivors.len()];
    for &k in &heavy {
        let ExtInt::Finite(d) = approx[k] else { unreachable!() };
        let o = offset(k);
        let first = survivors.partition_point(|s| s.0 < d - o);
        for (s, (v, _)) in survivors.iter().enumerate().skip(first) {
            if *v > d + 2 - o {
                break;
            }
            requests[s].push(k);
        }
    }
    let mut indicator = vec![ExtInt::NegInf; own.len()];
    for ((v, positions), ks) in survivors.iter().zip(&requests) {
        if ks.is_empty() {
            continue;
        }
        for &(_, i) in &sorted[positions.clone()] {
            indicator[i] = ExtInt::PosInf;
        }
        // reach[k] = max over i with own[i] = v of partner[k - i]
        let reach = maxmin_conv_fast(&indicator, partner);
        for &k in ks {
            let candidate = ExtInt::Finite(v + offset(k));
            if reach[k].shift(slack(k)) >= candidate && candidate > best[k] {
                best[k] = candidate;
            }
        }
        for &(_, i) in &sorted[positions.clone()] {
            indicator[i] = ExtInt::NegInf;
        }
    }
    ExtVec::new(best)
}

/// Skewed convolution with `δ = 3/4`.
pub fn skewed_conv_fast(a: &[ExtInt], b: &[ExtInt]) -> ExtVec {
    SkewedConv::default().convolve(a, b)
}

/// `A ⊗ B` with the default parameters; see [`SkewedConv::combine`].
pub fn skew_combine(a: &[ExtInt], b: &[ExtInt]) -> ExtVec {
    SkewedConv::default().combine(a, b)
}

/// Scaled values would not fit the finite range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("values too large to scale by {factor}")]
pub struct ScaleOverflow {
    /// The scale factor `N`.
    pub factor: i64,
}

/// `(max,min)`-convolution through one skewed convolution.
///
/// With `N = |A| + |B| - 1` (so `N = 2n+1` for equal lengths), scaling both
/// operands by `N` makes the skew term `k < N` invisible after `⌊· / N⌋`.
pub fn maxmin_via_skewed(a: &[ExtInt], b: &[ExtInt]) -> Result<ExtVec, ScaleOverflow> {
    assert!(!a.is_empty() && !b.is_empty(), "empty convolution operand");
    let n = (a.len() + b.len() - 1) as i64;
    let bound = (1i64 << 61) / n;
    let scale = |v: &[ExtInt]| -> Result<ExtVec, ScaleOverflow> {
        v.iter()
            .map(|x| match x.finite() {
                Some(f) if f.abs() > bound => Err(ScaleOverflow { factor: n }),
                _ => Ok(x.checked_scale(n).expect("bounded above")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ExtVec::new)
    };
    let c0 = skewed_conv_fast(&scale(a)?, &scale(b)?);
    Ok(c0.iter().map(|c| c.floor_div(n)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxmin::maxmin_conv_naive;
    use ExtInt::{Finite as F, NegInf as N, PosInf as I};

    #[test]
    fn naive_examples() {
        assert_eq!(skewed_conv_naive(&[F(3), F(1)], &[F(0), F(2)]), ExtVec::from_finite(&[0, 3, 1]));
        assert_eq!(skewed_conv_naive(&[I, I], &[F(0), F(0)]), ExtVec::from_finite(&[0, 1, 2]));
        assert_eq!(skewed_conv_naive(&[N], &[F(0)]), ExtVec::new(vec![N]));
    }

    #[test]
    fn level_vector_examples() {
        assert_eq!(level_vector(&ExtVec::from_finite(&[5, 4, 3]), 1), ExtVec::from_finite(&[2, 2, 1]));
        assert_eq!(level_vector(&[F(-9)], 0), ExtVec::new(vec![F(-9)]));
        assert_eq!(level_vector(&[N, F(7)], 2), ExtVec::new(vec![N, F(1)]));
        assert_eq!(level_vector(&[F(-1)], 3), ExtVec::new(vec![F(-1)]));
    }

    #[test]
    fn top_level_clears_shift() {
        assert_eq!(top_level(1), 0);
        assert_eq!(top_level(3), 2); // k ≤ 2 needs 2^ℓ > 2
        assert_eq!(top_level(4), 2);
        assert_eq!(top_level(5), 3);
        for len in 1..100usize {
            let top = top_level(len);
            assert_eq!(level_shift(len - 1, top), 0);
            if top > 0 {
                assert!(level_shift(len - 1, top - 1) > 0);
            }
        }
    }

    #[test]
    fn fast_examples() {
        let a = [F(3), F(1)];
        let b = [F(0), F(2)];
        assert_eq!(skewed_conv_fast(&a, &b), ExtVec::from_finite(&[0, 3, 1]));
        let flat = ExtVec::filled(9, F(4));
        let b = ExtVec::from_finite(&[0, 5, 1, 7, 2, 2, 9, 0, 3]);
        assert_eq!(skewed_conv_fast(&flat, &b), skewed_conv_naive(&flat, &b));
    }

    #[test]
    fn refine_from_exact_and_worst_approximation() {
        let a = ExtVec::from_finite(&[7, 2, 9, 4, 4, 11, 0]);
        let b = ExtVec::new(vec![F(3), N, F(8), I, F(1), F(6), F(2)]);
        let sc = SkewedConv::default();
        for level in 0..4 {
            let exact = skewed_level_naive(&a, &b, level);
            for slack in 0..=2 {
                let state = LevelState {
                    level,
                    a: level_vector(&a, level),
                    b: level_vector(&b, level),
                    approx: exact.iter().map(|c| c.shift(-slack)).collect(),
                };
                assert_eq!(sc.refine_level(&state), Ok(exact.clone()), "level {level} slack {slack}");
            }
        }
    }

    #[test]
    fn refine_all_neg_inf() {
        let state = LevelState {
            level: 0,
            a: ExtVec::from_finite(&[1, 2]),
            b: ExtVec::from_finite(&[3, 4]),
            approx: ExtVec::filled(3, N),
        };
        assert_eq!(SkewedConv::default().refine_level(&state), Ok(ExtVec::filled(3, N)));
    }

    #[test]
    fn refine_rejects_bad_input() {
        let sc = SkewedConv::default();
        let a = ExtVec::from_finite(&[1, 2]);
        let state = LevelState {
            level: 0,
            a: a.clone(),
            b: a.clone(),
            approx: ExtVec::filled(2, N),
        };
        assert_eq!(
            sc.refine_level(&state),
            Err(RefineError::LengthMismatch { expected: 3, got: 2 })
        );
        // exact C = [1, 2, 2]; an approximation 3 too low is detected
        let state = LevelState {
            approx: ExtVec::from_finite(&[-2, -1, -1]),
            ..state
        };
        assert!(matches!(
            sc.refine_level(&state),
            Err(RefineError::NotGoodApproximation { .. })
        ));
    }

    #[test]
    fn combine_examples() {
        assert_eq!(skew_combine(&[F(3), F(1)], &[F(5), F(2)]), ExtVec::from_finite(&[3, 2, 1]));
        let a = ExtVec::from_finite(&[4, -1, 7, 2]);
        let mut e = ExtVec::filled(4, N);
        e[0] = I;
        assert_eq!(&skew_combine(&a, &e)[..4], &a[..]);
        assert_eq!(&skew_combine(&e, &a)[..4], &a[..]);
    }

    #[test]
    fn via_skewed_examples() {
        let a = [F(1), F(5)];
        let b = [F(2), F(4)];
        assert_eq!(maxmin_via_skewed(&a, &b), Ok(ExtVec::from_finite(&[1, 2, 4])));
        assert_eq!(maxmin_via_skewed(&[F(-4)], &[F(9)]), Ok(ExtVec::new(vec![F(-4)])));
        let c = [N, F(3), I];
        assert_eq!(maxmin_via_skewed(&c, &a).unwrap(), maxmin_conv_naive(&c, &a));
        assert_eq!(
            maxmin_via_skewed(&[F((1 << 60) + 1)], &[F(0), F(1)]),
            Err(ScaleOverflow { factor: 2 })
        );
    }

    #[test]
    fn via_skewed_scaled_operands_match_hand_computation() {
        // N = 3: A0 = [3, 15], B0 = [6, 12]; C0 = [3, 7, 14]
        let c0 = skewed_conv_naive(&[F(3), F(15)], &[F(6), F(12)]);
        assert_eq!(c0, ExtVec::from_finite(&[3, 7, 14]));
    }

    #[test]
    #[should_panic(expected = "delta")]
    fn delta_out_of_range() {
        SkewedConv::new(1.0);
    }
}
