//! Extended integers and `(max,min)`-convolution `C[k] = max_{i+j=k} min(A[i], B[j])`.
//!
//! The fast routine buckets the sorted values of both operands into rank
//! groups. For the lowest value `t` of each group, one boolean convolution of
//! the indicators `A ≥ t` and `B ≥ t` tells which outputs reach `t`. Walking
//! groups from the top, each output is settled by the first group that reaches
//! it, after scanning only that group's entries.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Deref, DerefMut, Range};

use crate::ntt::{self, Plan};

/// An integer extended with `-∞` and `+∞`.
///
/// The derived order is the intended one: `NegInf < Finite(_) < PosInf`.
/// Finite magnitudes are expected to stay below `2^61` so that the sums done
/// by the convolutions cannot overflow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtInt {
    /// `-∞`.
    NegInf,
    /// A finite value.
    Finite(i64),
    /// `+∞`.
    PosInf,
}

/// Shorthand for [`ExtInt::NegInf`].
pub const NEG_INF: ExtInt = ExtInt::NegInf;
/// Shorthand for [`ExtInt::PosInf`].
pub const POS_INF: ExtInt = ExtInt::PosInf;

impl ExtInt {
    /// Finite value, if any.
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// True for finite values.
    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Finite(_))
    }

    /// Adds a finite amount; sentinels absorb it.
    #[inline]
    pub fn shift(self, amount: i64) -> ExtInt {
        match self {
            ExtInt::Finite(v) => ExtInt::Finite(v + amount),
            s => s,
        }
    }

    /// Sum of two extended integers; `None` for `+∞ + -∞`.
    pub fn checked_add(self, other: ExtInt) -> Option<ExtInt> {
        use ExtInt::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (Finite(a), Finite(b)) => a.checked_add(b).map(Finite),
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
        }
    }

    /// `⌊self / 2^level⌋`, rounding toward `-∞`; sentinels unchanged.
    #[inline]
    pub fn floor_div_pow2(self, level: u32) -> ExtInt {
        match self {
            ExtInt::Finite(v) => ExtInt::Finite(v >> level.min(63)),
            s => s,
        }
    }

    /// `⌊self / divisor⌋` for `divisor > 0`; sentinels unchanged.
    pub fn floor_div(self, divisor: i64) -> ExtInt {
        debug_assert!(divisor > 0);
        match self {
            ExtInt::Finite(v) => ExtInt::Finite(v.div_euclid(divisor)),
            s => s,
        }
    }

    /// `self · factor` for `factor > 0`; `None` on overflow.
    pub fn checked_scale(self, factor: i64) -> Option<ExtInt> {
        debug_assert!(factor > 0);
        match self {
            ExtInt::Finite(v) => v.checked_mul(factor).map(ExtInt::Finite),
            s => Some(s),
        }
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        ExtInt::Finite(v)
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => f.write_str("-inf"),
            ExtInt::Finite(v) => write!(f, "{v}"),
            ExtInt::PosInf => f.write_str("+inf"),
        }
    }
}

/// A fixed-length vector of [`ExtInt`], indexed from 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExtVec(Vec<ExtInt>);

impl ExtVec {
    /// Wraps entries.
    pub fn new(entries: Vec<ExtInt>) -> Self {
        ExtVec(entries)
    }

    /// All-finite vector.
    pub fn from_finite(values: &[i64]) -> Self {
        values.iter().map(|&v| ExtInt::Finite(v)).collect()
    }

    /// `len` copies of `value`.
    pub fn filled(len: usize, value: ExtInt) -> Self {
        ExtVec(vec![value; len])
    }

    /// Underlying entries.
    pub fn into_inner(self) -> Vec<ExtInt> {
        self.0
    }
}

impl Deref for ExtVec {
    type Target = [ExtInt];
    fn deref(&self) -> &[ExtInt] {
        &self.0
    }
}

impl DerefMut for ExtVec {
    fn deref_mut(&mut self) -> &mut [ExtInt] {
        &mut self.0
    }
}

impl FromIterator<ExtInt> for ExtVec {
    fn from_iter<I: IntoIterator<Item = ExtInt>>(iter: I) -> Self {
        ExtVec(iter.into_iter().collect())
    }
}

impl From<Vec<ExtInt>> for ExtVec {
    fn from(v: Vec<ExtInt>) -> Self {
        ExtVec(v)
    }
}

/// Quadratic reference: double loop over all pairs.
///
/// Operands may differ in length; the output has `|A| + |B| - 1` entries.
/// Panics if either operand is empty.
pub fn maxmin_conv_naive(a: &[ExtInt], b: &[ExtInt]) -> ExtVec {
    assert!(!a.is_empty() && !b.is_empty(), "empty convolution operand");
    let mut out = vec![ExtInt::NegInf; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            let m = x.min(y);
            if m > out[i + j] {
                out[i + j] = m;
            }
        }
    }
    ExtVec(out)
}

/// Pairs involving `-∞` never raise an output, so only the other entries are
/// paired up. Above a few thousand pairs the values are replaced by their
/// ranks, which keeps the inner loop on 32-bit lanes.
pub(crate) fn maxmin_conv_sparse(a: &[ExtInt], b: &[ExtInt]) -> ExtVec {
    assert!(!a.is_empty() && !b.is_empty(), "empty convolution operand");
    if a.len() * b.len() < 4096 {
        let mut out = vec![ExtInt::NegInf; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == ExtInt::NegInf {
                continue;
            }
            for (o, &y) in out[i..].iter_mut().zip(b) {
                *o = (*o).max(x.min(y));
            }
        }
        return ExtVec(out);
    }
    let mut values: Vec<ExtInt> = a.iter().chain(b).copied().collect();
    values.push(ExtInt::NegInf);
    values.sort_unstable();
    values.dedup();
    let rank = |x: &ExtInt| values.binary_search(x).expect("value present") as u32;
    let rb: Vec<u32> = b.iter().map(rank).collect();
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == ExtInt::NegInf {
            continue;
        }
        let x = rank(x);
        let row = &mut out[i..i + rb.len()];
        for (o, &y) in row.iter_mut().zip(&rb) {
            *o = (*o).max(x.min(y));
        }
    }
    out.into_iter().map(|r| values[r as usize]).collect()
}

fn live_count(v: &[ExtInt]) -> usize {
    v.iter().filter(|&&x| x != ExtInt::NegInf).count()
}

/// Default rank-group size for `m` entries: `⌈√m⌉`.
pub fn default_group_size(m: usize) -> usize {
    let r = m.isqrt();
    if r * r == m {
        r.max(1)
    } else {
        r + 1
    }
}

/// Fast `(max,min)`-convolution; same output as [`maxmin_conv_naive`].
///
/// Chooses between the rank-bucketing algorithm and a sparse pair loop by
/// estimated cost. Length-1 operands short-circuit.
///
/// The group size balances one boolean convolution per group against the
/// per-output scan inside a group: `max(⌈√m⌉, ⌈√T⌉)` with `T` the cost of
/// one transform-based product.
pub fn maxmin_conv_fast(a: &[ExtInt], b: &[ExtInt]) -> ExtVec {
    assert!(!a.is_empty() && !b.is_empty(), "empty convolution operand");
    if a.len() == 1 || b.len() == 1 {
        return maxmin_conv_naive(a, b);
    }
    let pairs = live_count(a).saturating_mul(live_count(b));
    let m = a.len() + b.len();
    let len = ntt::conv_len(a.len(), b.len());
    let transform = 3 * len * (len.trailing_zeros() as usize + 1);
    let s = default_group_size(m).max(default_group_size(transform));
    let bucketed = (m / s + 1) * transform + (m - 1) * s;
    if pairs <= 2 * bucketed {
        maxmin_conv_sparse(a, b)
    } else {
        maxmin_conv_bucketed(a, b, s)
    }
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    value: ExtInt,
    from_a: bool,
    idx: u32,
}

/// Rank groups over entries sorted descending. No value straddles two groups;
/// a group holding several distinct values has at most `size` entries.
fn rank_groups(entries: &[Entry], size: usize) -> Vec<Range<usize>> {
    let m = entries.len();
    let mut groups = Vec::with_capacity(m / size + 1);
    let mut start = 0;
    while start < m {
        let mut end = (start + size).min(m);
        if end < m && entries[end - 1].value == entries[end].value {
            let v = entries[end - 1].value;
            let run_start = start + entries[start..end].partition_point(|e| e.value > v);
            end = if run_start > start {
                run_start
            } else {
                start + entries[start..].partition_point(|e| e.value >= v)
            };
        }
        groups.push(start..end);
        start = end;
    }
    groups
}

/// Cumulative `≥ threshold` indicators of both operands plus their supports.
struct Indicators {
    a: Vec<bool>,
    b: Vec<bool>,
    a_pos: Vec<usize>,
    b_pos: Vec<usize>,
}

impl Indicators {
    fn support(&self, out_len: usize, plan: &mut Option<Plan>, scratch: &mut Vec<u64>) -> Vec<bool> {
        let mut out = vec![false; out_len];
        if self.a_pos.is_empty() || self.b_pos.is_empty() {
            return out;
        }
        let len = ntt::conv_len(self.a.len(), self.b.len());
        let transform = 3 * len * (len.trailing_zeros() as usize + 1);
        if self.a_pos.len().saturating_mul(self.b_pos.len()) <= transform {
            for &i in &self.a_pos {
                let row = &mut out[i..];
                for &j in &self.b_pos {
                    row[j] = true;
                }
            }
            return out;
        }
        let plan = plan.get_or_insert_with(|| Plan::new(len));
        let fa = plan.forward_indicator(self.a.iter().copied());
        let fb = plan.forward_indicator(self.b.iter().copied());
        plan.multiply_inverse(&fa, &fb, scratch);
        for (o, &c) in out.iter_mut().zip(scratch.iter()) {
            *o = c != 0;
        }
        out
    }
}

/// Rank-bucketing `(max,min)`-convolution with an explicit group size.
///
/// Always runs the bucketed path (except for length-1 operands), which makes
/// it the routine to test directly; [`maxmin_conv_fast`] adds the cost-based
/// choice on top.
pub fn maxmin_conv_bucketed(a: &[ExtInt], b: &[ExtInt], group_size: usize) -> ExtVec {
    assert!(!a.is_empty() && !b.is_empty(), "empty convolution operand");
    assert!(group_size >= 1);
    if a.len() == 1 || b.len() == 1 {
        return maxmin_conv_naive(a, b);
    }
    let out_len = a.len() + b.len() - 1;
    let mut entries: Vec<Entry> = Vec::with_capacity(a.len() + b.len());
    entries.extend(a.iter().enumerate().map(|(i, &value)| Entry {
        value,
        from_a: true,
        idx: i as u32,
    }));
    entries.extend(b.iter().enumerate().map(|(j, &value)| Entry {
        value,
        from_a: false,
        idx: j as u32,
    }));
    entries.sort_unstable_by_key(|e| core::cmp::Reverse(e.value));
    let global_min = entries[entries.len() - 1].value;

    let mut out = vec![ExtInt::NegInf; out_len];
    let mut pending: Vec<usize> = (0..out_len).collect();
    let mut ind = Indicators {
        a: vec![false; a.len()],
        b: vec![false; b.len()],
        a_pos: Vec::new(),
        b_pos: Vec::new(),
    };
    let mut plan = None;
    let mut scratch = Vec::new();

    for group in rank_groups(&entries, group_size) {
        if pending.is_empty() {
            break;
        }
        let members = &entries[group];
        for e in members {
            let i = e.idx as usize;
            if e.from_a {
                ind.a[i] = true;
                ind.a_pos.push(i);
            } else {
                ind.b[i] = true;
                ind.b_pos.push(i);
            }
        }
        let threshold = members[members.len() - 1].value;
        let single_valued = members[0].value == threshold;
        let reached = if threshold == global_min {
            None
        } else {
            Some(ind.support(out_len, &mut plan, &mut scratch))
        };
        pending.retain(|&k| {
            if let Some(r) = &reached {
                if !r[k] {
                    return true;
                }
            }
            out[k] = if single_valued {
                threshold
            } else {
                resolve_in_group(a, b, members, k)
            };
            false
        });
    }
    debug_assert!(pending.is_empty());
    ExtVec(out)
}

/// Largest group value `u` realized as `min(A[i], B[k-i]) = u` for this `k`.
fn resolve_in_group(a: &[ExtInt], b: &[ExtInt], members: &[Entry], k: usize) -> ExtInt {
    for e in members {
        let (own, other) = if e.from_a { (a, b) } else { (b, a) };
        let idx = e.idx as usize;
        debug_assert_eq!(own[idx], e.value);
        if let Some(partner) = k.checked_sub(idx) {
            if partner < other.len() && other[partner] >= e.value {
                return e.value;
            }
        }
    }
    unreachable!("output reached the group threshold but no witness found")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExtInt::{Finite as F, NegInf as N, PosInf as I};

    #[test]
    fn ext_int_arithmetic() {
        assert!(N < F(i64::MIN) && F(i64::MAX) < I);
        assert_eq!(F(-5).floor_div_pow2(1), F(-3));
        assert_eq!(F(5).floor_div_pow2(1), F(2));
        assert_eq!(N.floor_div_pow2(3), N);
        assert_eq!(I.shift(10), I);
        assert_eq!(I.checked_add(N), None);
        assert_eq!(F(2).checked_add(I), Some(I));
        assert_eq!(F(-7).floor_div(3), F(-3));
        assert_eq!(F(1 << 62).checked_scale(4), None);
    }

    #[test]
    fn naive_examples() {
        assert_eq!(maxmin_conv_naive(&[F(1), F(5)], &[F(2), F(4)]), ExtVec::from_finite(&[1, 2, 4]));
        assert_eq!(maxmin_conv_naive(&[F(3)], &[F(8)]), ExtVec::from_finite(&[3]));
        assert_eq!(maxmin_conv_naive(&[N, F(7)], &[F(3), I]), ExtVec::new(vec![N, F(3), F(7)]));
    }

    #[test]
    fn fast_examples() {
        assert_eq!(maxmin_conv_fast(&[F(1), F(5)], &[F(2), F(4)]), ExtVec::from_finite(&[1, 2, 4]));
        assert_eq!(maxmin_conv_fast(&[N; 4], &[N; 4]), ExtVec::filled(7, N));
        let a = ExtVec::from_finite(&[0, 1, 2, 3]);
        let b = ExtVec::from_finite(&[3, 2, 1, 0]);
        assert_eq!(maxmin_conv_fast(&a, &b), maxmin_conv_naive(&a, &b));
        for s in 1..=8 {
            assert_eq!(maxmin_conv_bucketed(&a, &b, s), maxmin_conv_naive(&a, &b));
        }
    }

    #[test]
    fn groups_never_split_equal_values() {
        let vals = [9, 9, 7, 7, 7, 7, 7, 3, 2, 2, 1];
        let entries: Vec<Entry> = vals
            .iter()
            .map(|&v| Entry {
                value: F(v),
                from_a: true,
                idx: 0,
            })
            .collect();
        let groups = rank_groups(&entries, 3);
        assert_eq!(groups, vec![0..2, 2..7, 7..10, 10..11]);
        for g in &groups {
            let distinct = entries[g.clone()].windows(2).any(|w| w[0].value != w[1].value);
            assert!(!distinct || g.len() <= 3);
        }
    }

    #[test]
    fn default_group_size_is_ceil_sqrt() {
        assert_eq!(default_group_size(1), 1);
        assert_eq!(default_group_size(4), 2);
        assert_eq!(default_group_size(5), 3);
        assert_eq!(default_group_size(10), 4);
    }
}
