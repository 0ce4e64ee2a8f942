//! Boolean convolution, sumsets and subset sums.

use alloc::vec;
use alloc::vec::Vec;

use crate::ntt::{self, Plan};

/// An input to a convolution was empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("convolution operands must be non-empty")]
pub struct EmptyOperand;

/// Below this many candidate pairs the sparse double loop beats a transform.
fn sparse_is_cheaper(ones_u: usize, ones_v: usize, out_len: usize) -> bool {
    let len = out_len.next_power_of_two();
    let transform = 3 * len * (len.trailing_zeros() as usize + 1);
    ones_u.saturating_mul(ones_v) <= transform
}

/// Support of the product of two 0/1 polynomials: `out[k]` is true iff some
/// `i + j = k` has `u[i] && v[j]`. Exact for every input size.
pub fn boolean_convolve(u: &[bool], v: &[bool]) -> Result<Vec<bool>, EmptyOperand> {
    if u.is_empty() || v.is_empty() {
        return Err(EmptyOperand);
    }
    let out_len = u.len() + v.len() - 1;
    let ones_u: Vec<usize> = positions(u);
    let ones_v: Vec<usize> = positions(v);
    if sparse_is_cheaper(ones_u.len(), ones_v.len(), out_len) {
        let mut out = vec![false; out_len];
        for &i in &ones_u {
            for &j in &ones_v {
                out[i + j] = true;
            }
        }
        return Ok(out);
    }
    let plan = Plan::new(ntt::conv_len(u.len(), v.len()));
    let fu = plan.forward_indicator(u.iter().copied());
    let fv = plan.forward_indicator(v.iter().copied());
    let mut prod = Vec::with_capacity(plan.len());
    plan.multiply_inverse(&fu, &fv, &mut prod);
    Ok(prod[..out_len].iter().map(|&c| c != 0).collect())
}

fn positions(bits: &[bool]) -> Vec<usize> {
    bits.iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i))
        .collect()
}

/// A set of non-negative integers in `0..=cap`, stored densely.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SumSet {
    members: Vec<bool>,
}

impl SumSet {
    /// The empty set with the given capacity.
    pub fn empty(cap: usize) -> Self {
        SumSet {
            members: vec![false; cap + 1],
        }
    }

    /// The set `{0}`.
    pub fn zero() -> Self {
        SumSet {
            members: vec![true],
        }
    }

    /// Builds a set from elements; elements above `cap` are dropped.
    pub fn from_elements(cap: usize, elements: impl IntoIterator<Item = usize>) -> Self {
        let mut s = SumSet::empty(cap);
        for x in elements {
            if x <= cap {
                s.members[x] = true;
            }
        }
        s
    }

    /// Wraps a dense membership vector (index = element). Must be non-empty.
    pub fn from_dense(members: Vec<bool>) -> Self {
        assert!(!members.is_empty(), "a SumSet covers at least 0..=0");
        SumSet { members }
    }

    /// Largest representable element.
    pub fn cap(&self) -> usize {
        self.members.len() - 1
    }

    /// Membership test; false above `cap`.
    pub fn contains(&self, x: usize) -> bool {
        self.members.get(x).copied().unwrap_or(false)
    }

    /// Largest element, if any.
    pub fn max(&self) -> Option<usize> {
        self.members.iter().rposition(|&b| b)
    }

    /// Number of elements.
    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    /// True when the set has no elements.
    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    /// Dense membership vector.
    pub fn as_dense(&self) -> &[bool] {
        &self.members
    }

    /// Drops every element above `limit` and lowers the cap to `min(cap, limit)`.
    pub fn truncate(&mut self, limit: usize) {
        if limit < self.cap() {
            self.members.truncate(limit + 1);
        }
    }
}

/// `X1 ⊕ X2 = {x1 + x2}`, via boolean convolution. Capacity is `cap1 + cap2`.
pub fn sumset(x1: &SumSet, x2: &SumSet) -> SumSet {
    if x1.is_empty() || x2.is_empty() {
        return SumSet::empty(x1.cap() + x2.cap());
    }
    let members = boolean_convolve(&x1.members, &x2.members).expect("sumsets are never zero-length");
    SumSet { members }
}

/// Reference sumset by double loop over members.
pub fn sumset_naive(x1: &SumSet, x2: &SumSet) -> SumSet {
    let mut out = SumSet::empty(x1.cap() + x2.cap());
    let right: Vec<usize> = x2.iter().collect();
    for a in x1.iter() {
        for &b in &right {
            out.members[a + b] = true;
        }
    }
    out
}

/// All subset sums of a multiset, capacity `Σ X`.
///
/// Elements are sorted descending and dealt alternately into two halves so
/// that both halves have similar counts and similar sums; the halves are solved
/// recursively and merged with [`sumset`].
pub fn subset_sums(xs: &[u64]) -> SumSet {
    let mut sorted: Vec<usize> = xs.iter().map(|&x| to_usize(x)).collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    subset_sums_sorted(&sorted)
}

fn subset_sums_sorted(xs: &[usize]) -> SumSet {
    match xs {
        [] => SumSet::zero(),
        [x] => SumSet::from_elements(*x, [0, *x]),
        _ => {
            let left: Vec<usize> = xs.iter().step_by(2).copied().collect();
            let right: Vec<usize> = xs.iter().skip(1).step_by(2).copied().collect();
            sumset(&subset_sums_sorted(&left), &subset_sums_sorted(&right))
        }
    }
}

/// Input too large for [`subset_sums_naive`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("naive subset sums limited to at most 20 elements or a total of at most 10^6")]
pub struct NaiveTooLarge;

/// Subset sums by the textbook incremental DP. Intended as an oracle.
pub fn subset_sums_naive(xs: &[u64]) -> Result<SumSet, NaiveTooLarge> {
    let total: u128 = xs.iter().map(|&x| x as u128).sum();
    if xs.len() > 20 && total > 1_000_000 {
        return Err(NaiveTooLarge);
    }
    let cap = to_usize(u64::try_from(total).map_err(|_| NaiveTooLarge)?);
    let mut members = vec![false; cap + 1];
    members[0] = true;
    for &x in xs {
        let x = to_usize(x);
        for s in (x..=cap).rev() {
            if members[s - x] {
                members[s] = true;
            }
        }
    }
    Ok(SumSet { members })
}

fn to_usize(x: u64) -> usize {
    usize::try_from(x).expect("value exceeds the address space")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(cap: usize, xs: &[usize]) -> SumSet {
        SumSet::from_elements(cap, xs.iter().copied())
    }

    fn b(v: &[u8]) -> Vec<bool> {
        v.iter().map(|&x| x != 0).collect()
    }

    #[test]
    fn convolve_examples() {
        assert_eq!(boolean_convolve(&b(&[1, 0, 1]), &b(&[1, 1])), Ok(b(&[1, 1, 1, 1])));
        let u = b(&[0, 1, 1, 0, 1]);
        assert_eq!(boolean_convolve(&u, &b(&[1])), Ok(u.clone()));
        assert_eq!(boolean_convolve(&b(&[0, 1]), &b(&[0, 1])), Ok(b(&[0, 0, 1])));
        assert_eq!(boolean_convolve(&[], &b(&[1])), Err(EmptyOperand));
    }

    #[test]
    fn dense_convolution_uses_transform_exactly() {
        // Dense enough that the transform path is taken.
        let u = vec![true; 3000];
        let v = vec![true; 2000];
        let out = boolean_convolve(&u, &v).unwrap();
        assert_eq!(out.len(), 4999);
        assert!(out.iter().all(|&x| x));
        let mut u = vec![false; 4096];
        u[4095] = true;
        u[0] = true;
        for x in u.iter_mut().skip(100).step_by(3).take(900) {
            *x = true;
        }
        let out = boolean_convolve(&u, &u).unwrap();
        assert!(out[0] && out[8190] && out[4095] && !out[1] && out[200]);
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&set(2, &[0, 2]), &set(3, &[0, 3])), set(5, &[0, 2, 3, 5]));
        let x = set(7, &[1, 4, 7]);
        assert_eq!(sumset(&SumSet::zero(), &x), x);
        assert!(sumset(&SumSet::empty(3), &x).is_empty());
        assert_eq!(sumset(&SumSet::empty(3), &x).cap(), 10);
        assert_eq!(sumset_naive(&set(4, &[1, 4]), &set(2, &[2])), set(6, &[3, 6]));
        assert_eq!(sumset_naive(&set(1, &[0, 1]), &set(1, &[0, 1])), set(2, &[0, 1, 2]));
    }

    #[test]
    fn subset_sum_examples() {
        let expect = set(10, &[0, 2, 3, 5, 7, 8, 10]);
        assert_eq!(subset_sums(&[2, 3, 5]), expect);
        assert_eq!(subset_sums_naive(&[2, 3, 5]), Ok(expect));
        assert_eq!(subset_sums(&[]), SumSet::zero());
        assert_eq!(subset_sums(&[4, 4]), set(8, &[0, 4, 8]));
        assert_eq!(subset_sums_naive(&[1]), Ok(set(1, &[0, 1])));
        assert_eq!(subset_sums_naive(&[3, 3, 3]), Ok(set(9, &[0, 3, 6, 9])));
        assert_eq!(subset_sums_naive(&[100_000; 21]), Err(NaiveTooLarge));
    }

    #[test]
    fn truncate_lowers_cap() {
        let mut s = set(10, &[0, 2, 3, 5, 7, 8, 10]);
        s.truncate(7);
        assert_eq!(s, set(7, &[0, 2, 3, 5, 7]));
        s.truncate(100);
        assert_eq!(s.cap(), 7);
    }
}
