//! Fixed-capacity bitset with the shift-or update used by the Lawler–Moore DP.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    /// Bits `0..len`, all clear.
    pub(crate) fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub(crate) fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[cfg(test)]
    pub(crate) fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// `self |= (self << shift) ∩ [0, limit]`.
    ///
    /// When `added` is given it receives exactly the bits that were newly set.
    pub(crate) fn or_shifted(&mut self, shift: usize, limit: usize, mut added: Option<&mut [u64]>) {
        if self.len == 0 {
            return;
        }
        let limit = limit.min(self.len - 1);
        if shift > limit {
            return;
        }
        let q = shift / 64;
        let r = shift % 64;
        let top = limit / 64;
        let top_mask = if limit % 64 == 63 {
            u64::MAX
        } else {
            (1u64 << (limit % 64 + 1)) - 1
        };
        // Descending order: sources (lower words) are read before they change.
        for w in (q..=top).rev() {
            let lo = self.words[w - q];
            let mut shifted = lo << r;
            if r != 0 && w > q {
                shifted |= self.words[w - q - 1] >> (64 - r);
            }
            if w == top {
                shifted &= top_mask;
            }
            let new_bits = shifted & !self.words[w];
            if new_bits != 0 {
                self.words[w] |= new_bits;
                if let Some(buf) = added.as_deref_mut() {
                    buf[w] = new_bits;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_or_against_naive() {
        for shift in [0usize, 1, 5, 63, 64, 65, 130] {
            for limit in [0usize, 3, 63, 64, 100, 199] {
                let mut s = BitSet::new(200);
                for i in [0usize, 2, 7, 60, 64, 70] {
                    s.insert(i);
                }
                let before: Vec<bool> = (0..200).map(|i| s.contains(i)).collect();
                let mut added = vec![0u64; s.words().len()];
                s.or_shifted(shift, limit, Some(&mut added));
                for i in 0..200 {
                    let expect = before[i] || (i >= shift && i <= limit && before[i - shift]);
                    assert_eq!(s.contains(i), expect, "shift {shift} limit {limit} bit {i}");
                    let was_added = added[i / 64] >> (i % 64) & 1 == 1;
                    assert_eq!(was_added, expect && !before[i]);
                }
            }
        }
    }

    #[test]
    fn max_bit() {
        let mut s = BitSet::new(130);
        assert_eq!(s.max(), None);
        s.insert(3);
        s.insert(129);
        assert_eq!(s.max(), Some(129));
    }
}
