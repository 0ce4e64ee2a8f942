//! Number-theoretic transform over the prime `p = 2^64 - 2^32 + 1`.
//!
//! The multiplicative group has order divisible by `2^32`, so transforms of
//! any practical length exist. Products of 0/1 vectors have coefficients at
//! most `min(|u|, |v|) < p`, which makes support detection exact.

use alloc::vec;
use alloc::vec::Vec;

const P: u64 = 0xFFFF_FFFF_0000_0001;
const EPSILON: u64 = 0xFFFF_FFFF; // 2^64 mod p
const GENERATOR: u64 = 7;
const TWO_ADICITY: u32 = 32;

#[inline(always)]
fn reduce(x: u128) -> u64 {
    let lo = x as u64;
    let hi = (x >> 64) as u64;
    let hi_hi = hi >> 32;
    let hi_lo = hi & EPSILON;
    // 2^96 = -1 and 2^64 = EPSILON (mod p)
    let (mut t0, borrow) = lo.overflowing_sub(hi_hi);
    if borrow {
        t0 = t0.wrapping_sub(EPSILON);
    }
    let t1 = hi_lo * EPSILON;
    let (mut r, carry) = t0.overflowing_add(t1);
    if carry {
        r = r.wrapping_add(EPSILON);
    }
    if r >= P {
        r - P
    } else {
        r
    }
}

#[inline(always)]
fn mul(a: u64, b: u64) -> u64 {
    reduce(a as u128 * b as u128)
}

#[inline(always)]
fn add(a: u64, b: u64) -> u64 {
    let (s, carry) = a.overflowing_add(b);
    if carry || s >= P {
        s.wrapping_sub(P)
    } else {
        s
    }
}

#[inline(always)]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a.wrapping_sub(b).wrapping_add(P)
    }
}

fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

/// Precomputed twiddles for one power-of-two length.
pub(crate) struct Plan {
    log_len: u32,
    /// `roots[len/2 + i] = w_len^i` style table: for a stage of half-size `h`,
    /// the twiddles are `roots[h..2h]`.
    roots: Vec<u64>,
    inv_roots: Vec<u64>,
    inv_len: u64,
}

impl Plan {
    pub(crate) fn new(len: usize) -> Self {
        assert!(len.is_power_of_two());
        let log_len = len.trailing_zeros();
        assert!(log_len <= TWO_ADICITY, "transform length too large");
        let mut roots = vec![0u64; len.max(2)];
        let mut inv_roots = vec![0u64; len.max(2)];
        let mut half = 1usize;
        while half < len {
            // primitive root of order 2*half
            let order_log = half.trailing_zeros() + 1;
            let w = pow(GENERATOR, (P - 1) >> order_log);
            let w_inv = pow(w, P - 2);
            let (mut cur, mut cur_inv) = (1u64, 1u64);
            for i in 0..half {
                roots[half + i] = cur;
                inv_roots[half + i] = cur_inv;
                cur = mul(cur, w);
                cur_inv = mul(cur_inv, w_inv);
            }
            half <<= 1;
        }
        let inv_len = pow(len as u64 % P, P - 2);
        Plan {
            log_len,
            roots,
            inv_roots,
            inv_len,
        }
    }

    pub(crate) fn len(&self) -> usize {
        1 << self.log_len
    }

    fn bit_reverse(&self, a: &mut [u64]) {
        let n = a.len();
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
    }

    fn butterflies(&self, a: &mut [u64], table: &[u64]) {
        let n = a.len();
        let mut half = 1usize;
        while half < n {
            let tw = &table[half..2 * half];
            for chunk in a.chunks_exact_mut(2 * half) {
                let (lo, hi) = chunk.split_at_mut(half);
                for ((x, y), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                    let t = mul(*y, w);
                    let u = *x;
                    *x = add(u, t);
                    *y = sub(u, t);
                }
            }
            half <<= 1;
        }
    }

    pub(crate) fn forward(&self, a: &mut [u64]) {
        debug_assert_eq!(a.len(), self.len());
        self.bit_reverse(a);
        self.butterflies(a, &self.roots);
    }

    pub(crate) fn inverse(&self, a: &mut [u64]) {
        debug_assert_eq!(a.len(), self.len());
        self.bit_reverse(a);
        self.butterflies(a, &self.inv_roots);
        for x in a.iter_mut() {
            *x = mul(*x, self.inv_len);
        }
    }

    /// Transforms a 0/1 indicator given by `bits` into a fresh buffer.
    pub(crate) fn forward_indicator(&self, bits: impl Iterator<Item = bool>) -> Vec<u64> {
        let mut buf = vec![0u64; self.len()];
        for (slot, b) in buf.iter_mut().zip(bits) {
            *slot = b as u64;
        }
        self.forward(&mut buf);
        buf
    }

    /// Multiplies two transformed buffers pointwise and inverts into `out`.
    pub(crate) fn multiply_inverse(&self, fa: &[u64], fb: &[u64], out: &mut Vec<u64>) {
        out.clear();
        out.extend(fa.iter().zip(fb).map(|(&x, &y)| mul(x, y)));
        self.inverse(out);
    }
}

/// Smallest power of two that holds a full linear convolution of the given lengths.
pub(crate) fn conv_len(a: usize, b: usize) -> usize {
    (a + b - 1).next_power_of_two()
}
