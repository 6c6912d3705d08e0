//! Exact sign rows of the rounded cosine matrix and their bit-packed
//! correlation.
//!
//! `s_k = sign(cos(2*pi*a*k/n))` is decided with integer comparisons only:
//! with `r = a*k mod n`, the cosine is non-negative exactly when
//! `4r <= n` or `4r >= 3n`. The cosine vanishes only when `4 | n` and one of
//! those comparisons is an equality; that case is assigned `+1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::{class_ratio, norm_of_residue, Modulus};

/// Sign of `cos(2*pi*m/n)` with `sign(0) = +1`.
#[inline]
pub fn cos_sign_exact(m: i64, n: &Modulus) -> i8 {
    if residue_is_negative(n.reduce(m), n.get()) {
        -1
    } else {
        1
    }
}

/// True iff `cos(2*pi*r/n) < 0` for `r` in `[0, n)`.
#[inline(always)]
pub(crate) fn residue_is_negative(r: u64, n: u64) -> bool {
    let q = 4 * r;
    q > n && q < 3 * n
}

/// One row of the signed cosine matrix, `s_k` for `k = 1..=n`.
///
/// Bit `k - 1` is set iff `s_k = -1`, least significant bit first within each
/// word. Padding bits past `n` are always zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVector {
    n: Modulus,
    a: u64,
    words: Vec<u64>,
}

impl SignVector {
    pub fn new(a: i64, n: &Modulus) -> Self {
        let a = n.reduce(a);
        let len = n.get() as usize;
        let mut words = vec![0u64; len.div_ceil(64)];
        let modulus = n.get();
        // residue stepping: r_k = a*k mod n without multiplication
        let mut r = 0u64;
        for k in 0..len {
            r += a;
            if r >= modulus {
                r -= modulus;
            }
            if residue_is_negative(r, modulus) {
                words[k >> 6] |= 1 << (k & 63);
            }
        }
        Self { n: *n, a, words }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.n
    }

    pub fn frequency(&self) -> u64 {
        self.a
    }

    pub fn len(&self) -> usize {
        self.n.get() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// `s_k` for `1 <= k <= n`.
    pub fn sign(&self, k: usize) -> i8 {
        assert!(k >= 1 && k <= self.len(), "index {k} outside 1..={}", self.len());
        let i = k - 1;
        if self.words[i >> 6] >> (i & 63) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn signs(&self) -> impl Iterator<Item = i8> + '_ {
        (1..=self.len()).map(move |k| self.sign(k))
    }

    pub fn negative_count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// The vector `-s`. Only used for tests and diagnostics.
    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.len() % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        Self {
            n: self.n,
            a: self.a,
            words,
        }
    }
}

/// `sum_k u_k v_k`, computed as `n - 2 * popcount(u XOR v)`.
pub fn correlation(u: &SignVector, v: &SignVector) -> Result<i64> {
    if u.n.get() != v.n.get() {
        return Err(Error::LengthMismatch {
            left: u.n.get(),
            right: v.n.get(),
        });
    }
    Ok(u.n.get() as i64 - 2 * xor_popcount(&u.words, &v.words) as i64)
}

#[inline]
pub(crate) fn xor_popcount(x: &[u64], y: &[u64]) -> u64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a ^ b).count_ones() as u64)
        .sum()
}

/// One entry of `A^T A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaRecord {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    /// Raw signed correlation.
    pub t: i64,
    pub sigma: u64,
    /// `||a^{-1} b||`, present for prime `n` and nonzero `a`, `b`.
    pub d: Option<u64>,
}

pub fn sigma_exact(a: i64, b: i64, n: &Modulus) -> SigmaRecord {
    let u = SignVector::new(a, n);
    let v = SignVector::new(b, n);
    let t = correlation(&u, &v).expect("same modulus");
    let d = class_ratio(a, b, n)
        .ok()
        .map(|r| norm_of_residue(r, n.get()));
    SigmaRecord {
        n: n.get(),
        a: u.a,
        b: v.a,
        t,
        sigma: t.unsigned_abs(),
        d,
    }
}

/// The run `N = {k in [1, n-1] : s_k = -1}` for frequency 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegativeRun {
    pub first: u64,
    pub last: u64,
    pub count: u64,
}

impl NegativeRun {
    #[inline]
    pub fn contains(&self, k: u64) -> bool {
        k >= self.first && k <= self.last
    }
}

pub fn negative_set(n: &Modulus) -> NegativeRun {
    let n = n.get();
    // smallest k with 4k > n, largest k with 4k < 3n
    let first = n / 4 + 1;
    let last = (3 * n - 1) / 4;
    NegativeRun {
        first,
        last,
        count: last + 1 - first,
    }
}
