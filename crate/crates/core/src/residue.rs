//! Exact arithmetic in `Z/nZ`.
//!
//! Every number-theoretic routine in the crate goes through [`Modulus`]: it
//! carries `n` together with a cached primality flag, so prime-only code paths
//! can reject composite moduli without re-testing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported modulus.
pub const MAX_MODULUS: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    n: u64,
    prime: bool,
}

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n > MAX_MODULUS {
            return Err(Error::OutOfRange {
                value: n,
                reason: "modulus exceeds 2^32",
            });
        }
        let prime = is_prime(n)?;
        Ok(Self { n, prime })
    }

    #[inline]
    pub fn get(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn is_prime(&self) -> bool {
        self.prime
    }

    /// Representative of `x` in `[0, n)`.
    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.n as i64) as u64
    }

    /// `x * y mod n` without overflow for the supported range.
    #[inline]
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        ((x as u128 * y as u128) % self.n as u128) as u64
    }

    pub fn require_prime(&self) -> Result<()> {
        if self.prime {
            Ok(())
        } else {
            Err(Error::CompositeModulus(self.n))
        }
    }

    /// Reduces `a` and rejects the zero class.
    pub fn nonzero(&self, a: i64) -> Result<u64> {
        match self.reduce(a) {
            0 => Err(Error::ZeroFrequency(self.n)),
            r => Ok(r),
        }
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.n)
    }
}

/// Deterministic trial division; adequate for `n <= 2^32`.
pub fn is_prime(n: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::OutOfRange {
            value: n,
            reason: "primality is defined for n >= 2",
        });
    }
    if n < 4 {
        return Ok(true);
    }
    if n % 2 == 0 || n % 3 == 0 {
        return Ok(false);
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return Ok(false);
        }
        d += 6;
    }
    Ok(true)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `n` by the extended Euclidean algorithm, so composite
/// moduli work whenever `gcd(a, n) = 1`.
pub fn mod_inverse(a: i64, n: &Modulus) -> Result<u64> {
    let m = n.get() as i128;
    let r = n.reduce(a) as i128;
    if r == 0 {
        return Err(Error::NotInvertible { a, n: n.get() });
    }
    let (mut old_r, mut cur_r) = (r, m);
    let (mut old_s, mut cur_s) = (1i128, 0i128);
    while cur_r != 0 {
        let q = old_r / cur_r;
        (old_r, cur_r) = (cur_r, old_r - q * cur_r);
        (old_s, cur_s) = (cur_s, old_s - q * cur_s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { a, n: n.get() });
    }
    Ok(old_s.rem_euclid(m) as u64)
}

/// `min(r, n - r)` for `r = x mod n`.
#[inline]
pub fn toroidal_norm(x: i64, n: &Modulus) -> u64 {
    norm_of_residue(n.reduce(x), n.get())
}

#[inline]
pub(crate) fn norm_of_residue(r: u64, n: u64) -> u64 {
    r.min(n - r)
}

/// `a^{-1} b mod n`, the quantity that determines `Sigma_{a,b}` for prime `n`.
pub fn class_ratio(a: i64, b: i64, n: &Modulus) -> Result<u64> {
    n.require_prime()?;
    n.nonzero(a)?;
    let b = n.nonzero(b)?;
    Ok(n.mul(mod_inverse(a, n)?, b))
}

/// Primes `<= limit`, by sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Distinct prime divisors of `n` in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
