//! Arithmetic in a prime field F_q.
//!
//! Elements are plain `u64` values in `[0, q)`; a [`PrimeField`] carries the
//! modulus and performs every operation with the result reduced back into
//! range. Products go through 128-bit intermediates, so any prime below 2^63
//! is safe.

use rand::Rng;

use crate::error::{Error, Result};

/// The field F_q for a prime q. Copyable; treat it as a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Builds F_q, rejecting composite moduli. Prime powers are rejected on
    /// purpose: matrix code here only knows prime fields.
    pub fn new(q: u64) -> Result<Self> {
        if q >= (1 << 63) || !is_prime_u64(q) {
            return Err(Error::NonPrimeModulus(q));
        }
        Ok(PrimeField { q })
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Checks that `x` is a valid element value.
    pub fn check(&self, x: u64) -> Result<u64> {
        if x < self.q {
            Ok(x)
        } else {
            Err(Error::ElementOutOfRange { value: x, q: self.q })
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.q);
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        debug_assert!(base < self.q);
        let mut acc = 1 % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat: x^(q-2). Zero is an error.
    pub fn inv(&self, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(x, self.q - 2))
    }

    /// Uniform element. Rejection sampling from the smallest power-of-two
    /// range covering [0, q), so there is no modulo bias.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let mask = if self.q.is_power_of_two() {
            self.q - 1
        } else {
            self.q.next_power_of_two() - 1
        };
        loop {
            let r = rng.next_u64() & mask;
            if r < self.q {
                return r;
            }
        }
    }

    /// Uniform element of [1, q).
    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        loop {
            let r = self.sample(rng);
            if r != 0 {
                return r;
            }
        }
    }
}

/// Deterministic Miller-Rabin, exact for all u64 with the fixed base set.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
