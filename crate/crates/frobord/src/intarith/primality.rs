//! Primality testing: deterministic below 2^64, strong probable-prime above.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Outcome of a primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primality {
    Composite,
    /// Proven prime (always the case below 2^64).
    Prime,
    /// Passed a strong probabilistic test with error probability below 2^-128.
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

#[inline]
pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

// Sinclair's 7-base set: a deterministic Miller-Rabin witness set for all n < 2^64.
const MR_BASES_64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

fn sprp_u64(n: u64, base: u64) -> bool {
    let a = base % n;
    if a == 0 {
        return true;
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = pow_mod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality test for `n < 2^64`.
pub fn is_prime_u64(n: u64) -> bool {
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
    MR_BASES_64.iter().all(|&b| sprp_u64(n, b))
}

fn sprp_big(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let a = base % n;
    if a.is_zero() {
        return true;
    }
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Primality test for arbitrary-precision inputs.
///
/// Below 2^64 the answer is deterministic. Above, 64 Miller-Rabin rounds with
/// deterministically derived pseudo-random bases bound the error by 2^-128;
/// callers see the distinction through [`Primality::ProbablePrime`].
pub fn is_prime(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    if n.is_even() {
        return Primality::Composite;
    }
    // Cheap trial by a handful of small primes before the expensive rounds.
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let mut state = splitmix_fold(n) | 1;
    for _ in 0..64 {
        state = splitmix64(state);
        // Bases in [2, 2^64): far below n, hence valid witnesses.
        let base = BigUint::from((state >> 1) | 2);
        if !sprp_big(n, &base) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

#[inline]
pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic 64-bit digest of a big integer, used to seed per-input RNG streams.
pub(crate) fn splitmix_fold(n: &BigUint) -> u64 {
    n.iter_u64_digits().fold(0x243f6a8885a308d3, |acc, d| {
        splitmix64(acc ^ d)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn small_primes_match_trial_division() {
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), naive_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn known_values() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1093));
        // 100001 = 11 * 9091
        assert!(!is_prime_u64(100001));
        assert_eq!(100001u64 % 11, 0);
        assert!(is_prime_u64(0xffff_ffff_ffff_ffc5)); // largest prime < 2^64
    }

    #[test]
    fn big_path_flags_probable() {
        // 2^89 - 1 is a Mersenne prime.
        let m89 = (BigUint::one() << 89u32) - BigUint::one();
        assert_eq!(is_prime(&m89), Primality::ProbablePrime);
        let composite = &m89 * BigUint::from(3u32);
        assert_eq!(is_prime(&composite), Primality::Composite);
        assert_eq!(is_prime(&BigUint::from(1093u32)), Primality::Prime);
    }
}
