//! Prime generation: a cached small-prime table and a segmented sieve for
//! range scans, with a probable-prime walker above the sieve's comfort zone.

use std::sync::OnceLock;

use super::factor::TRIAL_DIVISION_BOUND;
use super::primality::is_prime_u64;

/// All primes below [`TRIAL_DIVISION_BOUND`], computed once per process.
pub fn small_primes() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| sieve_below(TRIAL_DIVISION_BOUND))
}

/// Simple sieve of Eratosthenes collecting primes < `bound`.
pub fn sieve_below(bound: u64) -> Vec<u64> {
    let bound = bound as usize;
    if bound <= 2 {
        return Vec::new();
    }
    let mut composite = vec![false; bound];
    let mut primes = Vec::new();
    for n in 2..bound {
        if !composite[n] {
            primes.push(n as u64);
            let mut m = n * n;
            while m < bound {
                composite[m] = true;
                m += n;
            }
        }
    }
    primes
}

/// Threshold above which the segmented sieve hands over to the walker.
const SIEVE_LIMIT: u64 = 1 << 40;

/// Call `f` for every prime in `[lo, hi]`, in increasing order.
///
/// Uses a segmented sieve up to 2^40 and a deterministic Miller-Rabin walker
/// beyond, so arbitrary u64 subranges work.
pub fn for_primes_in(lo: u64, hi: u64, mut f: impl FnMut(u64)) {
    if hi < 2 || hi < lo {
        return;
    }
    let lo = lo.max(2);
    if lo > SIEVE_LIMIT {
        for n in lo..=hi {
            if is_prime_u64(n) {
                f(n);
            }
        }
        return;
    }
    let sieve_hi = hi.min(SIEVE_LIMIT);
    segmented(lo, sieve_hi, &mut f);
    if hi > SIEVE_LIMIT {
        for n in (SIEVE_LIMIT + 1)..=hi {
            if is_prime_u64(n) {
                f(n);
            }
        }
    }
}

/// Primes in `[lo, hi]` as a vector.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for_primes_in(lo, hi, |p| out.push(p));
    out
}

fn segmented(lo: u64, hi: u64, f: &mut impl FnMut(u64)) {
    let root = (hi as f64).sqrt() as u64 + 2;
    let base: Vec<u64> = if root <= TRIAL_DIVISION_BOUND {
        small_primes()
            .iter()
            .copied()
            .take_while(|&p| p <= root)
            .collect()
    } else {
        sieve_below(root + 1)
    };

    const SEGMENT: u64 = 1 << 18;
    let mut start = lo;
    let mut mark = vec![false; SEGMENT as usize];
    while start <= hi {
        let end = hi.min(start + SEGMENT - 1);
        let len = (end - start + 1) as usize;
        mark[..len].fill(false);
        for &p in &base {
            if p * p > end {
                break;
            }
            let mut m = p.max((start + p - 1) / p) * p;
            if m < p * p {
                m = p * p;
            }
            while m <= end {
                mark[(m - start) as usize] = true;
                m += p;
            }
        }
        for i in 0..len {
            if !mark[i] {
                let n = start + i as u64;
                if n >= 2 {
                    f(n);
                }
            }
        }
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_sieve() {
        let direct: Vec<u64> = sieve_below(10_000);
        assert_eq!(primes_in(0, 9_999), direct);
        assert_eq!(direct.len(), 1229);
    }

    #[test]
    fn subrange_counts() {
        // pi(10^6) - pi(9*10^5) = 78498 - 71274
        assert_eq!(primes_in(900_000, 999_999).len(), 7224);
        assert_eq!(primes_in(1_000_000, 1_000_100), vec![1_000_003, 1_000_033, 1_000_037, 1_000_039, 1_000_081, 1_000_099]);
    }

    #[test]
    fn empty_and_edge_ranges() {
        assert!(primes_in(20, 10).is_empty());
        assert_eq!(primes_in(2, 2), vec![2]);
        assert_eq!(primes_in(0, 1), Vec::<u64>::new());
    }
}
