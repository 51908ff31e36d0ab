//! Chunked prime-range driver. The range is cut into fixed-width chunks
//! (independent of worker count), each chunk is mapped to a value, and the
//! values are folded in range order, so any reduction over them is
//! deterministic.

use crate::intarith::primes::primes_in;

/// Fixed chunk width; part of the determinism contract, not a tuning knob.
pub const CHUNK_WIDTH: u64 = 1 << 12;

/// Map every prime chunk of `[lo, hi]` through `f` (in parallel when the
/// `parallel` feature is on) and return the per-chunk outputs in range order.
pub fn map_prime_chunks<T, F>(lo: u64, hi: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[u64]) -> T + Sync,
{
    if hi < lo {
        return Vec::new();
    }
    let mut bounds = Vec::new();
    let mut start = lo;
    loop {
        let end = hi.min(start.saturating_add(CHUNK_WIDTH - 1));
        bounds.push((start, end));
        if end >= hi {
            break;
        }
        start = end + 1;
    }

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        bounds
            .par_iter()
            .map(|&(a, b)| f(&primes_in(a, b)))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        bounds.iter().map(|&(a, b)| f(&primes_in(a, b))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunked_primes_cover_the_range() {
        let chunks = map_prime_chunks(2, 300_000, |ps| ps.to_vec());
        let flat: Vec<u64> = chunks.into_iter().flatten().collect();
        assert_eq!(flat, primes_in(2, 300_000));
    }
}
