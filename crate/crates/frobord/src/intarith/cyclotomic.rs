//! Cyclotomic polynomials by exact division, memoized per process.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;

use super::poly::IntPolynomial;

/// Ascending divisors of `n` (trial loop; inputs here are tiny).
pub fn divisors_of_small(n: u64) -> Vec<u64> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

/// The δ-th cyclotomic polynomial, computed as
/// (X^δ − 1) / ∏_{d | δ, d < δ} Φ_d and cached for the life of the process.
pub fn cyclotomic_poly(delta: u64) -> IntPolynomial {
    assert!(delta >= 1, "cyclotomic index must be positive");
    static CACHE: RwLock<Option<HashMap<u64, IntPolynomial>>> = RwLock::new(None);
    if let Some(map) = CACHE.read().unwrap().as_ref() {
        if let Some(p) = map.get(&delta) {
            return p.clone();
        }
    }
    let mut result = IntPolynomial::x_pow_minus_one(delta as usize);
    for d in divisors_of_small(delta) {
        if d == delta {
            continue;
        }
        result = result.exact_div(&cyclotomic_poly(d));
    }
    let mut guard = CACHE.write().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert(delta, result.clone());
    result
}

/// Φ_δ(p) in exact arithmetic.
pub fn cyclotomic_value(delta: u64, p: &BigInt) -> BigInt {
    cyclotomic_poly(delta).eval(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(cyclotomic_poly(6), IntPolynomial::from_i64(&[1, -1, 1]));
        // Oracle: X^12 - 1 divided by the product of the proper cyclotomics.
        let mut prod = IntPolynomial::one();
        for d in [1u64, 2, 3, 4, 6] {
            prod = prod.mul(&cyclotomic_poly(d));
        }
        let expected = IntPolynomial::x_pow_minus_one(12).exact_div(&prod);
        assert_eq!(expected, IntPolynomial::from_i64(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_poly(12), expected);
    }

    #[test]
    fn values() {
        assert_eq!(cyclotomic_value(1, &BigInt::from(97)), BigInt::from(96));
        assert_eq!(cyclotomic_value(6, &BigInt::from(7)), BigInt::from(43));
        assert_eq!(cyclotomic_value(3, &BigInt::from(17)), BigInt::from(307));
    }

    #[test]
    fn product_identity() {
        // prod_{δ | h} Φ_δ(p) = p^h − 1 for h ≤ 12 and primes p < 1000.
        for h in 1..=12u64 {
            for p in crate::intarith::primes::primes_in(2, 999) {
                let bp = BigInt::from(p);
                let mut prod = BigInt::one();
                for d in divisors_of_small(h) {
                    prod *= cyclotomic_value(d, &bp);
                }
                assert_eq!(prod, bp.pow(h as u32) - 1, "h={h} p={p}");
            }
        }
    }

    #[test]
    fn poly_eval_agrees_with_value() {
        for delta in 1..=12u64 {
            let poly = cyclotomic_poly(delta);
            for p in crate::intarith::primes::primes_in(2, 999) {
                let bp = BigInt::from(p);
                assert_eq!(poly.eval(&bp), cyclotomic_value(delta, &bp));
            }
        }
    }
}
