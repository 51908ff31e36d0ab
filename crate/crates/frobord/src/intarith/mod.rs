//! Exact integer arithmetic services: primality, factorization, divisor
//! enumeration, Euler phi, cyclotomic polynomials, modular exponentiation.

pub mod cyclotomic;
pub mod factor;
pub mod poly;
pub mod primality;
pub mod primes;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

pub use cyclotomic::{cyclotomic_poly, cyclotomic_value, divisors_of_small};
pub use factor::{
    factor_budget, factor_u64, factorize, factorize_with_budget, set_factor_budget, set_rho_seed,
    FactoredInteger, DEFAULT_BUDGET, TRIAL_DIVISION_BOUND,
};
pub use poly::IntPolynomial;
pub use primality::{is_prime, is_prime_u64, Primality};

/// All divisors of `f` in strictly increasing order; with `limit`, only the
/// divisors `<= limit`.
///
/// The bounded form proceeds by a sorted merge over the exponent lattice:
/// every intermediate list stays truncated at the limit, so the cost is
/// proportional to the emitted count plus the lattice walk, and divisors
/// above the limit are never materialized.
pub fn divisors(f: &FactoredInteger, limit: Option<&BigUint>) -> Vec<BigUint> {
    if let Some(limit) = limit {
        if limit < &BigUint::one() {
            return Vec::new();
        }
    }
    let mut acc = vec![BigUint::one()];
    for (p, e) in f.factors() {
        let mut lists: Vec<Vec<BigUint>> = Vec::with_capacity(*e as usize + 1);
        lists.push(acc);
        for k in 1..=*e {
            let prev = &lists[(k - 1) as usize];
            let mut next = Vec::with_capacity(prev.len());
            for d in prev {
                let v = d * p;
                if let Some(limit) = limit {
                    if &v > limit {
                        break;
                    }
                }
                next.push(v);
            }
            lists.push(next);
        }
        acc = merge_sorted(lists);
    }
    acc
}

fn merge_sorted(mut lists: Vec<Vec<BigUint>>) -> Vec<BigUint> {
    // Lists are few (exponent + 1); a repeated two-way merge is fine.
    let mut acc = lists.remove(0);
    for list in lists {
        let mut merged = Vec::with_capacity(acc.len() + list.len());
        let (mut i, mut j) = (0, 0);
        while i < acc.len() && j < list.len() {
            if acc[i] <= list[j] {
                merged.push(acc[i].clone());
                i += 1;
            } else {
                merged.push(list[j].clone());
                j += 1;
            }
        }
        merged.extend_from_slice(&acc[i..]);
        merged.extend_from_slice(&list[j..]);
        acc = merged;
    }
    acc
}

/// Euler's totient from the factorization: prod (p-1) p^(e-1).
pub fn euler_phi(f: &FactoredInteger) -> BigUint {
    let mut acc = BigUint::one();
    for (p, e) in f.factors() {
        acc *= (p - 1u32) * p.pow(e - 1);
    }
    acc
}

/// base^exp mod modulus by square-and-multiply; negative bases allowed.
pub fn pow_mod(base: &BigInt, exp: &BigUint, modulus: &BigUint) -> BigUint {
    assert!(!modulus.is_zero(), "zero modulus");
    let m = BigInt::from(modulus.clone());
    let mut b = base % &m;
    if b.is_negative() {
        b += &m;
    }
    b.to_biguint().unwrap().modpow(exp, modulus)
}

/// Walk the divisor lattice of a u64-factored integer, invoking `visit`
/// with each divisor `d <= limit` and its totient phi(d).
///
/// Subtrees whose partial product already exceeds the limit are pruned, so
/// the walk touches only candidates at most one step beyond the cutoff.
pub fn walk_divisors_bounded(
    factors: &[(u64, u32)],
    limit: u128,
    mut visit: impl FnMut(u128, u128),
) {
    fn recurse(
        factors: &[(u64, u32)],
        i: usize,
        d: u128,
        phi: u128,
        limit: u128,
        visit: &mut impl FnMut(u128, u128),
    ) {
        if i == factors.len() {
            visit(d, phi);
            return;
        }
        let (p, e) = factors[i];
        let p = p as u128;
        recurse(factors, i + 1, d, phi, limit, visit);
        let mut dp = d;
        let mut phip = phi;
        for k in 1..=e {
            match dp.checked_mul(p) {
                Some(v) if v <= limit => dp = v,
                _ => return,
            }
            phip *= if k == 1 { p - 1 } else { p };
            recurse(factors, i + 1, dp, phip, limit, visit);
        }
    }
    recurse(factors, 0, 1, 1, limit, &mut visit);
}

/// Divisors `<= limit` of a u64-factored integer, ascending.
pub fn divisors_u128_up_to(factors: &[(u64, u32)], limit: u128) -> Vec<u128> {
    let mut out = Vec::new();
    walk_divisors_bounded(factors, limit, |d, _| out.push(d));
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn brute_divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n % d == 0).collect()
    }

    #[test]
    fn divisors_of_12() {
        let f = factorize(&BigUint::from(12u32)).unwrap();
        let got: Vec<u64> = divisors(&f, None)
            .into_iter()
            .map(|d| u64::try_from(d).unwrap())
            .collect();
        assert_eq!(got, brute_divisors(12));
        assert_eq!(got, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn divisors_of_one() {
        let f = FactoredInteger::one();
        assert_eq!(divisors(&f, None), vec![BigUint::one()]);
    }

    #[test]
    fn paper_divisor_count() {
        let f = factorize(&BigUint::from(117648u32)).unwrap();
        assert_eq!(divisors(&f, None).len(), 60);
        assert_eq!(f.divisor_count(), BigUint::from(60u32));
    }

    #[test]
    fn divisor_lists_match_brute_force() {
        // Deterministically sample values <= 10^6.
        let mut x = 1u64;
        for _ in 0..200 {
            x = super::primality::splitmix64(x);
            let n = x % 1_000_000 + 1;
            let f = factorize(&BigUint::from(n)).unwrap();
            let got: Vec<u64> = divisors(&f, None)
                .into_iter()
                .map(|d| u64::try_from(d).unwrap())
                .collect();
            assert_eq!(got, brute_divisors(n), "n = {n}");
            let count: u64 = f.factors().iter().map(|(_, e)| *e as u64 + 1).product();
            assert_eq!(got.len() as u64, count);
        }
    }

    #[test]
    fn limited_equals_filtered() {
        let mut x = 99u64;
        for _ in 0..100 {
            x = super::primality::splitmix64(x);
            let n = x % 720_720 + 1;
            let limit = x % n + 1;
            let f = factorize(&BigUint::from(n)).unwrap();
            let all = divisors(&f, None);
            let filtered: Vec<BigUint> = all
                .iter()
                .filter(|d| **d <= BigUint::from(limit))
                .cloned()
                .collect();
            assert_eq!(divisors(&f, Some(&BigUint::from(limit))), filtered);
            // And the u128 lattice walk agrees.
            let walk: Vec<u64> = divisors_u128_up_to(&f.factors_u64().unwrap(), limit as u128)
                .into_iter()
                .map(|d| d as u64)
                .collect();
            let filt64: Vec<u64> = filtered
                .iter()
                .map(|d| u64::try_from(d.clone()).unwrap())
                .collect();
            assert_eq!(walk, filt64);
        }
    }

    #[test]
    fn phi_small_values() {
        let phi = |n: u64| {
            euler_phi(&factorize(&BigUint::from(n)).unwrap())
        };
        assert_eq!(phi(1), BigUint::one());
        assert_eq!(phi(12), BigUint::from(4u32));
        assert_eq!(phi(8), BigUint::from(4u32));
    }

    #[test]
    fn phi_divisor_sum_identity() {
        // sum_{d | m} phi(d) = m for all m <= 10^4.
        for m in 1..=10_000u64 {
            let f = factorize(&BigUint::from(m)).unwrap();
            let total: BigUint = divisors(&f, None)
                .into_iter()
                .map(|d| euler_phi(&factorize(&d).unwrap()))
                .sum();
            assert_eq!(total, BigUint::from(m), "m = {m}");
        }
    }

    #[test]
    fn phi_from_lattice_walk_matches() {
        let f = factorize(&BigUint::from(720u32)).unwrap();
        let factors = f.factors_u64().unwrap();
        let mut seen = std::collections::HashMap::new();
        walk_divisors_bounded(&factors, u128::MAX, |d, phi| {
            seen.insert(d as u64, phi as u64);
        });
        for d in brute_divisors(720) {
            let phi_d = (1..=d).filter(|k| gcd(*k, d) == 1).count() as u64;
            assert_eq!(seen[&d], phi_d, "d = {d}");
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        super::factor::gcd_u64(a, b)
    }

    #[test]
    fn pow_mod_values() {
        let m = BigUint::from(1000u32);
        assert_eq!(
            pow_mod(&BigInt::from(2), &BigUint::from(10u32), &m),
            BigUint::from(24u32)
        );
        assert_eq!(
            pow_mod(&BigInt::from(7), &BigUint::zero(), &m),
            BigUint::one()
        );
        // Fermat: 307 is prime.
        assert_eq!(
            pow_mod(
                &BigInt::from(7),
                &BigUint::from(306u32),
                &BigUint::from(307u32)
            ),
            BigUint::one()
        );
        // Negative base reduced into range first.
        assert_eq!(
            pow_mod(&BigInt::from(-3), &BigUint::from(3u32), &BigUint::from(100u32)),
            BigUint::from(73u32)
        );
    }
}
