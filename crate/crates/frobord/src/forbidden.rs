//! Forbidden divisors of p^h - 1 and the candidate set of divisors that can
//! still realize an order below p.
//!
//! For each divisor delta of h, the integer D_{h,delta}(p) = (p^h - 1) /
//! Phi_delta(p) is off limits for the order of a full-rank element once p is
//! large. Divisors of p^h - 1 dividing none of these survive into the
//! candidate set.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::intarith::{
    cyclotomic_poly, cyclotomic_value, divisors, divisors_of_small, divisors_u128_up_to,
    factor_u64, factorize_with_budget, walk_divisors_bounded, FactoredInteger, IntPolynomial,
};
use crate::intarith::factor::factor_budget;

/// One forbidden divisor: its index delta, exact value, and defining polynomial.
#[derive(Debug, Clone)]
pub struct ForbiddenEntry {
    pub delta: u64,
    pub value: BigUint,
    pub polynomial: IntPolynomial,
}

/// The full family D_{h,delta}(p), one entry per divisor delta of h,
/// in ascending delta order.
#[derive(Debug, Clone)]
pub struct ForbiddenSet {
    pub h: u64,
    pub p: BigUint,
    pub entries: Vec<ForbiddenEntry>,
}

/// Divisors of p^h - 1 that are below p and divide no D_{h,delta}(p).
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub p: u64,
    pub h: u64,
    pub divisors: Vec<u128>,
}

/// D_{h,delta}(X) = (X^h - 1) / Phi_delta(X) for each delta | h, ascending.
pub fn forbidden_polynomials(h: u64) -> Vec<(u64, IntPolynomial)> {
    let full = IntPolynomial::x_pow_minus_one(h as usize);
    divisors_of_small(h)
        .into_iter()
        .map(|delta| (delta, full.exact_div(&cyclotomic_poly(delta))))
        .collect()
}

/// The forbidden divisors of p^h - 1 with their defining polynomials.
pub fn forbidden_divisors(h: u64, p: &BigUint) -> ForbiddenSet {
    let bp = BigInt::from(p.clone());
    let entries = forbidden_polynomials(h)
        .into_iter()
        .map(|(delta, polynomial)| {
            let value = polynomial.eval(&bp).to_biguint().expect("D value negative");
            ForbiddenEntry {
                delta,
                value,
                polynomial,
            }
        })
        .collect();
    ForbiddenSet {
        h,
        p: p.clone(),
        entries,
    }
}

/// All products prod_{delta in I} Phi_delta(X) over subsets I of the divisors
/// of h, deduplicated and sorted by degree, then coefficientwise.
pub fn polynomial_divisor_lattice(h: u64) -> Vec<IntPolynomial> {
    let divs = divisors_of_small(h);
    let mut out = vec![IntPolynomial::one()];
    for delta in divs {
        let phi = cyclotomic_poly(delta);
        let with: Vec<IntPolynomial> = out.iter().map(|f| f.mul(&phi)).collect();
        out.extend(with);
    }
    out.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
    out.dedup();
    out
}

/// Factorizations of Phi_delta(p) for every delta | h, sharing one budget.
fn cyclotomic_factorizations(h: u64, p: &BigUint) -> Result<Vec<(u64, FactoredInteger)>> {
    let bp = BigInt::from(p.clone());
    let mut budget = factor_budget();
    divisors_of_small(h)
        .into_iter()
        .map(|delta| {
            let value = cyclotomic_value(delta, &bp)
                .to_biguint()
                .expect("cyclotomic value negative");
            Ok((delta, factorize_with_budget(&value, &mut budget)?))
        })
        .collect()
}

/// The union over delta | h of the divisors of D_{h,delta}(p), ascending.
pub fn impossible_divisors(h: u64, p: &BigUint) -> Result<Vec<BigUint>> {
    let parts = cyclotomic_factorizations(h, p)?;
    let mut seen = std::collections::BTreeSet::new();
    for (delta, _) in &parts {
        // D_{h,delta} = product of the other cyclotomic parts.
        let mut d = FactoredInteger::one();
        for (other, f) in &parts {
            if other != delta {
                d = d.merge(f);
            }
        }
        seen.extend(divisors(&d, None));
    }
    Ok(seen.into_iter().collect())
}

/// Divisors of p^h - 1 dividing none of the D_{h,delta}(p), together with
/// the total divisor count of p^h - 1.
pub fn admissible_divisors(h: u64, p: &BigUint) -> Result<(Vec<BigUint>, u64)> {
    let parts = cyclotomic_factorizations(h, p)?;
    let mut full = FactoredInteger::one();
    for (_, f) in &parts {
        full = full.merge(f);
    }
    let total = full
        .divisor_count()
        .to_u64()
        .ok_or_else(|| Error::BudgetExceeded {
            value: full.value().clone(),
        })?;
    let impossible: std::collections::BTreeSet<BigUint> =
        impossible_divisors(h, p)?.into_iter().collect();
    let possible = divisors(&full, None)
        .into_iter()
        .filter(|d| !impossible.contains(d))
        .collect();
    Ok((possible, total))
}

/// e = +1 if p = 1 (mod 4), else -1: the value of kronecker(-4, p) for odd p.
pub fn quadratic_sign(p: u64) -> i64 {
    if p % 4 == 1 {
        1
    } else {
        -1
    }
}

/// The coprime-split factorization of p^2 - 1 for an odd prime p: the factor
/// lists of 2(p-e) and (p+e)/2 concatenated, where e = quadratic_sign(p).
/// The two parts are coprime, so the concatenation is a valid factorization.
pub fn coprime_split_factors(p: u64, budget: &mut u64) -> Result<Vec<(u64, u32)>> {
    debug_assert!(p > 2 && p % 2 == 1);
    let e = quadratic_sign(p);
    let a = if e == 1 { 2 * (p - 1) } else { 2 * (p + 1) };
    let b = if e == 1 { (p + 1) / 2 } else { (p - 1) / 2 };
    debug_assert_eq!(a as u128 * b as u128, p as u128 * p as u128 - 1);
    debug_assert_eq!(crate::intarith::factor::gcd_u64(a, b), 1);
    let mut factors = factor_u64(a, budget)?;
    factors.extend(factor_u64(b, budget)?);
    factors.sort_unstable();
    Ok(factors)
}

/// Factorization of p^h - 1 assembled from the factorizations of the
/// individual cyclotomic values; for h = 2 the coprime-split route is used.
/// Only primes that fit in u64 can appear for the supported (h, p) ranges.
pub fn m_factorization_u64(h: u64, p: u64, budget: &mut u64) -> Result<Vec<(u64, u32)>> {
    if h == 2 && p > 2 {
        return coprime_split_factors(p, budget);
    }
    let mut merged: Vec<(u64, u32)> = Vec::new();
    let bp = BigInt::from(p);
    for delta in divisors_of_small(h) {
        let value = cyclotomic_value(delta, &bp);
        let value = value.to_u64().ok_or_else(|| Error::BudgetExceeded {
            value: value.to_biguint().unwrap_or_default(),
        })?;
        for (q, e) in factor_u64(value, budget)? {
            match merged.binary_search_by_key(&q, |&(f, _)| f) {
                Ok(i) => merged[i].1 += e,
                Err(i) => merged.insert(i, (q, e)),
            }
        }
    }
    Ok(merged)
}

/// D_{h,delta}(p) values as u128, ascending delta. Panics if a value
/// overflows u128 (h and p far beyond the supported desk scale).
pub fn forbidden_values_u128(h: u64, p: u64) -> Vec<(u64, u128)> {
    let bp = BigInt::from(p);
    let phis: Vec<(u64, u128)> = divisors_of_small(h)
        .into_iter()
        .map(|delta| {
            let v = cyclotomic_value(delta, &bp)
                .to_u128()
                .expect("cyclotomic value exceeds u128");
            (delta, v)
        })
        .collect();
    phis.iter()
        .map(|&(delta, _)| {
            let mut d: u128 = 1;
            for &(other, v) in &phis {
                if other != delta {
                    d = d.checked_mul(v).expect("forbidden divisor exceeds u128");
                }
            }
            (delta, d)
        })
        .collect()
}

/// The candidate set: divisors D of p^h - 1 with D < p and D dividing no
/// D_{h,delta}(p). For h = 2 the enumeration walks the coprime-split
/// factorization exactly as the batch programs do.
pub fn candidate_set(h: u64, p: u64) -> Result<CandidateSet> {
    assert!(h >= 2, "candidate set needs h >= 2");
    let mut budget = factor_budget();
    let factors = if p == 2 {
        // The split trick needs odd p; 2^h - 1 is tiny anyway.
        factor_u64(2u64.pow(h as u32) - 1, &mut budget)?
    } else {
        m_factorization_u64(h, p, &mut budget)?
    };
    let forbidden = forbidden_values_u128(h, p);
    let mut divisors = divisors_u128_up_to(&factors, p as u128 - 1);
    divisors.retain(|&d| forbidden.iter().all(|&(_, f)| f % d != 0));
    Ok(CandidateSet { p, h, divisors })
}

/// Sum over the candidate set (with cutoff `limit`) of a function of each
/// divisor and its totient. This is the kernel shared by the density and
/// statistics scans; `forbidden` holds the D_{h,delta}(p) values.
pub fn candidate_sum<T>(
    factors: &[(u64, u32)],
    forbidden: &[(u64, u128)],
    limit: u128,
    mut term: impl FnMut(u128, u128) -> T,
    mut fold: impl FnMut(T),
) {
    walk_divisors_bounded(factors, limit, |d, phi| {
        if forbidden.iter().all(|&(_, f)| f % d != 0) {
            fold(term(d, phi));
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn forbidden_trivial_and_quadratic() {
        let set = forbidden_divisors(1, &big(11));
        assert_eq!(set.entries.len(), 1);
        assert_eq!(set.entries[0].value, big(1));

        let set = forbidden_divisors(2, &big(11));
        let values: Vec<u64> = set
            .entries
            .iter()
            .map(|e| e.value.to_u64().unwrap())
            .collect();
        // delta = 1 gives p + 1; delta = 2 gives p - 1.
        assert_eq!(values, vec![12, 10]);
    }

    #[test]
    fn forbidden_h6_p7() {
        let set = forbidden_divisors(6, &big(7));
        let values: Vec<u64> = set
            .entries
            .iter()
            .map(|e| e.value.to_u64().unwrap())
            .collect();
        assert_eq!(values, vec![19608, 14706, 2064, 2736]);
        let deltas: Vec<u64> = set.entries.iter().map(|e| e.delta).collect();
        assert_eq!(deltas, vec![1, 2, 3, 6]);
        for e in &set.entries {
            assert_eq!(big(117648) % &e.value, big(0));
        }
    }

    #[test]
    fn lattice_counts_and_members() {
        let l1 = polynomial_divisor_lattice(1);
        assert_eq!(l1.len(), 2);
        assert_eq!(l1[0], IntPolynomial::one());
        assert_eq!(l1[1], IntPolynomial::from_i64(&[-1, 1]));

        let l2 = polynomial_divisor_lattice(2);
        let expect: Vec<IntPolynomial> = [
            vec![1],
            vec![-1, 1],
            vec![1, 1],
            vec![-1, 0, 1],
        ]
        .iter()
        .map(|c| IntPolynomial::from_i64(c))
        .collect();
        assert_eq!(l2, expect);

        // All 15 polynomial divisors displayed for h = 6, plus X^6 - 1 itself.
        let l6 = polynomial_divisor_lattice(6);
        assert_eq!(l6.len(), 16);
        let displayed: Vec<IntPolynomial> = [
            vec![1],
            vec![-1, 1],
            vec![1, 1],
            vec![-1, 0, 1],
            vec![1, -1, 1],
            vec![-1, 2, -2, 1],
            vec![1, 0, 0, 1],
            vec![-1, 1, 0, -1, 1],
            vec![1, 1, 1],
            vec![-1, 0, 0, 1],
            vec![1, 2, 2, 1],
            vec![-1, -1, 0, 1, 1],
            vec![1, 0, 1, 0, 1],
            vec![-1, 1, -1, 1, -1, 1],
            vec![1, 1, 1, 1, 1, 1],
        ]
        .iter()
        .map(|c| IntPolynomial::from_i64(c))
        .collect();
        for d in &displayed {
            assert!(l6.contains(d), "missing {d}");
        }
        assert!(l6.contains(&IntPolynomial::x_pow_minus_one(6)));
    }

    #[test]
    fn impossible_h6_p7_is_the_52_list() {
        let got: Vec<u64> = impossible_divisors(6, &big(7))
            .unwrap()
            .into_iter()
            .map(|d| d.to_u64().unwrap())
            .collect();
        let expect: Vec<u64> = vec![
            1, 2, 3, 4, 6, 8, 9, 12, 16, 18, 19, 24, 36, 38, 43, 48, 57, 72, 76, 86, 114, 129,
            144, 152, 171, 172, 228, 258, 304, 342, 344, 387, 456, 516, 684, 688, 774, 817, 912,
            1032, 1368, 1634, 2064, 2451, 2736, 3268, 4902, 6536, 7353, 9804, 14706, 19608,
        ];
        assert_eq!(got.len(), 52);
        assert_eq!(got, expect);
    }

    #[test]
    fn impossible_small_cases() {
        let got: Vec<u64> = impossible_divisors(2, &big(3))
            .unwrap()
            .into_iter()
            .map(|d| d.to_u64().unwrap())
            .collect();
        assert_eq!(got, vec![1, 2, 4]);
        let got = impossible_divisors(1, &big(97)).unwrap();
        assert_eq!(got, vec![big(1)]);
    }

    #[test]
    fn admissible_h6_p7() {
        let (possible, total) = admissible_divisors(6, &big(7)).unwrap();
        let possible: Vec<u64> = possible.into_iter().map(|d| d.to_u64().unwrap()).collect();
        assert_eq!(total, 60);
        assert_eq!(
            possible,
            vec![1548, 3096, 6192, 13072, 29412, 39216, 58824, 117648]
        );
    }

    #[test]
    fn admissible_h2_p3() {
        let (possible, total) = admissible_divisors(2, &big(3)).unwrap();
        assert_eq!(total, 4);
        assert_eq!(possible, vec![big(8)]);
    }

    #[test]
    fn partition_into_impossible_and_possible() {
        for h in [2u64, 3, 6] {
            for p in crate::intarith::primes::primes_in(2, 199) {
                let bp = big(p);
                let (possible, total) = admissible_divisors(h, &bp).unwrap();
                let impossible = impossible_divisors(h, &bp).unwrap();
                assert_eq!(possible.len() + impossible.len(), total as usize, "h={h} p={p}");
                let all: std::collections::BTreeSet<_> =
                    possible.iter().chain(impossible.iter()).cloned().collect();
                assert_eq!(all.len(), total as usize, "h={h} p={p} overlap");
            }
        }
    }

    #[test]
    fn forbidden_product_identity() {
        // Every D divides p^h - 1, and the cyclotomic values multiply to it.
        for h in 1..=6u64 {
            for p in crate::intarith::primes::primes_in(2, 499) {
                let bp = BigInt::from(p);
                let m = bp.pow(h as u32) - 1;
                let mut prod = BigInt::one();
                for delta in divisors_of_small(h) {
                    prod *= cyclotomic_value(delta, &bp);
                }
                assert_eq!(prod, m, "h={h} p={p}");
                for e in forbidden_divisors(h, &big(p)).entries {
                    let v = BigInt::from(e.value);
                    assert_eq!(&m % v, BigInt::from(0), "h={h} p={p}");
                }
            }
        }
    }

    #[test]
    fn candidate_set_examples() {
        assert_eq!(candidate_set(2, 13).unwrap().divisors, vec![8]);
        assert_eq!(candidate_set(2, 100237).unwrap().divisors.len(), 3);
        assert_eq!(candidate_set(2, 100673).unwrap().divisors.len(), 489);
    }

    #[test]
    fn candidate_set_matches_brute_force() {
        for p in crate::intarith::primes::primes_in(2, 9999) {
            let m = p as u128 * p as u128 - 1;
            let mut expect = Vec::new();
            for d in 1..p as u128 {
                if m % d == 0 && (p as u128 - 1) % d != 0 && (p as u128 + 1) % d != 0 {
                    expect.push(d);
                }
            }
            assert_eq!(candidate_set(2, p).unwrap().divisors, expect, "p = {p}");
        }
    }

    #[test]
    fn candidate_members_hit_phi_h() {
        // For prime h, every candidate needs a prime of Phi_h(p) beyond what
        // p - 1 supplies: some q | Phi_h(p) with v_q(d) > v_q(p - 1). When q
        // is coprime to p - 1 this is plain divisibility; q = h is the gcd
        // caveat of the d1 d2 decomposition.
        let valuation = |mut n: u128, q: u128| {
            let mut v = 0;
            while n % q == 0 {
                n /= q;
                v += 1;
            }
            v
        };
        for h in [2u64, 3] {
            for p in crate::intarith::primes::primes_in(3, 999) {
                let bp = BigInt::from(p);
                let phi_h = cyclotomic_value(h, &bp).to_u64().unwrap();
                let mut budget = factor_budget();
                let phi_factors = factor_u64(phi_h, &mut budget).unwrap();
                for d in candidate_set(h, p).unwrap().divisors {
                    let ok = phi_factors.iter().any(|&(q, _)| {
                        valuation(d, q as u128) > valuation(p as u128 - 1, q as u128)
                    });
                    assert!(ok, "h={h} p={p} d={d}");
                }
            }
        }
    }
}
