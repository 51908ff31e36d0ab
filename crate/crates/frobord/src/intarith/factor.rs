//! Integer factorization: trial division by a fixed small-prime table, then
//! Brent's variant of Pollard rho with deterministically seeded parameters.
//!
//! Every run is reproducible: the rho polynomial constants are derived from a
//! process-wide seed (settable once by the CLI) and the input itself, never
//! from OS entropy. A global iteration budget turns pathological inputs into
//! [`Error::BudgetExceeded`] instead of nontermination.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primality::{
    is_prime, is_prime_u64, mul_mod_u64, splitmix64, splitmix_fold, Primality,
};
use super::primes::small_primes;
use crate::error::{Error, Result};

/// Trial division covers all prime factors below this bound.
pub const TRIAL_DIVISION_BOUND: u64 = 100_000;

/// Default rho iteration budget per `factorize` call.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

static RHO_SEED: AtomicU64 = AtomicU64::new(0);
static BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_BUDGET);

/// Set the process-wide seed mixed into every rho parameter derivation.
pub fn set_rho_seed(seed: u64) {
    RHO_SEED.store(seed, Ordering::Relaxed);
}

/// Set the process-wide rho iteration budget per `factorize` call.
pub fn set_factor_budget(budget: u64) {
    BUDGET.store(budget.max(1), Ordering::Relaxed);
}

pub fn factor_budget() -> u64 {
    BUDGET.load(Ordering::Relaxed)
}

/// A nonnegative integer together with its certified prime factorization,
/// the currency of all divisor enumeration.
///
/// Invariants: the product of `prime^exponent` equals `value` (value 1 has an
/// empty list), primes are strictly increasing and certified by the primality
/// test, and no exponent is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
    /// True when some listed factor above 2^64 is only a probable prime.
    probable: bool,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger {
            value: BigUint::one(),
            factors: Vec::new(),
            probable: false,
        }
    }

    /// Assemble from a factor list, checking the type invariants.
    pub fn from_factors(factors: Vec<(BigUint, u32)>) -> Result<Self> {
        let mut value = BigUint::one();
        let mut probable = false;
        for window in factors.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(Error::SpecInvalid(
                    "factor list not strictly increasing".into(),
                ));
            }
        }
        for (p, e) in &factors {
            if *e == 0 {
                return Err(Error::SpecInvalid("zero exponent in factor list".into()));
            }
            match is_prime(p) {
                Primality::Prime => {}
                Primality::ProbablePrime => probable = true,
                Primality::Composite => {
                    return Err(Error::SpecInvalid(format!("{p} is not prime")))
                }
            }
            value *= p.pow(*e);
        }
        Ok(FactoredInteger {
            value,
            factors,
            probable,
        })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// True when some factor above 2^64 was only certified probabilistically.
    pub fn has_probable_factor(&self) -> bool {
        self.probable
    }

    /// Number of divisors, prod (e_i + 1).
    pub fn divisor_count(&self) -> BigUint {
        self.factors
            .iter()
            .map(|(_, e)| BigUint::from(*e as u64 + 1))
            .product()
    }

    /// Factor list narrowed to u64 primes; `None` if some prime does not fit.
    pub fn factors_u64(&self) -> Option<Vec<(u64, u32)>> {
        self.factors
            .iter()
            .map(|(p, e)| p.to_u64().map(|p| (p, *e)))
            .collect()
    }

    /// Merge another factorization into this one (multiplies the values).
    pub fn merge(&self, other: &FactoredInteger) -> FactoredInteger {
        let mut factors = self.factors.clone();
        for (p, e) in &other.factors {
            match factors.binary_search_by(|(q, _)| q.cmp(p)) {
                Ok(i) => factors[i].1 += e,
                Err(i) => factors.insert(i, (p.clone(), *e)),
            }
        }
        FactoredInteger {
            value: &self.value * &other.value,
            factors,
            probable: self.probable || other.probable,
        }
    }
}

/// Complete prime factorization of `n >= 1`.
///
/// Trial division by every prime below [`TRIAL_DIVISION_BOUND`], then seeded
/// Brent rho on what remains. Fails with [`Error::BudgetExceeded`] when the
/// rho budget runs out, which signals an input beyond desk scale.
pub fn factorize(n: &BigUint) -> Result<FactoredInteger> {
    if n.is_zero() {
        return Err(Error::SpecInvalid("cannot factor 0".into()));
    }
    let mut budget = factor_budget();
    factorize_with_budget(n, &mut budget)
}

/// Factorize drawing iterations from an external budget counter, so one
/// logical operation spanning several calls shares a single cap.
pub fn factorize_with_budget(n: &BigUint, budget: &mut u64) -> Result<FactoredInteger> {
    if let Some(small) = n.to_u64() {
        let factors = factor_u64(small, budget)?;
        return Ok(FactoredInteger {
            value: n.clone(),
            factors: factors
                .into_iter()
                .map(|(p, e)| (BigUint::from(p), e))
                .collect(),
            probable: false,
        });
    }

    let mut rest = n.clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for &p in small_primes() {
        if BigUint::from(p).pow(2) > rest {
            break;
        }
        let big_p = BigUint::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&big_p);
            if r.is_zero() {
                rest = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            factors.push((big_p, e));
        }
        if rest.is_one() {
            break;
        }
    }

    let mut probable = false;
    if !rest.is_one() {
        let mut stack = vec![rest];
        while let Some(m) = stack.pop() {
            if let Some(small) = m.to_u64() {
                for (p, e) in factor_u64(small, budget)? {
                    push_factor(&mut factors, BigUint::from(p), e);
                }
                continue;
            }
            match is_prime(&m) {
                Primality::Prime => push_factor(&mut factors, m, 1),
                Primality::ProbablePrime => {
                    probable = true;
                    push_factor(&mut factors, m, 1);
                }
                Primality::Composite => {
                    let d = brent_rho_big(&m, budget)?;
                    let q = &m / &d;
                    stack.push(d);
                    stack.push(q);
                }
            }
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(FactoredInteger {
        value: n.clone(),
        factors,
        probable,
    })
}

fn push_factor(factors: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32) {
    match factors.iter_mut().find(|(q, _)| *q == p) {
        Some(entry) => entry.1 += e,
        None => factors.push((p, e)),
    }
}

/// Factor a u64, drawing rho iterations from `budget`.
pub fn factor_u64(n: u64, budget: &mut u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::SpecInvalid("cannot factor 0".into()));
    }
    let mut rest = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for &p in small_primes() {
        if p.saturating_mul(p) > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        if rest < TRIAL_DIVISION_BOUND * TRIAL_DIVISION_BOUND || is_prime_u64(rest) {
            // Either below the square of the trial bound (hence prime) or certified.
            factors.push((rest, 1));
        } else {
            let mut stack = vec![rest];
            while let Some(m) = stack.pop() {
                if is_prime_u64(m) {
                    match factors.iter_mut().find(|(q, _)| *q == m) {
                        Some(entry) => entry.1 += 1,
                        None => factors.push((m, 1)),
                    }
                    continue;
                }
                let d = brent_rho_u64(m, budget)?;
                stack.push(d);
                stack.push(m / d);
            }
        }
    }
    factors.sort_unstable();
    Ok(factors)
}

/// Brent's cycle-finding rho on a u64 composite with no factor below the
/// trial bound. Returns a proper divisor.
fn brent_rho_u64(n: u64, budget: &mut u64) -> Result<u64> {
    debug_assert!(!is_prime_u64(n) && n > 1);
    if n % 2 == 0 {
        return Ok(2);
    }
    let mut attempt = 0u64;
    loop {
        let mix = splitmix64(RHO_SEED.load(Ordering::Relaxed) ^ n ^ attempt.wrapping_mul(0x9e37));
        let c = mix % (n - 3) + 1;
        let x0 = splitmix64(mix) % n;
        if let Some(d) = brent_round_u64(n, c, x0, budget)? {
            return Ok(d);
        }
        attempt += 1;
    }
}

fn brent_round_u64(n: u64, c: u64, x0: u64, budget: &mut u64) -> Result<Option<u64>> {
    let f = |x: u64| {
        let y = mul_mod_u64(x, x, n);
        let y = y + c;
        if y >= n {
            y - n
        } else {
            y
        }
    };
    let mut y = x0;
    let mut r: u64 = 1;
    let mut q: u64 = 1;
    let mut g: u64 = 1;
    let mut x = y;
    let mut ys = y;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k: u64 = 0;
        while k < r && g == 1 {
            ys = y;
            let lim = BATCH.min(r - k);
            if *budget < lim {
                return Err(Error::BudgetExceeded {
                    value: BigUint::from(n),
                });
            }
            *budget -= lim;
            for _ in 0..lim {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += lim;
        }
        r *= 2;
    }
    if g == n {
        // Backtrack one step at a time to recover the factor.
        g = 1;
        while g == 1 {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
        }
    }
    if g == n {
        Ok(None)
    } else {
        Ok(Some(g))
    }
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent rho over BigUint, for composites above 2^64.
fn brent_rho_big(n: &BigUint, budget: &mut u64) -> Result<BigUint> {
    let one = BigUint::one();
    let mut attempt = 0u64;
    loop {
        let mix = splitmix64(RHO_SEED.load(Ordering::Relaxed) ^ splitmix_fold(n) ^ attempt);
        let c = BigUint::from(splitmix64(mix) | 1);
        let mut y = BigUint::from(mix >> 1);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k: u64 = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let lim = BATCH.min(r - k);
                if *budget < lim {
                    return Err(Error::BudgetExceeded { value: n.clone() });
                }
                *budget -= lim;
                for _ in 0..lim {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += lim;
            }
            r *= 2;
        }
        if g == *n {
            g = one.clone();
            while g.is_one() {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
            }
        }
        if g != *n {
            return Ok(g);
        }
        attempt += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(n: u64, expect: &[(u64, u32)]) {
        let f = factorize(&BigUint::from(n)).unwrap();
        let got: Vec<(u64, u32)> = f.factors_u64().unwrap();
        assert_eq!(got, expect, "n = {n}");
        assert_eq!(f.value(), &BigUint::from(n));
    }

    #[test]
    fn paper_values() {
        // 7^6 - 1
        check(117648, &[(2, 4), (3, 2), (19, 1), (43, 1)]);
        check(1, &[]);
        // p - 1 for p = 100673
        check(100672, &[(2, 6), (11, 2), (13, 1)]);
    }

    #[test]
    fn reconstruction_below_1e6() {
        for n in 1..=1_000_000u64 {
            let mut budget = factor_budget();
            let factors = factor_u64(n, &mut budget).unwrap();
            let mut prod = 1u64;
            for &(p, e) in &factors {
                assert!(is_prime_u64(p), "{p} not prime in factorization of {n}");
                prod *= p.pow(e);
            }
            assert_eq!(prod, n);
        }
    }

    #[test]
    fn rho_on_semiprimes() {
        // Both factors above the trial bound.
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        check(p * q, &[(p, 1), (q, 1)]);
    }

    #[test]
    fn budget_exhaustion_reported() {
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(1_000_033u64);
        let n = &p * &q;
        let mut tiny = 4u64;
        match factorize_with_budget(&n, &mut tiny) {
            Err(Error::BudgetExceeded { .. }) => {}
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn big_factorization_round_trips() {
        // (2^89 - 1) * 2^4 * 3
        let m89 = (BigUint::one() << 89u32) - BigUint::one();
        let n = &m89 * BigUint::from(48u32);
        let f = factorize(&n).unwrap();
        assert_eq!(f.value(), &n);
        assert!(f.has_probable_factor());
        assert_eq!(
            f.factors(),
            &[
                (BigUint::from(2u32), 4),
                (BigUint::from(3u32), 1),
                (m89, 1)
            ]
        );
    }
}
