//! Search for the 3-smooth equality family: primes p = 1 + 2^(u+2) 3^v with
//! (p+1)/2 prime, verified against the exact one-third equality.

use super::{quad_phi_sum, ScanRecord};
use crate::error::Result;
use crate::intarith::factor::factor_budget;
use crate::intarith::{factor_u64, is_prime_u64};

/// Ascending 3-smooth integers up to `bound`, by the two-pointer merge over
/// the doubled and tripled prefixes of the sequence itself.
pub fn smooth_3_up_to(bound: u64) -> Vec<u64> {
    if bound < 1 {
        return Vec::new();
    }
    let mut list = vec![1u64];
    let (mut i2, mut i3) = (0usize, 0usize);
    loop {
        let x = 2 * list[i2];
        let y = 3 * list[i3];
        let next = x.min(y);
        if next > bound {
            break;
        }
        if next == x {
            i2 += 1;
        }
        if next == y {
            i3 += 1;
        }
        list.push(next);
    }
    list
}

/// Primes p = T + 1 with T = 2^a 3^b <= t_bound, a >= 2, and (p+1)/2 prime,
/// that attain the one-third equality exactly. The cheap (p+1)/2 primality
/// test runs before the divisor-sum verification. Records carry the
/// factorizations of p - 1 and p + 1.
pub fn friable_search(t_bound: u64) -> Result<Vec<ScanRecord>> {
    assert!(t_bound >= 12, "the first admissible T is 12");
    let echo = format!("friable t_bound={t_bound}");
    let mut out = Vec::new();
    let mut budget = factor_budget();
    for t in smooth_3_up_to(t_bound) {
        if t % 4 != 0 {
            continue;
        }
        let p = t + 1;
        if !is_prime_u64(p) || !is_prime_u64((p + 1) / 2) {
            continue;
        }
        if 3 * quad_phi_sum(p) != (p - 1) as u128 {
            continue;
        }
        out.push(ScanRecord::Friable {
            p,
            pm1: factor_u64(p - 1, &mut budget)?,
            pp1: factor_u64(p + 1, &mut budget)?,
            params: echo.clone(),
        });
    }
    Ok(out)
}
