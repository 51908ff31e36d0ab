// Variant experiment: the printed batch program applied verbatim to np=4
// excludes only d | p-1 and d | (p^4-1)/(p-1).
use frobord::forbidden::m_factorization_u64;
use frobord::intarith::{walk_divisors_bounded, primes};

fn main() {
    let kappa: u32 = std::env::args().nth(1).unwrap().parse().unwrap();
    let mut best = f64::MAX;
    let mut argmin = 0u64;
    for p in primes::primes_in(1_000_000, 10_000_000) {
        let mut budget = u64::MAX;
        let factors = m_factorization_u64(4, p, &mut budget).unwrap();
        let m = (p as u128) - 1;
        let big_m = (p as u128).pow(4) - 1;
        let mm = big_m / m;
        let cutoff = (p as u128).pow(kappa);
        let mut s: u128 = 0;
        walk_divisors_bounded(&factors, cutoff, |d, _| {
            if m % d != 0 && mm % d != 0 {
                s += d;
            }
        });
        if s == 0 { continue; }
        let c = ((big_m as f64).ln() - (s as f64).ln()) / (p as f64).ln();
        if c < best { best = c; argmin = p; }
    }
    println!("two-exclusion np=4 kappa={kappa}: C_min = {best:.6} at {argmin}");
}
