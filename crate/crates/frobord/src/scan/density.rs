//! Density scans and quadratic statistics: S_p sums over the candidate set,
//! the C(p) exponent and its range minima, the one-third bound audit, and
//! running-maxima scans.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::driver::map_prime_chunks;
use super::ScanRecord;
use crate::error::{Error, Result};
use crate::forbidden::{coprime_split_factors, forbidden_values_u128, m_factorization_u64};
use crate::intarith::factor::{factor_budget, factorize_with_budget};
use crate::intarith::walk_divisors_bounded;

/// Parameters of a density scan: abstract splitting type (n_p, g_p), prime
/// range, cutoff exponent kappa (candidates below p^kappa), and whether the
/// summand is D^{g_p} or phi(D).
#[derive(Debug, Clone, Copy)]
pub struct DensityParams {
    pub n_p: u32,
    pub g_p: u32,
    pub lo: u64,
    pub hi: u64,
    pub kappa: f64,
    pub phi_weight: bool,
}

/// Result of a density scan: the least C(p) over the range and where it
/// occurred; `sentinel` is the initial upper bound g_p (n_p - 1) + 1,
/// returned as `c_min` when every prime had an empty candidate set.
#[derive(Debug, Clone)]
pub struct DensityScanOutcome {
    pub c_min: f64,
    pub argmin_p: Option<u64>,
    pub sentinel: f64,
    pub per_prime: Vec<ScanRecord>,
}

/// Quadratic density statistics at one prime.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityStats {
    pub p: u64,
    pub phi_sum: u128,
    pub density: f64,
    pub delta: f64,
    pub c_stat: f64,
}

fn params_echo(p: &DensityParams) -> String {
    format!(
        "np={} gp={} range=[{},{}] kappa={} weight={}",
        p.n_p,
        p.g_p,
        p.lo,
        p.hi,
        p.kappa,
        if p.phi_weight { "phi" } else { "d^gp" }
    )
}

/// S_p and C(p) for one prime, or None if the candidate sum is empty.
/// The boolean marks a u128 overflow of the exact sum (beyond desk scale;
/// the logarithm falls back to a float accumulator).
fn prime_density(params: &DensityParams, p: u64, budget: &mut u64) -> Result<Option<(u128, f64)>> {
    let n_p = params.n_p as u64;
    let factors = m_factorization_u64(n_p, p, budget)?;
    let forbidden = forbidden_values_u128(n_p, p);
    let limit: u128 = if params.kappa == 1.0 {
        p as u128
    } else if params.kappa == 2.0 {
        (p as u128) * (p as u128)
    } else {
        (p as f64).powf(params.kappa).floor() as u128
    };
    let mut exact: u128 = 0;
    let mut overflow = false;
    let mut shadow: f64 = 0.0;
    walk_divisors_bounded(&factors, limit, |d, phi| {
        if forbidden.iter().all(|&(_, f)| f % d != 0) {
            let term = if params.phi_weight {
                phi
            } else {
                let mut t: u128 = 1;
                for _ in 0..params.g_p {
                    match t.checked_mul(d) {
                        Some(v) => t = v,
                        None => {
                            overflow = true;
                            t = u128::MAX;
                            break;
                        }
                    }
                }
                t
            };
            shadow += if params.phi_weight {
                phi as f64
            } else {
                (d as f64).powi(params.g_p as i32)
            };
            match exact.checked_add(term) {
                Some(v) => exact = v,
                None => overflow = true,
            }
        }
    });
    if exact == 0 && !overflow {
        return Ok(None);
    }
    let ln_m = ((p as f64).powi(params.n_p as i32) - 1.0).ln();
    let ln_s = if overflow { shadow.ln() } else { (exact as f64).ln() };
    let c = (params.g_p as f64 * ln_m - ln_s) / (p as f64).ln();
    Ok(Some((if overflow { u128::MAX } else { exact }, c)))
}

/// The least value of C(p) over primes in the range, where
/// S_p / (p^{n_p} - 1)^{g_p} = p^{-C(p)}; primes with an empty candidate
/// set are skipped. Set `per_prime` to collect one record per contributing
/// prime.
pub fn density_scan(params: &DensityParams, per_prime: bool) -> Result<DensityScanOutcome> {
    assert!(params.n_p >= 2, "density scan needs residue degree >= 2");
    assert!(params.g_p >= 1 && params.kappa >= 1.0);
    if params.phi_weight {
        assert!(
            params.n_p == 2 && params.g_p == 1,
            "phi weighting is the quadratic n_p = 2, g_p = 1 variant"
        );
    }
    let sentinel = (params.g_p * (params.n_p - 1) + 1) as f64;
    let echo = params_echo(params);
    let chunks = map_prime_chunks(params.lo, params.hi, |primes| {
        let mut best: Option<(f64, u64)> = None;
        let mut records = Vec::new();
        let mut budget = factor_budget();
        for &p in primes {
            match prime_density(params, p, &mut budget) {
                Ok(Some((s, c))) => {
                    if per_prime {
                        records.push(ScanRecord::Density {
                            p,
                            s: u64::try_from(s).unwrap_or(u64::MAX),
                            c,
                            params: echo.clone(),
                        });
                    }
                    if best.map_or(true, |(bc, _)| c < bc) {
                        best = Some((c, p));
                    }
                }
                Ok(None) => {}
                Err(e) => return Err(e),
            }
        }
        Ok((best, records))
    });

    let mut c_min = sentinel;
    let mut argmin_p = None;
    let mut per_prime_records = Vec::new();
    for chunk in chunks {
        let (best, records) = chunk?;
        per_prime_records.extend(records);
        if let Some((c, p)) = best {
            if c < c_min {
                c_min = c;
                argmin_p = Some(p);
            }
        }
    }
    Ok(DensityScanOutcome {
        c_min,
        argmin_p,
        sentinel,
        per_prime: per_prime_records,
    })
}

/// The phi-weighted variant of the quadratic density scan.
pub fn phi_variant_scan(lo: u64, hi: u64, per_prime: bool) -> Result<DensityScanOutcome> {
    density_scan(
        &DensityParams {
            n_p: 2,
            g_p: 1,
            lo,
            hi,
            kappa: 1.0,
            phi_weight: true,
        },
        per_prime,
    )
}

/// Exact sum of phi(D) over the quadratic candidate set of p (divisors of
/// p^2 - 1 below p dividing neither p - 1 nor p + 1), by the coprime-split
/// walk.
pub fn quad_phi_sum(p: u64) -> u128 {
    if p == 2 {
        // Divisors of 3 below 2 all divide p - 1.
        return 0;
    }
    let mut budget = factor_budget();
    let factors = coprime_split_factors(p, &mut budget)
        .expect("p^2 - 1 factors within the u64 trial+rho budget");
    let m1 = (p - 1) as u128;
    let p1 = (p + 1) as u128;
    let mut sum: u128 = 0;
    walk_divisors_bounded(&factors, p as u128, |d, phi| {
        if m1 % d != 0 && p1 % d != 0 {
            sum += phi;
        }
    });
    sum
}

/// Density, Delta and C statistics of the quadratic candidate set at p.
pub fn quad_density_stats(p: u64) -> DensityStats {
    let phi_sum = quad_phi_sum(p);
    let pf = p as f64;
    let density = phi_sum as f64 / (pf * pf - 1.0);
    let delta = phi_sum as f64 / (pf - 1.0) - 1.0 / 3.0;
    let c_stat = density * pf / pf.ln();
    DensityStats {
        p,
        phi_sum,
        density,
        delta,
        c_stat,
    }
}

/// Quadratic density statistics for primes beyond u64 (exact arithmetic over
/// big integers; the factorizations are budget-capped).
#[derive(Debug, Clone, PartialEq)]
pub struct BigDensityStats {
    pub p: BigUint,
    pub phi_sum: BigUint,
    pub density: f64,
    pub delta: f64,
    pub c_stat: f64,
}

pub fn quad_density_stats_big(p: &BigUint) -> Result<BigDensityStats> {
    if let Some(small) = p.to_u64() {
        let s = quad_density_stats(small);
        return Ok(BigDensityStats {
            p: p.clone(),
            phi_sum: BigUint::from(s.phi_sum),
            density: s.density,
            delta: s.delta,
            c_stat: s.c_stat,
        });
    }
    let one = BigUint::one();
    let e_plus = (p % 4u32) == BigUint::from(1u32);
    let (a, b) = if e_plus {
        (2u32 * (p - &one), (p + &one) / 2u32)
    } else {
        (2u32 * (p + &one), (p - &one) / 2u32)
    };
    debug_assert_eq!(&a * &b, p * p - &one);
    debug_assert!(a.gcd(&b).is_one());
    let mut budget = factor_budget();
    let mut factors = factorize_with_budget(&a, &mut budget)?.factors().to_vec();
    factors.extend(factorize_with_budget(&b, &mut budget)?.factors().to_vec());
    factors.sort_by(|x, y| x.0.cmp(&y.0));

    let pm1 = p - &one;
    let pp1 = p + &one;
    let mut phi_sum = BigUint::zero();
    walk_big(&factors, 0, &one, &one, p, &mut |d, phi| {
        if !(&pm1 % d).is_zero() && !(&pp1 % d).is_zero() {
            phi_sum += phi;
        }
    });

    let pf = p.to_f64().ok_or_else(|| Error::BudgetExceeded {
        value: p.clone(),
    })?;
    let sf = phi_sum.to_f64().unwrap_or(f64::MAX);
    let density = sf / (pf * pf - 1.0);
    let delta = sf / (pf - 1.0) - 1.0 / 3.0;
    let c_stat = density * pf / pf.ln();
    Ok(BigDensityStats {
        p: p.clone(),
        phi_sum,
        density,
        delta,
        c_stat,
    })
}

fn walk_big(
    factors: &[(BigUint, u32)],
    i: usize,
    d: &BigUint,
    phi: &BigUint,
    limit: &BigUint,
    visit: &mut impl FnMut(&BigUint, &BigUint),
) {
    if i == factors.len() {
        visit(d, phi);
        return;
    }
    let (q, e) = &factors[i];
    walk_big(factors, i + 1, d, phi, limit, visit);
    let mut dq = d.clone();
    let mut phiq = phi.clone();
    for k in 1..=*e {
        dq *= q;
        if dq > *limit {
            return;
        }
        phiq *= if k == 1 {
            q - BigUint::one()
        } else {
            q.clone()
        };
        walk_big(factors, i + 1, &dq, &phiq, limit, visit);
    }
}

/// Primes in the range whose phi-sum falls strictly below the one-third
/// bound: 3 sum phi(D) < p - 1, compared exactly.
pub fn third_bound_audit(lo: u64, hi: u64) -> Vec<ScanRecord> {
    let echo = format!("audit range=[{lo},{hi}]");
    let chunks = map_prime_chunks(lo, hi, |primes| {
        primes
            .iter()
            .filter_map(|&p| {
                let s = quad_phi_sum(p);
                (3 * s < (p - 1) as u128).then(|| ScanRecord::Audit {
                    p,
                    phi_sum: u64::try_from(s).unwrap_or(u64::MAX),
                    params: echo.clone(),
                })
            })
            .collect::<Vec<_>>()
    });
    chunks.into_iter().flatten().collect()
}

/// Primes attaining the one-third bound exactly: 3 sum phi(D) = p - 1.
pub fn equality_scan(lo: u64, hi: u64) -> Vec<ScanRecord> {
    let echo = format!("equality range=[{lo},{hi}]");
    let chunks = map_prime_chunks(lo, hi, |primes| {
        primes
            .iter()
            .filter_map(|&p| {
                (3 * quad_phi_sum(p) == (p - 1) as u128).then(|| ScanRecord::Equality {
                    p,
                    params: echo.clone(),
                })
            })
            .collect::<Vec<_>>()
    });
    chunks.into_iter().flatten().collect()
}

/// Successive maxima of the C statistic over ascending primes from 3: one
/// record per prime whose C exceeds everything before it. Each chunk
/// prefilters its own prefix maxima; the sequential merge rescans those.
pub fn cmax_scan(bound: u64) -> Vec<ScanRecord> {
    assert!(bound >= 3);
    let echo = format!("cmax bound={bound}");
    let chunks = map_prime_chunks(3, bound, |primes| {
        let mut local_best = 0.0f64;
        let mut candidates = Vec::new();
        for &p in primes {
            let stats = quad_density_stats(p);
            if stats.c_stat > local_best {
                local_best = stats.c_stat;
                candidates.push(stats);
            }
        }
        candidates
    });
    let mut best = 0.0f64;
    let mut out = Vec::new();
    for stats in chunks.into_iter().flatten() {
        if stats.c_stat > best {
            best = stats.c_stat;
            out.push(ScanRecord::Cmax {
                p: stats.p,
                c: stats.c_stat,
                c_over_log_p: stats.c_stat / (stats.p as f64).ln(),
                params: echo.clone(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force S_p by direct divisibility tests over 1..p^kappa.
    fn brute_s(p: u64, n_p: u32, g_p: u32, kappa: u32, phi_weight: bool) -> u128 {
        let m = (p as u128).pow(n_p) - 1;
        let forbidden: Vec<u128> = forbidden_values_u128(n_p as u64, p)
            .into_iter()
            .map(|(_, d)| d)
            .collect();
        let limit = (p as u128).pow(kappa);
        let mut s = 0u128;
        for d in 1..=limit {
            if m % d == 0 && forbidden.iter().all(|&f| f % d != 0) {
                if phi_weight {
                    s += brute_phi(d);
                } else {
                    s += d.pow(g_p);
                }
            }
        }
        s
    }

    fn brute_phi(n: u128) -> u128 {
        let mut count = 0;
        for k in 1..=n {
            let mut a = k;
            let mut b = n;
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            if a == 1 {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn single_prime_examples() {
        // D_11 = {8}: S = 8, C = ln(120/8)/ln 11.
        let params = DensityParams {
            n_p: 2,
            g_p: 1,
            lo: 11,
            hi: 11,
            kappa: 1.0,
            phi_weight: false,
        };
        let out = density_scan(&params, true).unwrap();
        assert_eq!(out.argmin_p, Some(11));
        assert!((out.c_min - (120.0f64 / 8.0).ln() / 11f64.ln()).abs() < 1e-12);
        assert!((out.c_min - 1.1293).abs() < 1e-4);
        match &out.per_prime[0] {
            ScanRecord::Density { p, s, .. } => {
                assert_eq!((*p, *s), (11, 8));
            }
            other => panic!("unexpected {other:?}"),
        }

        // phi variant: S = phi(8) = 4.
        let out = phi_variant_scan(11, 11, false).unwrap();
        assert!((out.c_min - 30f64.ln() / 11f64.ln()).abs() < 1e-12);
        assert!((out.c_min - 1.41840).abs() < 1e-4);

        // All-empty range returns the sentinel 2.
        let out = phi_variant_scan(2, 7, false).unwrap();
        assert_eq!(out.c_min, 2.0);
        assert_eq!(out.argmin_p, None);
    }

    #[test]
    fn density_sums_match_brute_force() {
        for p in crate::intarith::primes::primes_in(3, 200) {
            for (n_p, g_p, kappa) in [(2, 1, 1), (3, 1, 1), (2, 2, 1), (4, 1, 2)] {
                let params = DensityParams {
                    n_p,
                    g_p,
                    lo: p,
                    hi: p,
                    kappa: kappa as f64,
                    phi_weight: false,
                };
                let mut budget = factor_budget();
                let got = prime_density(&params, p, &mut budget)
                    .unwrap()
                    .map(|(s, _)| s)
                    .unwrap_or(0);
                assert_eq!(
                    got,
                    brute_s(p, n_p, g_p, kappa, false),
                    "p={p} np={n_p} gp={g_p} kappa={kappa}"
                );
            }
            assert_eq!(quad_phi_sum(p), brute_s(p, 2, 1, 1, true), "phi sum p={p}");
        }
    }

    #[test]
    fn quadstat_small_prime() {
        let s = quad_density_stats(11);
        assert_eq!(s.phi_sum, 4);
        assert!((s.density - 4.0 / 120.0).abs() < 1e-12);
        assert!((s.delta - (0.4 - 1.0 / 3.0)).abs() < 1e-12);
        assert!((s.c_stat - 0.1529118768).abs() < 1e-9);
    }

    #[test]
    fn big_path_agrees_with_u64_path() {
        for p in [100_237u64, 112_771, 166_676_399] {
            let small = quad_density_stats(p);
            let big = quad_density_stats_big(&BigUint::from(p)).unwrap();
            assert_eq!(big.phi_sum, BigUint::from(small.phi_sum));
            assert!((big.c_stat - small.c_stat).abs() < 1e-9);
        }
    }

    #[test]
    fn audit_and_equality_small_ranges() {
        let audited: Vec<u64> = third_bound_audit(2, 100).iter().map(|r| r.p()).collect();
        assert_eq!(audited, vec![2, 3, 5, 7, 17]);

        let eq: Vec<u64> = equality_scan(2, 200).iter().map(|r| r.p()).collect();
        assert_eq!(eq, vec![13, 37, 73, 193]);
        assert!(equality_scan(14, 36).is_empty());
        assert_eq!(
            equality_scan(13, 13)
                .iter()
                .map(|r| r.p())
                .collect::<Vec<_>>(),
            vec![13]
        );
        // p = 13 attains equality exactly: D_13 = {8}, 3 phi(8) = 12.
        assert_eq!(3 * quad_phi_sum(13), 12);
    }

    #[test]
    fn cmax_first_records() {
        assert!(cmax_scan(10).is_empty());
        let rows = cmax_scan(30);
        // The published rows are truncated to 10 decimals, not rounded.
        let trunc10 = |x: f64| {
            let s = format!("{x:.12}");
            s[..s.len() - 2].to_string()
        };
        let expect = [
            (11u64, "0.1529118768", "0.0637692056"),
            (19, "0.2867929851", "0.0974015719"),
            (29, "0.3690965111", "0.1096121427"),
        ];
        assert_eq!(rows.len(), 3);
        for (row, (p, c, cl)) in rows.iter().zip(expect) {
            match row {
                ScanRecord::Cmax {
                    p: rp,
                    c: rc,
                    c_over_log_p: rcl,
                    ..
                } => {
                    assert_eq!(*rp, p);
                    assert_eq!(trunc10(*rc), c, "p={p}");
                    assert_eq!(trunc10(*rcl), cl, "p={p}");
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }
}
