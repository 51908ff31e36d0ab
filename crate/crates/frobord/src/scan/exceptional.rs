//! Exceptional-prime searches: for a family of field elements, find every
//! prime of the selected residue degree where some element has order at most
//! p, by walking the divisors of p^{n_p} - 1 in ascending order with an
//! early cutoff, exactly like the batch programs.

use std::sync::Arc;

use num_traits::ToPrimitive;

use super::driver::map_prime_chunks;
use super::ScanRecord;
use crate::error::{Error, Result};
use crate::forbidden::m_factorization_u64;
use crate::intarith::divisors_u128_up_to;
use crate::intarith::factor::factor_budget;
use crate::intarith::primality::pow_mod_u64;
use crate::numfield::{splitting_data, AlgebraicNumber, ResidueRing};

/// What to do with family members that fail the rank condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeficientPolicy {
    /// Fail the whole scan (single explicit eta).
    Error,
    /// Drop them silently, as the coefficient-loop programs do.
    Skip,
    /// Scan them anyway (for studying degenerate elements).
    Include,
}

/// How much deduplication to apply to the raw (eta, p, d) stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dedup {
    /// Every divisor d <= p with eta^d = 1 (all multiples of the order).
    Raw,
    /// Only the smallest d per (eta, p): the order itself.
    PerPair,
    /// PerPair, plus: within each prime, drop an element whose residue is
    /// congruent to plus or minus a conjugate of an earlier emitted element
    /// (the pruning the published solution lists apply).
    PerPairConjugate,
}

#[derive(Debug, Clone)]
pub struct ExceptionalConfig {
    /// Scan primes up to this bound inclusive.
    pub bound: u64,
    /// Keep primes whose residue degree equals this.
    pub np_filter: u32,
    pub dedup: Dedup,
    pub deficient: DeficientPolicy,
}

struct Member {
    index: usize,
    label: Vec<i64>,
    nu: u64,
    eta: AlgebraicNumber,
}

/// Run the search over the family, in family order. Records are returned
/// sorted by (p, family index) and deduplicated per the config.
pub fn exceptional_scan(
    family: &[AlgebraicNumber],
    cfg: &ExceptionalConfig,
) -> Result<Vec<ScanRecord>> {
    let spec = match family.first() {
        Some(eta) => Arc::clone(eta.spec()),
        None => return Ok(Vec::new()),
    };
    if !spec.is_galois() {
        return Err(Error::UnsupportedGroup(
            "exceptional scans need conjugation maps".into(),
        ));
    }
    let mut members = Vec::new();
    for (index, eta) in family.iter().enumerate() {
        if !eta.rank_check()? {
            match cfg.deficient {
                DeficientPolicy::Error => return Err(Error::RankDeficient),
                DeficientPolicy::Skip => continue,
                DeficientPolicy::Include => {}
            }
        }
        let label: Option<Vec<i64>> = eta.numerators().iter().map(|c| c.to_i64()).collect();
        let label = label.ok_or_else(|| {
            Error::SpecInvalid("family coefficients exceed the scan label range".into())
        })?;
        let nu = eta
            .denominator()
            .to_u64()
            .ok_or_else(|| Error::SpecInvalid("denominator exceeds u64".into()))?;
        members.push(Member {
            index,
            label,
            nu,
            eta: eta.clone(),
        });
    }

    let echo = format!(
        "spec={} bound={} np={} members={}",
        spec.name(),
        cfg.bound,
        cfg.np_filter,
        members.len()
    );
    let chunks = map_prime_chunks(2, cfg.bound, |primes| {
        scan_chunk(&spec, &members, cfg, &echo, primes)
    });
    let mut out = Vec::new();
    for chunk in chunks {
        out.extend(chunk?);
    }
    Ok(out)
}

fn scan_chunk(
    spec: &Arc<crate::numfield::FieldSpec>,
    members: &[Member],
    cfg: &ExceptionalConfig,
    echo: &str,
    primes: &[u64],
) -> Result<Vec<ScanRecord>> {
    let n = spec.degree();
    let mut out = Vec::new();
    let mut budget = factor_budget();
    let mut scratch: Vec<u64> = Vec::new();
    let mut table: Vec<u64> = Vec::new();
    let mut acc = vec![0u64; n];
    let mut tmp = vec![0u64; n];

    for &p in primes {
        let Ok(split) = splitting_data(spec, p) else {
            continue;
        };
        if split.n_p != cfg.np_filter {
            continue;
        }
        let factors = m_factorization_u64(split.n_p as u64, p, &mut budget)?;
        let divisors = divisors_u128_up_to(&factors, p as u128);
        if divisors.is_empty() {
            continue;
        }
        let ring = Arc::new(ResidueRing::new(spec, p));
        let bits = 128 - divisors.last().unwrap().leading_zeros() as usize;
        table.resize(bits * n, 0);

        // Residues of elements already emitted at this prime, closed under
        // conjugation; used by the strongest dedup level.
        let mut emitted_orbits: Vec<Vec<u64>> = Vec::new();

        for member in members {
            if member.nu % p == 0 {
                continue;
            }
            let nu_inv = pow_mod_u64(member.nu % p, p - 2, p);
            let z: Vec<u64> = member
                .label
                .iter()
                .map(|&c| {
                    let r = c.rem_euclid(p as i64) as u64;
                    ((r as u128 * nu_inv as u128) % p as u128) as u64
                })
                .chain(std::iter::repeat(0))
                .take(n)
                .collect();
            if z.iter().all(|&c| c == 0) {
                continue;
            }
            // Squaring table: row k holds z^(2^k).
            table[..n].copy_from_slice(&z);
            for k in 1..bits {
                let (lo, hi) = table.split_at_mut(k * n);
                let prev = &lo[(k - 1) * n..];
                ring.mul_into(prev, prev, &mut scratch, &mut hi[..n]);
            }
            let mut matched = false;
            for &d in &divisors {
                pow_from_table(&ring, &table, n, d, &mut scratch, &mut acc, &mut tmp);
                if acc[0] == 1 && acc[1..].iter().all(|&c| c == 0) {
                    if cfg.dedup == Dedup::PerPairConjugate {
                        if emitted_orbits.iter().any(|orbit| orbit == &z) {
                            break;
                        }
                        for j in 0..n {
                            let conj = ring.element(z.clone()).conjugate(j)?;
                            let neg: Vec<u64> = conj
                                .coeffs()
                                .iter()
                                .map(|&c| if c == 0 { 0 } else { p - c })
                                .collect();
                            emitted_orbits.push(conj.coeffs().to_vec());
                            emitted_orbits.push(neg);
                        }
                    }
                    out.push(ScanRecord::Exceptional {
                        eta: member.label.clone(),
                        nu: member.nu,
                        p,
                        order: d as u64,
                        params: echo.to_string(),
                    });
                    matched = true;
                    if cfg.dedup != Dedup::Raw {
                        break;
                    }
                }
            }
            let _ = matched;
            let _ = member.index;
            let _ = &member.eta;
        }
    }
    Ok(out)
}

fn pow_from_table(
    ring: &ResidueRing,
    table: &[u64],
    n: usize,
    d: u128,
    scratch: &mut Vec<u64>,
    acc: &mut [u64],
    tmp: &mut [u64],
) {
    let mut started = false;
    let mut k = 0usize;
    let mut rest = d;
    while rest > 0 {
        if rest & 1 == 1 {
            let row = &table[k * n..(k + 1) * n];
            if started {
                ring.mul_into(acc, row, scratch, tmp);
                acc.copy_from_slice(tmp);
            } else {
                acc.copy_from_slice(row);
                started = true;
            }
        }
        rest >>= 1;
        k += 1;
    }
    debug_assert!(started, "zero exponent never reaches the walk");
}
