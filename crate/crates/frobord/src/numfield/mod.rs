//! Galois number fields as explicit polynomial quotient data: residue
//! arithmetic mod (P, p), splitting invariants, conjugation, the rank
//! condition, and Archimedean size.

pub mod house;
pub mod qpoly;
pub mod residue;

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::intarith::primality::{mul_mod_u64, pow_mod_u64};
use crate::intarith::{factorize, is_prime_u64, IntPolynomial};

pub use house::complex_roots;
pub use qpoly::{discriminant, QPoly};
pub use residue::{ResidueElement, ResidueRing};

/// A Galois number field given by a monic defining polynomial and explicit
/// conjugation maps (polynomial images of the generator, one per embedding).
///
/// Loaded specs are immutable; share them behind the [`Arc`] returned by
/// [`load_spec`].
#[derive(Debug)]
pub struct FieldSpec {
    name: String,
    degree: usize,
    poly: IntPolynomial,
    /// Empty when the document omits conjugation maps (non-Galois spec,
    /// restricted to prime-ideal-wise operations).
    conj_maps: Vec<QPoly>,
    bad_primes: Vec<u64>,
    disc: BigInt,
    /// conj_compose[i][j] = index of maps[i] composed with maps[j].
    conj_compose: Vec<Vec<usize>>,
}

/// Splitting invariants of an unramified prime: common residue degree `n_p`
/// and number of primes above, with `n_p * g_p = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplittingData {
    pub p: u64,
    pub n_p: u32,
    pub g_p: u32,
    pub unramified: bool,
}

#[derive(Deserialize)]
struct SpecDoc {
    name: String,
    degree: usize,
    polynomial: Vec<i64>,
    conjugation_maps: Option<Vec<Vec<String>>>,
    bad_primes: Vec<u64>,
}

/// Parse and validate a field-spec document (TOML, one field per file).
///
/// Checks every type invariant at load time: monic polynomial of the declared
/// degree, irreducibility over Q, conjugation maps that really send the
/// generator to roots and close into a group of order n with the identity at
/// index 0, and a `bad_primes` list that is exactly the primes dividing the
/// discriminant of P.
pub fn load_spec(document: &str) -> Result<Arc<FieldSpec>> {
    let doc: SpecDoc = toml::from_str(document)
        .map_err(|e| Error::SpecInvalid(format!("document does not parse: {e}")))?;
    let n = doc.degree;
    if n == 0 {
        return Err(Error::SpecInvalid("degree must be positive".into()));
    }
    if doc.polynomial.len() != n + 1 {
        return Err(Error::SpecInvalid(format!(
            "polynomial must list {} coefficients, constant first",
            n + 1
        )));
    }
    if *doc.polynomial.last().unwrap() != 1 {
        return Err(Error::SpecInvalid("polynomial must be monic".into()));
    }
    let poly = IntPolynomial::from_i64(&doc.polynomial);
    check_irreducible(&poly)?;

    let disc = discriminant(&poly);
    if disc.is_zero() {
        return Err(Error::SpecInvalid("polynomial is not squarefree".into()));
    }
    let mut bad = doc.bad_primes.clone();
    bad.sort_unstable();
    bad.dedup();
    for &p in &bad {
        if !is_prime_u64(p) {
            return Err(Error::SpecInvalid(format!("bad prime {p} is not prime")));
        }
        if !(&disc % BigInt::from(p)).is_zero() {
            return Err(Error::SpecInvalid(format!(
                "{p} listed as bad but does not divide disc(P) = {disc}"
            )));
        }
    }
    let disc_factors = factorize(&disc.magnitude().clone())?;
    for (q, _) in disc_factors.factors() {
        let q = q
            .to_u64()
            .ok_or_else(|| Error::SpecInvalid("discriminant prime does not fit in u64".into()))?;
        if !bad.contains(&q) {
            return Err(Error::SpecInvalid(format!(
                "prime {q} divides disc(P) = {disc} but is not listed in bad_primes"
            )));
        }
    }

    let conj_maps = match &doc.conjugation_maps {
        None => Vec::new(),
        Some(rows) => {
            if rows.len() != n {
                return Err(Error::SpecInvalid(format!(
                    "expected {n} conjugation maps, found {}",
                    rows.len()
                )));
            }
            let mut maps = Vec::with_capacity(n);
            for row in rows {
                if row.len() != n {
                    return Err(Error::SpecInvalid(format!(
                        "each conjugation map must list {n} rational coefficients"
                    )));
                }
                let coeffs: Result<Vec<BigRational>> = row
                    .iter()
                    .map(|s| {
                        s.trim().parse::<BigRational>().map_err(|_| {
                            Error::SpecInvalid(format!("bad rational coefficient {s:?}"))
                        })
                    })
                    .collect();
                maps.push(QPoly::new(coeffs?));
            }
            maps
        }
    };

    let mut conj_compose = Vec::new();
    if !conj_maps.is_empty() {
        if conj_maps[0] != QPoly::x() {
            return Err(Error::SpecInvalid(
                "conjugation map 0 must be the identity map X".into(),
            ));
        }
        let p_as_q = QPoly::from_int(&poly);
        for (i, m) in conj_maps.iter().enumerate() {
            if !p_as_q.compose_mod(m, &poly).is_zero() {
                return Err(Error::SpecInvalid(format!(
                    "conjugation map {i} does not send the generator to a root of P"
                )));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if conj_maps[i] == conj_maps[j] {
                    return Err(Error::SpecInvalid(format!(
                        "conjugation maps {i} and {j} coincide"
                    )));
                }
            }
        }
        for a in &conj_maps {
            let mut row = Vec::with_capacity(n);
            for b in &conj_maps {
                let composed = a.compose_mod(b, &poly);
                match conj_maps.iter().position(|m| *m == composed) {
                    Some(k) => row.push(k),
                    None => {
                        return Err(Error::SpecInvalid(
                            "conjugation maps are not closed under composition".into(),
                        ))
                    }
                }
            }
            conj_compose.push(row);
        }
    }

    Ok(Arc::new(FieldSpec {
        name: doc.name,
        degree: n,
        poly,
        conj_maps,
        bad_primes: bad,
        disc,
        conj_compose,
    }))
}

/// Complete irreducibility check over Q for degrees up to 4 (rational root
/// test plus quadratic-factor search); degree 5 and up falls back to a mod-p
/// irreducibility certificate.
fn check_irreducible(poly: &IntPolynomial) -> Result<()> {
    let n = poly.degree();
    if n == 1 {
        return Ok(());
    }
    let c0 = poly.coeffs()[0].clone();
    if c0.is_zero() {
        return Err(Error::SpecInvalid("polynomial has root 0".into()));
    }
    // Monic, so any rational root is an integer dividing the constant term.
    let c0_abs = c0.magnitude().clone();
    for d in crate::intarith::divisors(&factorize(&c0_abs)?, None) {
        let d = BigInt::from(d);
        for cand in [d.clone(), -d] {
            if poly.eval(&cand).is_zero() {
                return Err(Error::SpecInvalid(format!(
                    "polynomial has rational root {cand}"
                )));
            }
        }
    }
    if n <= 3 {
        return Ok(());
    }
    if n == 4 {
        // Search for a factorization into two monic integer quadratics
        // (x^2 + a x + b)(x^2 + c x + d).
        let e = poly.coeffs();
        let (e0, e1, e2, e3) = (&e[0], &e[1], &e[2], &e[3]);
        for dv in crate::intarith::divisors(&factorize(&c0_abs)?, None) {
            let dv = BigInt::from(dv);
            for b in [dv.clone(), -dv] {
                if b.is_zero() {
                    continue;
                }
                let (q, r) = e0.div_rem(&b);
                if !r.is_zero() {
                    continue;
                }
                let d = q;
                let s = e3.clone();
                let t = e2 - &b - &d;
                // a + c = s, a c = t; integral iff s^2 - 4t is a square.
                let discim = &s * &s - BigInt::from(4) * &t;
                if discim.is_negative() {
                    continue;
                }
                let root = discim.sqrt();
                if &root * &root != discim {
                    continue;
                }
                for two_a in [&s + &root, &s - &root] {
                    if two_a.is_even() {
                        let a = two_a / BigInt::from(2);
                        let c = &s - &a;
                        if &a * &d + &b * &c == *e1 {
                            return Err(Error::SpecInvalid(
                                "polynomial factors into two quadratics".into(),
                            ));
                        }
                    }
                }
            }
        }
        return Ok(());
    }
    // Higher degree: look for a prime modulo which P stays irreducible.
    for p in crate::intarith::primes::primes_in(2, 499) {
        let reduced = poly.coeffs_mod(p);
        if !residue::poly_squarefree(p, &reduced) {
            continue;
        }
        if frobenius_exponent(&reduced, p) == Some(n as u32) {
            return Ok(());
        }
    }
    Err(Error::SpecInvalid(
        "could not certify irreducibility over Q".into(),
    ))
}

/// Least f >= 1 with X^(p^f) = X mod (f_p, p), i.e. the lcm of the degrees of
/// the irreducible factors of the squarefree polynomial `f_p`.
pub(crate) fn frobenius_exponent(poly_mod_p: &[u64], p: u64) -> Option<u32> {
    let n = poly_mod_p.len() - 1;
    let x = residue::trim(vec![0u64, 1 % p]);
    let mut y = vec![0u64, 1 % p];
    for f in 1..=n {
        y = powmod_coeffs(p, &y, p as u128, poly_mod_p);
        if residue::trim(y.clone()) == x {
            return Some(f as u32);
        }
    }
    None
}

/// base^e modulo (modulus, p) on raw coefficient slices, constant first.
pub(crate) fn powmod_coeffs(p: u64, base: &[u64], mut e: u128, modulus: &[u64]) -> Vec<u64> {
    let n = modulus.len() - 1;
    let inv_lead = if modulus[n] == 1 {
        1
    } else {
        pow_mod_u64(modulus[n], p - 2, p)
    };
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod_u64(ai, bj, p)) % p;
            }
        }
        while out.len() > n {
            let top = *out.last().unwrap();
            out.pop();
            if top == 0 {
                continue;
            }
            let q = mul_mod_u64(top, inv_lead, p);
            let k = out.len() - n;
            for (j, &mc) in modulus.iter().take(n).enumerate() {
                let sub = mul_mod_u64(q, mc, p);
                let idx = k + j;
                out[idx] = if out[idx] >= sub {
                    out[idx] - sub
                } else {
                    out[idx] + p - sub
                };
            }
        }
        out
    };
    let mut result = vec![1 % p];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &b);
        }
        e >>= 1;
        if e > 0 {
            b = mul(&b, &b);
        }
    }
    result
}

impl FieldSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn polynomial(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn bad_primes(&self) -> &[u64] {
        &self.bad_primes
    }

    pub fn is_galois(&self) -> bool {
        !self.conj_maps.is_empty()
    }

    pub fn conjugation_maps(&self) -> &[QPoly] {
        &self.conj_maps
    }

    /// Index of maps[i] composed with maps[j].
    pub fn compose_maps(&self, i: usize, j: usize) -> usize {
        self.conj_compose[i][j]
    }

    /// Order of conjugation map `i` in the map group.
    pub fn map_order(&self, i: usize) -> u32 {
        let mut k = i;
        let mut ord = 1;
        while k != 0 {
            k = self.conj_compose[k][i];
            ord += 1;
        }
        ord
    }

    /// First conjugation map of exact order `h`, if any.
    pub fn map_of_order(&self, h: u32) -> Option<usize> {
        (0..self.conj_maps.len()).find(|&i| self.map_order(i) == h)
    }

    /// Conjugation map `i` with coefficients reduced modulo p.
    pub fn conjugation_map_mod(&self, i: usize, p: u64) -> Result<Vec<u64>> {
        let map = self
            .conj_maps
            .get(i)
            .ok_or_else(|| Error::UnsupportedGroup(format!("no conjugation map {i}")))?;
        let bp = BigInt::from(p);
        let mut out = vec![0u64; self.degree];
        for (k, c) in map.coeffs().iter().enumerate() {
            let den_mod = c.denom().mod_floor(&bp).to_u64().unwrap();
            if den_mod == 0 {
                return Err(Error::BadPrime {
                    p,
                    reason: "conjugation map denominator vanishes".into(),
                });
            }
            let num_mod = c.numer().mod_floor(&bp).to_u64().unwrap();
            out[k] = mul_mod_u64(num_mod, pow_mod_u64(den_mod, p - 2, p), p);
        }
        Ok(out)
    }

    fn require_galois(&self) -> Result<()> {
        if self.is_galois() {
            Ok(())
        } else {
            Err(Error::UnsupportedGroup(format!(
                "spec {} carries no conjugation maps",
                self.name
            )))
        }
    }
}

/// Residue degree and prime count of an unramified prime, computed from
/// P mod p alone by repeated Frobenius application.
pub fn splitting_data(spec: &Arc<FieldSpec>, p: u64) -> Result<SplittingData> {
    spec.require_galois()?;
    if spec.bad_primes.contains(&p) {
        return Err(Error::RamifiedPrime {
            p,
            field: spec.name.clone(),
        });
    }
    let reduced = spec.poly.coeffs_mod(p);
    if !residue::poly_squarefree(p, &reduced) {
        return Err(Error::RamifiedPrime {
            p,
            field: spec.name.clone(),
        });
    }
    let n = spec.degree as u32;
    let f = frobenius_exponent(&reduced, p).ok_or_else(|| {
        Error::UnsupportedGroup(format!("{}: Frobenius power never stabilized", spec.name))
    })?;
    if n % f != 0 {
        // A Galois polynomial factors into equal degrees mod p; anything else
        // means the document lied about being Galois.
        return Err(Error::UnsupportedGroup(format!(
            "{}: factor degrees of P mod {p} are unequal",
            spec.name
        )));
    }
    Ok(SplittingData {
        p,
        n_p: f,
        g_p: n / f,
        unramified: true,
    })
}

/// Element of the field as a rational-coefficient polynomial in the
/// generator: integer numerators (constant first) over one denominator.
/// Stored reduced: gcd of all numerators and the denominator is 1.
#[derive(Debug, Clone)]
pub struct AlgebraicNumber {
    spec: Arc<FieldSpec>,
    numerators: Vec<BigInt>,
    denominator: BigUint,
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.spec.name == other.spec.name
            && self.numerators == other.numerators
            && self.denominator == other.denominator
    }
}
impl Eq for AlgebraicNumber {}

impl AlgebraicNumber {
    pub fn new(
        spec: &Arc<FieldSpec>,
        numerators: Vec<BigInt>,
        denominator: BigUint,
    ) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::SpecInvalid("denominator must be positive".into()));
        }
        if numerators.len() > spec.degree() {
            return Err(Error::SpecInvalid(format!(
                "element has {} coefficients but the field has degree {}",
                numerators.len(),
                spec.degree()
            )));
        }
        let mut numerators = numerators;
        numerators.resize(spec.degree(), BigInt::zero());
        let mut g = BigInt::from(denominator.clone());
        for c in &numerators {
            g = g.gcd(c);
        }
        let g = g.magnitude().clone();
        let denominator = denominator / &g;
        let gi = BigInt::from(g);
        for c in &mut numerators {
            *c /= &gi;
        }
        Ok(AlgebraicNumber {
            spec: Arc::clone(spec),
            numerators,
            denominator,
        })
    }

    pub fn from_i64(spec: &Arc<FieldSpec>, numerators: &[i64], denominator: u64) -> Result<Self> {
        Self::new(
            spec,
            numerators.iter().map(|&c| BigInt::from(c)).collect(),
            BigUint::from(denominator),
        )
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.numerators
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerators.iter().all(|c| c.is_zero())
    }

    fn as_qpoly(&self) -> QPoly {
        let den = BigRational::from_integer(BigInt::from(self.denominator.clone()));
        QPoly::new(
            self.numerators
                .iter()
                .map(|c| BigRational::from_integer(c.clone()) / &den)
                .collect(),
        )
    }

    fn from_qpoly(spec: &Arc<FieldSpec>, q: &QPoly) -> Result<Self> {
        let (nums, den) = q.to_integer_form(spec.degree());
        Self::new(spec, nums, den.magnitude().clone())
    }

    /// Image under conjugation map `i`: the generator is replaced by
    /// `conjugation_maps[i]` and the result reduced mod P over Q.
    pub fn conjugate(&self, i: usize) -> Result<AlgebraicNumber> {
        self.spec.require_galois()?;
        if i >= self.spec.degree() {
            return Err(Error::UnsupportedGroup(format!("no conjugation map {i}")));
        }
        let composed = self
            .as_qpoly()
            .compose_mod(&self.spec.conj_maps[i], &self.spec.poly);
        Self::from_qpoly(&self.spec, &composed)
    }

    /// Field multiplication (mod P over Q).
    pub fn mul(&self, other: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        let prod = self.as_qpoly().mul_mod(&other.as_qpoly(), &self.spec.poly);
        Self::from_qpoly(&self.spec, &prod)
    }

    /// Field norm via the resultant of P and the element; works for
    /// non-Galois specs too.
    pub fn norm(&self) -> BigRational {
        let f = self.as_qpoly();
        if f.is_zero() {
            return BigRational::zero();
        }
        qpoly::resultant(&QPoly::from_int(&self.spec.poly), &f)
    }

    /// Reduce modulo p into the given residue ring: coefficients
    /// c_i * nu^(-1) mod p.
    pub fn reduce_in(&self, ring: &Arc<ResidueRing>) -> Result<ResidueElement> {
        let p = ring.p;
        if self.spec.bad_primes.contains(&p) {
            return Err(Error::BadPrime {
                p,
                reason: format!("{p} is a bad prime of {}", self.spec.name),
            });
        }
        let bp = BigInt::from(p);
        let den = BigInt::from(self.denominator.clone())
            .mod_floor(&bp)
            .to_u64()
            .unwrap();
        if den == 0 {
            return Err(Error::BadPrime {
                p,
                reason: "p divides the denominator".into(),
            });
        }
        let den_inv = pow_mod_u64(den, p - 2, p);
        let coeffs = self
            .numerators
            .iter()
            .map(|c| mul_mod_u64(c.mod_floor(&bp).to_u64().unwrap(), den_inv, p))
            .collect();
        Ok(ring.element(coeffs))
    }

    /// Archimedean size: max over embeddings of the absolute value, to
    /// guaranteed relative accuracy 1e-9.
    pub fn house(&self) -> f64 {
        house::house_of(
            &self.spec.poly,
            &self.numerators,
            self.denominator.to_f64().unwrap(),
        )
    }

    /// Whether the multiplicative module generated by the conjugates of eta
    /// has full rank n, tested through the rational idempotent products of
    /// the cyclic group (supported for C2, C3, C4).
    ///
    /// For C2 the products are eta^(1+s) and eta^(1-s); for C3, eta^(1+s+s^2)
    /// and eta^(2-s-s^2); for C4, eta^(1+s+s^2+s^3), eta^(1-s^2) and
    /// eta^(1-s+s^2-s^3). Full rank means none of them is +1 or -1, decided
    /// in exact rational arithmetic with divisions cleared by cross
    /// multiplication.
    pub fn rank_check(&self) -> Result<bool> {
        self.spec.require_galois()?;
        if self.is_zero() {
            return Ok(false);
        }
        let n = self.spec.degree();
        let poly = &self.spec.poly;
        let s = match n {
            2 => 1,
            3 => self
                .spec
                .map_of_order(3)
                .ok_or_else(|| Error::UnsupportedGroup("no order-3 map".into()))?,
            4 => self
                .spec
                .map_of_order(4)
                .ok_or_else(|| Error::UnsupportedGroup("degree-4 group is not cyclic".into()))?,
            d => {
                return Err(Error::UnsupportedGroup(format!(
                    "rank check implemented for C2, C3, C4 only (degree {d})"
                )))
            }
        };
        // Conjugates under successive powers of the generator s.
        let mut orbit = Vec::with_capacity(n);
        let mut idx = 0usize;
        for _ in 0..n {
            orbit.push(self.conjugate(idx)?.as_qpoly());
            idx = self.spec.compose_maps(idx, s);
        }
        let norm = orbit
            .iter()
            .fold(QPoly::one(), |acc, c| acc.mul_mod(c, poly));
        let pm_one = |q: &QPoly| q.is_one() || q.is_minus_one();
        if pm_one(&norm) {
            return Ok(false);
        }
        let distinct_up_to_sign = |a: &QPoly, b: &QPoly| -> bool { *a != *b && *a != b.neg() };
        let full = match n {
            2 => distinct_up_to_sign(&orbit[0], &orbit[1]),
            3 => {
                // eta^(2-s-s^2) != +-1, cleared to eta^2 != +-(eta^s eta^(s^2)).
                let lhs = orbit[0].mul_mod(&orbit[0], poly);
                let rhs = orbit[1].mul_mod(&orbit[2], poly);
                distinct_up_to_sign(&lhs, &rhs)
            }
            4 => {
                let r2 = distinct_up_to_sign(&orbit[0], &orbit[2]);
                let lhs = orbit[0].mul_mod(&orbit[2], poly);
                let rhs = orbit[1].mul_mod(&orbit[3], poly);
                r2 && distinct_up_to_sign(&lhs, &rhs)
            }
            _ => unreachable!(),
        };
        Ok(full)
    }
}

/// Build a residue ring for (spec, p) and reduce eta into it.
pub fn reduce(eta: &AlgebraicNumber, p: u64) -> Result<ResidueElement> {
    let ring = Arc::new(ResidueRing::new(eta.spec(), p));
    eta.reduce_in(&ring)
}

/// z^k in the residue ring, square-and-multiply.
pub fn residue_pow(z: &ResidueElement, k: u128) -> ResidueElement {
    z.pow(k)
}

// ---------------------------------------------------------------------------
// Builtin field specs shipped with the crate.
// ---------------------------------------------------------------------------

/// The field specs shipped with the repository, as (name, document) pairs.
pub const BUILTIN_SPECS: &[(&str, &str)] = &[
    ("quad2", include_str!("../../specs/quad2.toml")),
    ("quad3", include_str!("../../specs/quad3.toml")),
    ("quadm1", include_str!("../../specs/quadm1.toml")),
    ("cubic7", include_str!("../../specs/cubic7.toml")),
    ("quartic17", include_str!("../../specs/quartic17.toml")),
    ("x3m2", include_str!("../../specs/x3m2.toml")),
];

/// Load one of the shipped specs by name.
pub fn load_builtin(name: &str) -> Result<Arc<FieldSpec>> {
    BUILTIN_SPECS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| load_spec(text))
        .unwrap_or_else(|| {
            Err(Error::SpecInvalid(format!(
                "unknown builtin spec {name:?} (available: {})",
                BUILTIN_SPECS
                    .iter()
                    .map(|(n, _)| *n)
                    .collect::<Vec<_>>()
                    .join(", ")
            )))
        })
}
