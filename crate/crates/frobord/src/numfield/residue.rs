//! Arithmetic in Z[x]/(P, p): residue elements, Frobenius powers, and
//! factorization of P mod p into irreducibles.

use std::sync::Arc;

use crate::intarith::primality::{mul_mod_u64, pow_mod_u64, splitmix64};

use super::FieldSpec;

/// The quotient ring Z[x]/(P mod p, p) for one spec and one prime.
///
/// All element operations are pure; the ring itself is immutable and freely
/// shared across workers.
#[derive(Debug)]
pub struct ResidueRing {
    pub(crate) spec: Arc<FieldSpec>,
    pub p: u64,
    /// P mod p, constant first, length n+1, leading coefficient 1.
    pub(crate) modulus: Vec<u64>,
    pub(crate) n: usize,
}

impl ResidueRing {
    pub fn new(spec: &Arc<FieldSpec>, p: u64) -> Self {
        let modulus = spec.polynomial().coeffs_mod(p);
        let n = spec.degree();
        debug_assert_eq!(modulus.len(), n + 1);
        ResidueRing {
            spec: Arc::clone(spec),
            p,
            modulus,
            n,
        }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn one(self: &Arc<Self>) -> ResidueElement {
        let mut coeffs = vec![0; self.n];
        coeffs[0] = 1 % self.p;
        ResidueElement {
            ring: Arc::clone(self),
            coeffs,
        }
    }

    pub fn generator(self: &Arc<Self>) -> ResidueElement {
        let mut coeffs = vec![0; self.n];
        if self.n > 1 {
            coeffs[1] = 1;
        }
        ResidueElement {
            ring: Arc::clone(self),
            coeffs,
        }
    }

    pub fn element(self: &Arc<Self>, mut coeffs: Vec<u64>) -> ResidueElement {
        coeffs.resize(self.n, 0);
        for c in &mut coeffs {
            *c %= self.p;
        }
        ResidueElement {
            ring: Arc::clone(self),
            coeffs,
        }
    }

    /// Raw coefficient-slice multiply: out = a * b mod (P, p).
    pub(crate) fn mul_into(&self, a: &[u64], b: &[u64], scratch: &mut Vec<u64>, out: &mut [u64]) {
        let n = self.n;
        let p = self.p;
        scratch.clear();
        scratch.resize(2 * n - 1, 0);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                let idx = i + j;
                let add = mul_mod_u64(ai, bj, p);
                let s = scratch[idx] + add;
                scratch[idx] = if s >= p { s - p } else { s };
            }
        }
        // Monic reduction from the top.
        for i in (n..2 * n - 1).rev() {
            let c = scratch[i];
            if c == 0 {
                continue;
            }
            scratch[i] = 0;
            for j in 0..n {
                let m = self.modulus[j];
                if m == 0 {
                    continue;
                }
                let sub = mul_mod_u64(c, m, p);
                let idx = i - n + j;
                scratch[idx] = if scratch[idx] >= sub {
                    scratch[idx] - sub
                } else {
                    scratch[idx] + p - sub
                };
            }
        }
        out.copy_from_slice(&scratch[..n]);
    }
}

/// Image of an algebraic number in Z[x]/(P, p); supports multiplication
/// and exponentiation. Coefficients are reduced into `[0, p)`.
#[derive(Debug, Clone)]
pub struct ResidueElement {
    ring: Arc<ResidueRing>,
    coeffs: Vec<u64>,
}

impl PartialEq for ResidueElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.p == other.ring.p && self.coeffs == other.coeffs
    }
}
impl Eq for ResidueElement {}

impl ResidueElement {
    pub fn ring(&self) -> &Arc<ResidueRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 % self.ring.p && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn mul(&self, other: &ResidueElement) -> ResidueElement {
        debug_assert_eq!(self.ring.p, other.ring.p);
        let mut out = vec![0; self.ring.n];
        let mut scratch = Vec::new();
        self.ring
            .mul_into(&self.coeffs, &other.coeffs, &mut scratch, &mut out);
        ResidueElement {
            ring: Arc::clone(&self.ring),
            coeffs: out,
        }
    }

    /// z^k by square-and-multiply, O(log k) ring multiplications.
    pub fn pow(&self, mut k: u128) -> ResidueElement {
        let mut result = self.ring.one();
        if k == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut scratch = Vec::new();
        let mut tmp = vec![0; self.ring.n];
        while k > 0 {
            if k & 1 == 1 {
                self.ring
                    .mul_into(&result.coeffs, &base.coeffs, &mut scratch, &mut tmp);
                result.coeffs.copy_from_slice(&tmp);
            }
            k >>= 1;
            if k > 0 {
                self.ring
                    .mul_into(&base.coeffs.clone(), &base.coeffs, &mut scratch, &mut tmp);
                base.coeffs.copy_from_slice(&tmp);
            }
        }
        result
    }

    /// Frobenius: z^p.
    pub fn frobenius(&self) -> ResidueElement {
        self.pow(self.ring.p as u128)
    }

    /// True when the element is invertible, i.e. shares no factor with P mod p.
    pub fn is_invertible(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let g = poly_gcd(self.ring.p, &trim(self.coeffs.clone()), &self.ring.modulus);
        g.len() == 1
    }

    /// Apply conjugation map `i` inside the residue ring.
    pub fn conjugate(&self, i: usize) -> crate::Result<ResidueElement> {
        let image = self.ring.spec.conjugation_map_mod(i, self.ring.p)?;
        let image = self.ring.element(image);
        // Evaluate the coefficient polynomial at the mapped generator.
        let mut acc = self.ring.element(vec![]);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&image);
            acc.coeffs[0] = (acc.coeffs[0] + c) % self.ring.p;
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Variable-degree polynomial arithmetic over F_p, used for squarefreeness
// checks and for factoring P mod p into irreducibles.
// ---------------------------------------------------------------------------

pub(crate) fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
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
    trim(out)
}

/// Remainder of a modulo b over F_p; b need not be monic.
fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "polynomial remainder by zero");
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let inv_lead = mod_inverse(*b.last().unwrap(), p);
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let q = mul_mod_u64(top, inv_lead, p);
            let k = r.len() - 1 - db;
            for (j, &bc) in b.iter().enumerate() {
                let sub = mul_mod_u64(q, bc, p);
                let idx = k + j;
                r[idx] = if r[idx] >= sub { r[idx] - sub } else { r[idx] + p - sub };
            }
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    pow_mod_u64(a, p - 2, p)
}

pub(crate) fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        if lead != 1 {
            let inv = mod_inverse(lead, p);
            for c in &mut a {
                *c = mul_mod_u64(*c, inv, p);
            }
        }
    }
    a
}

fn poly_powmod(p: u64, base: &[u64], mut e: u128, modulus: &[u64]) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = poly_rem(p, base, modulus);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(p, &poly_mul(p, &result, &b), modulus);
        }
        e >>= 1;
        if e > 0 {
            b = poly_rem(p, &poly_mul(p, &b, &b), modulus);
        }
    }
    result
}

fn poly_derivative(p: u64, a: &[u64]) -> Vec<u64> {
    if a.len() <= 1 {
        return vec![];
    }
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod_u64(c, (i as u64) % p, p))
            .collect(),
    )
}

/// True when `a` is squarefree over F_p.
pub(crate) fn poly_squarefree(p: u64, a: &[u64]) -> bool {
    let d = poly_derivative(p, a);
    if d.is_empty() {
        return false;
    }
    poly_gcd(p, a, &d).len() == 1
}

/// Factor a squarefree monic polynomial over F_p into monic irreducibles,
/// returned sorted by (degree, coefficients). Distinct-degree splitting
/// followed by Cantor–Zassenhaus equal-degree splitting with a
/// deterministically seeded generator, so results are reproducible.
pub(crate) fn factor_squarefree(p: u64, f: &[u64]) -> Vec<Vec<u64>> {
    let mut f = make_monic(p, trim(f.to_vec()));
    debug_assert!(poly_squarefree(p, &f));
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut d = 1u32;
    // x^(p^d) mod f, maintained incrementally.
    let mut xp = poly_powmod(p, &[0, 1], p as u128, &f);
    while f.len() > 1 {
        if 2 * (d as usize) > f.len() - 1 {
            out.push(f.clone());
            break;
        }
        // gcd(x^(p^d) - x, f) collects all irreducible factors of degree d.
        let mut shifted = xp.clone();
        if shifted.len() < 2 {
            shifted.resize(2, 0);
        }
        shifted[1] = if shifted[1] >= 1 { shifted[1] - 1 } else { p - 1 };
        let g = poly_gcd(p, &trim(shifted), &f);
        if g.len() > 1 {
            split_equal_degree(p, &g, d as usize, &mut out);
            f = make_monic(p, poly_divide_exact(p, &f, &g));
            xp = poly_rem(p, &xp, &f);
        }
        d += 1;
        if f.len() > 1 {
            xp = poly_powmod(p, &xp, p as u128, &f);
        }
    }
    out.sort();
    out.sort_by_key(|f| f.len());
    out
}

fn make_monic(p: u64, mut f: Vec<u64>) -> Vec<u64> {
    if let Some(&lead) = f.last() {
        if lead != 1 {
            let inv = mod_inverse(lead, p);
            for c in &mut f {
                *c = mul_mod_u64(*c, inv, p);
            }
        }
    }
    f
}

fn poly_divide_exact(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    // a = b * q with zero remainder; synthetic long division.
    let mut rem = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let inv_lead = mod_inverse(*b.last().unwrap(), p);
    let mut q = vec![0u64; rem.len() - db];
    for k in (0..q.len()).rev() {
        let top = if rem.len() > k + db { rem[k + db] } else { 0 };
        if top == 0 {
            continue;
        }
        let qc = mul_mod_u64(top, inv_lead, p);
        q[k] = qc;
        for (j, &bc) in b.iter().enumerate() {
            let sub = mul_mod_u64(qc, bc, p);
            let idx = k + j;
            rem[idx] = if rem[idx] >= sub { rem[idx] - sub } else { rem[idx] + p - sub };
        }
    }
    debug_assert!(trim(rem).is_empty());
    trim(q)
}

/// Cantor–Zassenhaus: split a product of degree-d irreducibles.
fn split_equal_degree(p: u64, f: &[u64], d: usize, out: &mut Vec<Vec<u64>>) {
    let deg = f.len() - 1;
    if deg == d {
        out.push(make_monic(p, f.to_vec()));
        return;
    }
    let mut seed = splitmix64(p ^ (deg as u64) << 8 ^ f.iter().fold(0, |a, &c| a ^ c));
    loop {
        seed = splitmix64(seed);
        // Random polynomial of degree < deg.
        let mut r: Vec<u64> = (0..deg)
            .map(|i| {
                seed = splitmix64(seed.wrapping_add(i as u64));
                seed % p
            })
            .collect();
        r = trim(r);
        if r.len() <= 1 {
            continue;
        }
        let g = poly_gcd(p, &r, f);
        let candidate = if g.len() > 1 && g.len() - 1 < deg {
            g
        } else if p == 2 {
            // Trace map: r + r^2 + r^4 + ... (d terms).
            let mut t = r.clone();
            let mut acc = r.clone();
            for _ in 1..d {
                t = poly_rem(p, &poly_mul(p, &t, &t), f);
                acc = poly_add(p, &acc, &t);
            }
            let g = poly_gcd(p, &trim(acc), f);
            if g.len() > 1 && g.len() - 1 < deg {
                g
            } else {
                continue;
            }
        } else {
            // r^((p^d - 1)/2) - 1 splits the factors roughly in half.
            let e = ((p as u128).pow(d as u32) - 1) / 2;
            let mut h = poly_powmod(p, &r, e, f);
            if h.is_empty() {
                continue;
            }
            if h.len() < 2 && h[0] == 0 {
                continue;
            }
            h[0] = if h[0] >= 1 { h[0] - 1 } else { p - 1 };
            let h = trim(h);
            if h.is_empty() {
                continue;
            }
            let g = poly_gcd(p, &h, f);
            if g.len() > 1 && g.len() - 1 < deg {
                g
            } else {
                continue;
            }
        };
        let other = poly_divide_exact(p, f, &candidate);
        split_equal_degree(p, &candidate, d, out);
        split_equal_degree(p, &other, d, out);
        return;
    }
}

fn poly_add(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
                x % p
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_squarefree() {
        // (x+1)^2 (x+2) over F_5
        let f = poly_mul(5, &poly_mul(5, &[1, 1], &[1, 1]), &[2, 1]);
        assert!(!poly_squarefree(5, &f));
        let g = poly_gcd(5, &f, &poly_derivative(5, &f));
        assert_eq!(g, vec![1, 1]);
        assert!(poly_squarefree(5, &[3, 0, 1])); // x^2 + 3 over F_5
    }

    #[test]
    fn factor_x3_minus_2_mod_5_and_7() {
        // x^3 - 2 mod 5 = (x - 3)(x^2 + 3x + 4)
        let factors = factor_squarefree(5, &[3, 0, 0, 1]);
        assert_eq!(factors, vec![vec![2, 1], vec![4, 3, 1]]);
        // x^3 - 2 mod 7 stays irreducible.
        let factors = factor_squarefree(7, &[5, 0, 0, 1]);
        assert_eq!(factors, vec![vec![5, 0, 0, 1]]);
    }

    #[test]
    fn factor_split_cubic() {
        // Conductor-7 cubic splits completely mod 13.
        let f: Vec<u64> = vec![12, 11, 1, 1]; // x^3+x^2-2x-1 mod 13
        let factors = factor_squarefree(13, &f);
        assert_eq!(factors.len(), 3);
        assert!(factors.iter().all(|g| g.len() == 2));
        // Each root really is a root.
        for g in &factors {
            let root = (13 - g[0]) % 13;
            let val = ((root * root % 13 * root) + root * root + 11 * root + 12) % 13;
            assert_eq!(val, 0);
        }
    }
}
