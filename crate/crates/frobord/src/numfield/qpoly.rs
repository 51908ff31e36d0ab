//! Rational-coefficient polynomial arithmetic modulo a fixed monic integer
//! polynomial, plus resultants and discriminants. Degrees here are tiny
//! (at most the field degree), so everything is schoolbook and exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::intarith::IntPolynomial;

/// Dense rational polynomial, constant term first, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPoly {
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    /// The identity map X.
    pub fn x() -> Self {
        QPoly {
            coeffs: vec![BigRational::zero(), BigRational::one()],
        }
    }

    pub fn from_int(p: &IntPolynomial) -> Self {
        QPoly::new(
            p.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Remainder of self modulo a monic integer polynomial.
    pub fn rem_monic(&self, modulus: &IntPolynomial) -> QPoly {
        debug_assert!(modulus.is_monic());
        let d = modulus.degree();
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > d {
            let top = coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = coeffs.len() - d;
            for (j, m) in modulus.coeffs().iter().take(d).enumerate() {
                let m = BigRational::from_integer(m.clone());
                coeffs[k + j] -= &top * m;
            }
        }
        QPoly::new(coeffs)
    }

    pub fn mul_mod(&self, other: &QPoly, modulus: &IntPolynomial) -> QPoly {
        self.mul(other).rem_monic(modulus)
    }

    /// Substitute `inner` for the variable, reducing modulo `modulus` as the
    /// powers grow (Horner over the quotient ring).
    pub fn compose_mod(&self, inner: &QPoly, modulus: &IntPolynomial) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_mod(inner, modulus);
            acc = acc.add(&QPoly::constant(c.clone()));
        }
        acc.rem_monic(modulus)
    }

    /// Inverse modulo a monic polynomial that is irreducible over Q;
    /// `None` when self reduces to zero.
    pub fn inverse_mod(&self, modulus: &IntPolynomial) -> Option<QPoly> {
        // Extended Euclid over Q[x].
        let mut r0 = QPoly::from_int(modulus);
        let mut r1 = self.rem_monic(modulus);
        if r1.is_zero() {
            return None;
        }
        let mut t0 = QPoly::zero();
        let mut t1 = QPoly::one();
        while !r1.is_zero() {
            let (q, r) = divmod(&r0, &r1);
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        // r0 is a nonzero constant because the modulus is irreducible.
        let c = r0.leading()?.clone();
        Some(QPoly::new(
            t0.coeffs.iter().map(|x| x / &c).collect(),
        ))
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_minus_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == -BigRational::one()
    }

    /// Clears denominators: returns (integer coefficient list, common denominator).
    pub fn to_integer_form(&self, width: usize) -> (Vec<BigInt>, BigInt) {
        use num_integer::Integer;
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let mut nums: Vec<BigInt> = (0..width.max(self.coeffs.len()))
            .map(|i| {
                if i < self.coeffs.len() {
                    (&self.coeffs[i] * BigRational::from_integer(den.clone()))
                        .to_integer()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        if den.is_negative() {
            den = -den;
            for c in &mut nums {
                *c = -c.clone();
            }
        }
        (nums, den)
    }
}

/// Quotient and remainder in Q[x].
pub fn divmod(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    assert!(!b.is_zero(), "polynomial division by zero");
    if a.degree() < b.degree() || a.is_zero() {
        return (QPoly::zero(), a.clone());
    }
    let mut rem = a.coeffs.clone();
    let db = b.degree();
    let lead = b.leading().unwrap().clone();
    let mut quot = vec![BigRational::zero(); a.degree() - db + 1];
    for k in (0..quot.len()).rev() {
        let top = rem[k + db].clone();
        if top.is_zero() {
            continue;
        }
        let q = &top / &lead;
        for (j, c) in b.coeffs.iter().enumerate() {
            rem[k + j] -= &q * c;
        }
        quot[k] = q;
    }
    (QPoly::new(quot), QPoly::new(rem))
}

/// Resultant of two rational polynomials via the Euclidean recurrence.
pub fn resultant(a: &QPoly, b: &QPoly) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    if b.degree() == 0 {
        return b.coeffs[0].clone().pow(a.degree() as i32);
    }
    if a.degree() == 0 {
        return a.coeffs[0].clone().pow(b.degree() as i32);
    }
    let (_, r) = divmod(a, b);
    if r.is_zero() {
        return BigRational::zero();
    }
    let sign = if (a.degree() * b.degree()) % 2 == 1 {
        -BigRational::one()
    } else {
        BigRational::one()
    };
    let lead = b.leading().unwrap().clone();
    sign * lead.pow((a.degree() - r.degree()) as i32) * resultant(b, &r)
}

/// Discriminant of a monic integer polynomial.
pub fn discriminant(p: &IntPolynomial) -> BigInt {
    assert!(p.is_monic());
    let n = p.degree();
    let res = resultant(&QPoly::from_int(p), &QPoly::from_int(&p.derivative()));
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
    let d = res * BigRational::from_integer(BigInt::from(sign));
    debug_assert!(d.is_integer());
    d.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn discriminants_of_shipped_polynomials() {
        // Conductor-7 cyclic cubic.
        let cubic = IntPolynomial::from_i64(&[-1, -2, 1, 1]);
        assert_eq!(discriminant(&cubic), BigInt::from(49));
        // x^3 - 2
        let c2 = IntPolynomial::from_i64(&[-2, 0, 0, 1]);
        assert_eq!(discriminant(&c2), BigInt::from(-108));
        // x^2 - 3
        let q3 = IntPolynomial::from_i64(&[-3, 0, 1]);
        assert_eq!(discriminant(&q3), BigInt::from(12));
        // x^2 + 1
        let qi = IntPolynomial::from_i64(&[1, 0, 1]);
        assert_eq!(discriminant(&qi), BigInt::from(-4));
    }

    #[test]
    fn inverse_mod_round_trip() {
        let p = IntPolynomial::from_i64(&[-1, -2, 1, 1]);
        let eta = QPoly::new(vec![q(5), q(8)]);
        let inv = eta.inverse_mod(&p).unwrap();
        assert!(eta.mul_mod(&inv, &p).is_one());
    }

    #[test]
    fn compose_reduces() {
        let p = IntPolynomial::from_i64(&[-3, 0, 1]); // x^2 - 3
        let sq = QPoly::new(vec![q(0), q(0), q(1)]); // x^2
        let reduced = sq.rem_monic(&p);
        assert_eq!(reduced, QPoly::constant(q(3)));
        // (x -> -x) applied to 2x + 1
        let map = QPoly::new(vec![q(0), q(-1)]);
        let f = QPoly::new(vec![q(1), q(2)]);
        assert_eq!(f.compose_mod(&map, &p), QPoly::new(vec![q(1), q(-2)]));
    }
}
