//! Dense integer polynomials, constant term first.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Integer polynomial with arbitrary-precision coefficients, constant first.
/// The zero polynomial is the empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    /// X^n - 1.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = -BigInt::one();
        coeffs[n] = BigInt::one();
        IntPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0 by convention.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    /// Exact division; panics if the divisor does not divide exactly.
    /// Only used where exactness is a structural guarantee (cyclotomic towers).
    pub fn exact_div(&self, divisor: &IntPolynomial) -> IntPolynomial {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut rem = self.coeffs.clone();
        let d = divisor.degree();
        let lead = divisor.leading().unwrap().clone();
        assert!(self.degree() >= d, "exact_div: degree underflow");
        let mut quot = vec![BigInt::zero(); self.degree() - d + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + d].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = num_integer::div_rem(top, lead.clone());
            assert!(r.is_zero(), "exact_div: leading coefficient does not divide");
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        assert!(rem.iter().all(|c| c.is_zero()), "exact_div: nonzero remainder");
        IntPolynomial::new(quot)
    }

    /// Evaluate at an integer point by Horner's rule.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> IntPolynomial {
        if self.coeffs.len() <= 1 {
            return IntPolynomial::zero();
        }
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn coeffs_mod(&self, p: u64) -> Vec<u64> {
        let bp = BigInt::from(p);
        self.coeffs
            .iter()
            .map(|c| {
                let mut r = c % &bp;
                if r.is_negative() {
                    r += &bp;
                }
                u64::try_from(r).unwrap()
            })
            .collect()
    }

    /// Ordering key: degree first, then coefficients from the constant term up.
    pub fn order_key(&self) -> (usize, Vec<BigInt>) {
        (self.coeffs.len(), self.coeffs.clone())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
