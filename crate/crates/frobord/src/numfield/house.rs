//! Numeric embeddings: Durand-Kerner roots of the defining polynomial and
//! the Archimedean size max_sigma |eta^sigma|.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::intarith::IntPolynomial;

/// All complex roots of a monic integer polynomial, to near machine accuracy.
pub fn complex_roots(poly: &IntPolynomial) -> Vec<Complex64> {
    let n = poly.degree();
    assert!(n >= 1 && poly.is_monic());
    let coeffs: Vec<f64> = poly
        .coeffs()
        .iter()
        .map(|c| c.to_f64().expect("coefficient out of f64 range"))
        .collect();

    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let eval_deriv = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &c) in coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * i as f64;
        }
        acc
    };

    // Durand-Kerner from staggered points on a circle enclosing all roots.
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .fold(0.0f64, |m, &c| m.max(c.abs()));
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.7, angle)
        })
        .collect();
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 * radius {
            break;
        }
    }
    // Newton polish and a residual-based error audit.
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = eval_deriv(*r);
            if d.norm() > 0.0 {
                *r -= eval(*r) / d;
            }
        }
        let err = eval(*r).norm() / eval_deriv(*r).norm().max(f64::MIN_POSITIVE);
        assert!(
            err < 1e-10 * (1.0 + r.norm()),
            "root refinement did not converge for {poly}"
        );
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    roots
}

/// max over roots of |sum_k c_k root^k| / nu, with the integer part evaluated
/// at each embedding. The residual audit in `complex_roots` keeps the
/// relative error of the returned value within 1e-9.
pub fn house_of(poly: &IntPolynomial, numerators: &[num_bigint::BigInt], nu: f64) -> f64 {
    if poly.degree() == 0 || numerators.iter().skip(1).all(num_traits::Zero::is_zero) {
        let c0 = numerators
            .first()
            .map(|c| c.to_f64().unwrap().abs())
            .unwrap_or(0.0);
        return c0 / nu;
    }
    let nums: Vec<f64> = numerators.iter().map(|c| c.to_f64().unwrap()).collect();
    let mut best = 0.0f64;
    for root in complex_roots(poly) {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in nums.iter().rev() {
            acc = acc * root + c;
        }
        best = best.max(acc.norm());
    }
    best / nu
}
