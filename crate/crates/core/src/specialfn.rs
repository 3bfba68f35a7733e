//! Classical Laguerre and Jacobi polynomials and log-gamma.
//!
//! Polynomials are evaluated from their explicit finite sums with the
//! generalized binomial coefficients formed as products, so any real
//! (including negative or half-integer) parameter is admissible. Three-term
//! recurrences are avoided: for Jacobi parameters such as `beta = -A-B-1/2`
//! their denominators can vanish.

use crate::error::{Error, Result};

/// Degree of a classical polynomial; `-1` is the zero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyIndex(i32);

impl PolyIndex {
    /// The zero polynomial, referenced by the X_m displays at `n - 1 = -1`.
    pub const ZERO_POLY: PolyIndex = PolyIndex(-1);

    pub fn new(n: i32) -> Result<Self> {
        if n < -1 {
            return Err(Error::InvalidArgument(format!(
                "polynomial degree {n} < -1"
            )));
        }
        Ok(PolyIndex(n))
    }

    pub const fn degree(n: usize) -> Self {
        PolyIndex(n as i32)
    }

    pub fn get(self) -> i32 {
        self.0
    }
}

impl From<usize> for PolyIndex {
    fn from(n: usize) -> Self {
        PolyIndex::degree(n)
    }
}

fn check_finite(values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        if !v.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "{name} = {v} is not finite"
            )));
        }
    }
    Ok(())
}

/// Generalized binomial coefficient C(x, k) = x (x-1) ... (x-k+1) / k!.
pub fn binomial(x: f64, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (x - i as f64) / (i + 1) as f64;
    }
    acc
}

/// L^{(alpha)}_n(z) with `n = -1` giving 0.
pub fn laguerre(n: PolyIndex, alpha: f64, z: f64) -> Result<f64> {
    check_finite(&[("alpha", alpha), ("z", z)])?;
    Ok(laguerre_raw(n.0, alpha, z))
}

/// d/dz L^{(alpha)}_n(z) = -L^{(alpha+1)}_{n-1}(z).
pub fn laguerre_deriv(n: PolyIndex, alpha: f64, z: f64) -> Result<f64> {
    check_finite(&[("alpha", alpha), ("z", z)])?;
    Ok(laguerre_dk(n.0, alpha, 1, z))
}

/// P^{(alpha,beta)}_n(z) with `n = -1` giving 0.
pub fn jacobi(n: PolyIndex, alpha: f64, beta: f64, z: f64) -> Result<f64> {
    check_finite(&[("alpha", alpha), ("beta", beta), ("z", z)])?;
    Ok(jacobi_raw(n.0, alpha, beta, z))
}

/// d/dz P^{(alpha,beta)}_n(z) = (n+alpha+beta+1)/2 P^{(alpha+1,beta+1)}_{n-1}(z).
pub fn jacobi_deriv(n: PolyIndex, alpha: f64, beta: f64, z: f64) -> Result<f64> {
    check_finite(&[("alpha", alpha), ("beta", beta), ("z", z)])?;
    Ok(jacobi_dk(n.0, alpha, beta, 1, z))
}

/// Natural log of Gamma(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::GammaDomain(x));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// Forward three-term recurrence; stable for any alpha, unlike the explicit
/// alternating sum, which cancels badly once z exceeds a few units.
pub(crate) fn laguerre_raw(n: i32, alpha: f64, z: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - z) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// k-th z-derivative: (-1)^k L^{(alpha+k)}_{n-k}(z).
pub(crate) fn laguerre_dk(n: i32, alpha: f64, k: u32, z: f64) -> f64 {
    let v = laguerre_raw(n - k as i32, alpha + k as f64, z);
    if k.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

pub(crate) fn jacobi_raw(n: i32, alpha: f64, beta: f64, z: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let n = n as usize;
    let lo = (z - 1.0) / 2.0;
    let hi = (z + 1.0) / 2.0;
    let mut sum = 0.0;
    for k in 0..=n {
        sum += binomial(n as f64 + alpha, n - k)
            * binomial(n as f64 + beta, k)
            * lo.powi(k as i32)
            * hi.powi((n - k) as i32);
    }
    sum
}

/// k-th z-derivative: prod_{i<k} (n+alpha+beta+1+i)/2 * P^{(alpha+k,beta+k)}_{n-k}(z).
pub(crate) fn jacobi_dk(n: i32, alpha: f64, beta: f64, k: u32, z: f64) -> f64 {
    if n < k as i32 {
        return 0.0;
    }
    let mut scale = 1.0;
    for i in 0..k {
        scale *= (n as f64 + alpha + beta + 1.0 + i as f64) / 2.0;
    }
    scale * jacobi_raw(n - k as i32, alpha + k as f64, beta + k as f64, z)
}

/// Value, first and second z-derivative of L^{(alpha)}_n at z.
pub(crate) fn laguerre_d012(n: i32, alpha: f64, z: f64) -> [f64; 3] {
    [
        laguerre_raw(n, alpha, z),
        laguerre_dk(n, alpha, 1, z),
        laguerre_dk(n, alpha, 2, z),
    ]
}

/// Value, first and second z-derivative of P^{(alpha,beta)}_n at z.
pub(crate) fn jacobi_d012(n: i32, alpha: f64, beta: f64, z: f64) -> [f64; 3] {
    [
        jacobi_raw(n, alpha, beta, z),
        jacobi_dk(n, alpha, beta, 1, z),
        jacobi_dk(n, alpha, beta, 2, z),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(n: usize) -> PolyIndex {
        PolyIndex::degree(n)
    }

    fn central_diff(f: impl Fn(f64) -> f64, z: f64) -> f64 {
        let h = 1e-6;
        (f(z + h) - f(z - h)) / (2.0 * h)
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre(deg(0), 1.5, 7.3).unwrap(), 1.0);
        assert_eq!(laguerre(PolyIndex::ZERO_POLY, 0.5, 2.0).unwrap(), 0.0);
        // (a+1)(a+2)/2 - (a+2) z + z^2/2 at a = 1.5, z = 2
        let oracle = 2.5 * 3.5 / 2.0 - 3.5 * 2.0 + 2.0;
        assert!((oracle - (-0.625_f64)).abs() < 1e-15);
        assert!((laguerre(deg(2), 1.5, 2.0).unwrap() - oracle).abs() < 1e-14);
    }

    #[test]
    fn laguerre_deriv_examples() {
        assert_eq!(laguerre_deriv(deg(0), 2.0, 1.0).unwrap(), 0.0);
        assert!((laguerre_deriv(deg(1), 1.5, 0.7).unwrap() + 1.0).abs() < 1e-15);
        // the finite-difference oracle gives -(a+2) + z = -1.5 here
        let fd = central_diff(|z| laguerre_raw(2, 1.5, z), 2.0);
        assert!((fd + 1.5).abs() < 1e-8);
        assert!((laguerre_deriv(deg(2), 1.5, 2.0).unwrap() - fd).abs() < 1e-8);
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(deg(0), -2.5, 1.5, 0.3).unwrap(), 1.0);
        for z in [-0.9, 0.0, 0.37, 2.0] {
            assert!((jacobi(deg(1), 0.0, 0.0, z).unwrap() - z).abs() < 1e-15);
        }
        // (a+1) + (a+b+2)(z-1)/2 at z = 0
        let oracle = 2.5 + 6.0 * (-0.5);
        assert_eq!(oracle, -0.5);
        assert!((jacobi(deg(1), 1.5, 2.5, 0.0).unwrap() - oracle).abs() < 1e-15);
    }

    #[test]
    fn jacobi_deriv_examples() {
        assert_eq!(jacobi_deriv(deg(0), 1.0, 1.0, 0.5).unwrap(), 0.0);
        assert!((jacobi_deriv(deg(1), 0.0, 0.0, 0.9).unwrap() - 1.0).abs() < 1e-15);
        let fd = central_diff(|z| jacobi_raw(2, -1.5, 2.5, z), 0.4);
        assert!((jacobi_deriv(deg(2), -1.5, 2.5, 0.4).unwrap() - fd).abs() < 1e-8);
        // 2 * P^{(-1/2, 7/2)}_1(0.4) = 2 * (1/2 + 5 * (-0.3))
        assert!((fd + 2.0).abs() < 1e-8);
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        let half = std::f64::consts::PI.ln() / 2.0;
        assert!((log_gamma(0.5).unwrap() - half).abs() < 1e-12);
        assert!((half - 0.572_364_942_9).abs() < 1e-10);
        assert!((log_gamma(6.0).unwrap() - 120f64.ln()).abs() < 1e-12);
        assert!(matches!(log_gamma(0.0), Err(Error::GammaDomain(_))));
        assert!(matches!(log_gamma(-2.5), Err(Error::GammaDomain(_))));
    }

    #[test]
    fn log_gamma_against_factorials() {
        let mut fact = 1.0f64;
        for n in 1..=40u32 {
            // Gamma(n+1) = n!
            fact *= n as f64;
            let lg = log_gamma(n as f64 + 1.0).unwrap();
            assert!(
                (lg - fact.ln()).abs() < 1e-12 * fact.ln().max(1.0),
                "n = {n}"
            );
        }
    }

    #[test]
    fn non_finite_inputs_rejected() {
        assert!(laguerre(deg(2), f64::NAN, 1.0).is_err());
        assert!(jacobi(deg(2), 0.0, 0.0, f64::INFINITY).is_err());
        assert!(PolyIndex::new(-2).is_err());
    }

    #[test]
    fn laguerre_at_zero_is_binomial() {
        for n in 0..12 {
            for alpha in [-2.7, -0.5, 0.0, 1.5, 3.25] {
                let mut expect = 1.0;
                for j in 1..=n {
                    expect *= (alpha + j as f64) / j as f64;
                }
                let got = laguerre_raw(n, alpha, 0.0);
                assert!((got - expect).abs() <= 1e-12 * expect.abs().max(1e-300) + 1e-300);
            }
        }
    }
}
