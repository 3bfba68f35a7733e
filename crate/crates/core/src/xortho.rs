//! Exceptional X_m Laguerre and Jacobi polynomials.
//!
//! Both families are assembled from classical polynomials:
//!
//! ```text
//! Lhat^{(a)}_{n+m}(z) = L^{(a)}_m(-z) L^{(a-1)}_n(z) + L^{(a-1)}_m(-z) L^{(a)}_{n-1}(z)
//!
//! Phat^{(a,b)}_{n+m}(z) = (-1)^m [ (1+a+b+n)/(2(1+a+n)) (z-1) P^{(-a-1,b-1)}_m P^{(a+2,b)}_{n-1}
//!                                + (1+a-m)/(1+a+n)   P^{(-2-a,b)}_m P^{(a+1,b-1)}_n ]
//! ```
//!
//! with `L_{-1} = P_{-1} = 0`, so `n = 0` is admissible. The extended
//! eigenfunctions divide by `L^{(a-1)}_m(-z)` and `P^{(-a-1,b-1)}_m(z)`
//! respectively, and the extended scalar potentials additionally divide by
//! `L^{(a)}_m(-z)` and `P^{(-a-2,b)}_m(z)` (the ground-state numerators).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numerics::Grid;
use crate::specialfn::{jacobi_d012, laguerre_d012};

/// Nodes used when scanning a denominator over a domain.
pub const SCAN_NODES: usize = 4096;
/// Magnitude below which a scanned denominator counts as vanishing.
pub const SCAN_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XmLaguerreSpec {
    pub m: u32,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XmJacobiSpec {
    pub m: u32,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XmKind {
    Laguerre(XmLaguerreSpec),
    Jacobi(XmJacobiSpec),
}

/// L^{(alpha)}_n lifted to a jet in x through z.
pub(crate) fn lag(n: i32, alpha: f64, z: Jet) -> Jet {
    z.compose(laguerre_d012(n, alpha, z.v))
}

/// P^{(alpha,beta)}_n lifted to a jet in x through z.
pub(crate) fn jac(n: i32, alpha: f64, beta: f64, z: Jet) -> Jet {
    z.compose(jacobi_d012(n, alpha, beta, z.v))
}

fn check_z(z: f64) -> Result<()> {
    if z.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("z = {z} is not finite")))
    }
}

impl XmLaguerreSpec {
    pub fn new(m: u32, alpha: f64) -> Self {
        XmLaguerreSpec { m, alpha }
    }

    pub(crate) fn hat_jet(&self, n: usize, z: Jet) -> Jet {
        let (m, a, n) = (self.m as i32, self.alpha, n as i32);
        let mz = -z;
        lag(m, a, mz) * lag(n, a - 1.0, z) + lag(m, a - 1.0, mz) * lag(n - 1, a, z)
    }

    /// L^{(a-1)}_m(-z): divides the extended eigenfunctions.
    pub(crate) fn denominator_jet(&self, z: Jet) -> Jet {
        lag(self.m as i32, self.alpha - 1.0, -z)
    }

    /// L^{(a)}_m(-z): the ground-state numerator, a second denominator of phi.
    pub(crate) fn numerator_jet(&self, z: Jet) -> Jet {
        lag(self.m as i32, self.alpha, -z)
    }
}

impl XmJacobiSpec {
    pub fn new(m: u32, alpha: f64, beta: f64) -> Self {
        XmJacobiSpec { m, alpha, beta }
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        let d = self.alpha + 1.0 + n as f64;
        if d == 0.0 {
            return Err(Error::DegenerateParameter(format!(
                "alpha + 1 + n = 0 (alpha = {}, n = {n})",
                self.alpha
            )));
        }
        Ok(())
    }

    pub(crate) fn hat_jet(&self, n: usize, z: Jet) -> Jet {
        let (m, a, b) = (self.m as i32, self.alpha, self.beta);
        let nf = n as f64;
        let n = n as i32;
        let c1 = (1.0 + a + b + nf) / (2.0 * (1.0 + a + nf));
        let c2 = (1.0 + a - m as f64) / (a + 1.0 + nf);
        let first = (z - 1.0) * jac(m, -a - 1.0, b - 1.0, z) * jac(n - 1, a + 2.0, b, z);
        let second = jac(m, -2.0 - a, b, z) * jac(n, a + 1.0, b - 1.0, z);
        let sum = first * c1 + second * c2;
        if m % 2 == 0 {
            sum
        } else {
            -sum
        }
    }

    /// P^{(-a-1,b-1)}_m(z): divides the extended eigenfunctions.
    pub(crate) fn denominator_jet(&self, z: Jet) -> Jet {
        jac(self.m as i32, -self.alpha - 1.0, self.beta - 1.0, z)
    }

    /// P^{(-a-2,b)}_m(z): the ground-state numerator, a second denominator of phi.
    pub(crate) fn numerator_jet(&self, z: Jet) -> Jet {
        jac(self.m as i32, -self.alpha - 2.0, self.beta, z)
    }
}

/// Lhat^{(alpha)}_{n+m}(z).
pub fn xm_laguerre(spec: &XmLaguerreSpec, n: usize, z: f64) -> Result<f64> {
    check_z(z)?;
    Ok(spec.hat_jet(n, Jet::constant(z)).v)
}

/// L^{(alpha-1)}_m(-z).
pub fn xm_laguerre_denominator(spec: &XmLaguerreSpec, z: f64) -> Result<f64> {
    check_z(z)?;
    Ok(spec.denominator_jet(Jet::constant(z)).v)
}

/// Phat^{(alpha,beta)}_{n+m}(z).
pub fn xm_jacobi(spec: &XmJacobiSpec, n: usize, z: f64) -> Result<f64> {
    check_z(z)?;
    spec.check(n)?;
    Ok(spec.hat_jet(n, Jet::constant(z)).v)
}

/// P^{(-alpha-1,beta-1)}_m(z).
pub fn xm_jacobi_denominator(spec: &XmJacobiSpec, z: f64) -> Result<f64> {
    check_z(z)?;
    Ok(spec.denominator_jet(Jet::constant(z)).v)
}

/// Exact z-derivative of the exceptional polynomial of degree n+m.
pub fn xm_derivative(kind: &XmKind, n: usize, z: f64) -> Result<f64> {
    check_z(z)?;
    match kind {
        XmKind::Laguerre(s) => Ok(s.hat_jet(n, Jet::var(z)).d1),
        XmKind::Jacobi(s) => {
            s.check(n)?;
            Ok(s.hat_jet(n, Jet::var(z)).d1)
        }
    }
}

/// True iff `f` keeps one strict sign across every node of `grid`, staying
/// at least [`SCAN_THRESHOLD`] away from zero.
pub fn denominator_nonzero_scan(f: impl Fn(f64) -> f64, grid: &Grid) -> bool {
    first_vanishing_node(f, grid).is_none()
}

/// Location of the first node where the scan fails, if any.
pub(crate) fn first_vanishing_node(f: impl Fn(f64) -> f64, grid: &Grid) -> Option<f64> {
    let mut sign = 0.0;
    for x in grid.nodes() {
        let v = f(x);
        if !v.is_finite() || v.abs() < SCAN_THRESHOLD {
            return Some(x);
        }
        if sign == 0.0 {
            sign = v.signum();
        } else if v.signum() != sign {
            return Some(x);
        }
    }
    None
}
