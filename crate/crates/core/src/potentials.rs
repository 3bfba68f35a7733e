//! Scalar potentials phi(x) and the partner potentials V^(1,2) = phi^2 ∓ phi'.
//!
//! A [`PotentialSpec`] selects the family, the X_m codimension `m`
//! (`m = 0` is the conventional potential) and whether the parametric
//! substitution is applied. Parametric variants are evaluated by
//! substituting `(A, B) -> (B + 1/2, A - 1/2)` (Scarf) or
//! `(A, B) -> (B - 1/2, A + 1/2)` (Pöschl-Teller) into the
//! non-parametric closed forms; see [`PotentialSpec::shape`].
//!
//! The partner potentials are always built from phi and its analytic
//! derivative, never from expanded closed-form V expressions.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numerics::Grid;
use crate::spectra;
use crate::xortho::{self, first_vanishing_node, jac, lag, XmJacobiSpec, XmLaguerreSpec};

/// Inset applied to the singular Scarf endpoints.
pub const EDGE_INSET: f64 = 1e-6;
/// Tail tolerance used when no other is requested.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
/// Right edge used for half-line problems without a normalizable H1 ground state.
pub const FALLBACK_RIGHT_EDGE: f64 = 40.0;
const MARCH_LIMIT: f64 = 1e3;

type JetMap = Box<dyn Fn(Jet) -> Jet>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    RadialOscillator { omega: f64, ell: f64 },
    TrigScarf { a: f64, b: f64 },
    HypPoschlTeller { a: f64, b: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::RadialOscillator { .. } => "oscillator",
            Family::TrigScarf { .. } => "scarf",
            Family::HypPoschlTeller { .. } => "pt",
        }
    }
}

/// Closed-form parameters after the parametric substitution (if any).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Oscillator { omega: f64, ell: f64 },
    Scarf { a: f64, b: f64 },
    PoschlTeller { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    #[serde(flatten)]
    pub family: Family,
    pub m: u32,
    pub parametric: bool,
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::RadialOscillator { omega, ell } => {
                write!(f, "oscillator(omega={omega}, ell={ell})")?
            }
            Family::TrigScarf { a, b } => write!(f, "scarf(A={a}, B={b})")?,
            Family::HypPoschlTeller { a, b } => write!(f, "pt(A={a}, B={b})")?,
        }
        write!(f, " m={}", self.m)?;
        if self.parametric {
            write!(f, " parametric")?;
        }
        Ok(())
    }
}

/// Which partner Hamiltonian: `One` is `A†A` (V = phi^2 - phi'), `Two` is `AA†`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    None,
    RightTruncatedAt(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainInfo {
    pub x_min: f64,
    pub x_max: f64,
    pub open_left: bool,
    pub open_right: bool,
    pub truncation: Truncation,
}

impl DomainInfo {
    pub fn finite_bounds(&self) -> Result<(f64, f64)> {
        if self.x_min.is_finite() && self.x_max.is_finite() {
            Ok((self.x_min, self.x_max))
        } else {
            Err(Error::InvalidArgument(format!(
                "domain ({}, {}) must be truncated before gridding",
                self.x_min, self.x_max
            )))
        }
    }
}

/// Jacobi indices of the Scarf and Pöschl-Teller families.
///
/// `alpha`/`beta` follow the family's non-parametric formulas evaluated at
/// the raw `(A, B)`; `gamma`/`delta` are the parametric Scarf indices and
/// `eta`/`zeta` the parametric Pöschl-Teller ones, also in terms of raw
/// `(A, B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiIndices {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eta: f64,
    pub zeta: f64,
}

impl PotentialSpec {
    pub fn new(family: Family, m: u32, parametric: bool) -> Self {
        PotentialSpec {
            family,
            m,
            parametric,
        }
    }

    pub fn conventional(&self) -> Self {
        PotentialSpec { m: 0, ..*self }
    }

    /// Parameters that enter the closed forms.
    pub fn shape(&self) -> Shape {
        match (self.family, self.parametric) {
            (Family::RadialOscillator { omega, ell }, _) => Shape::Oscillator { omega, ell },
            (Family::TrigScarf { a, b }, false) => Shape::Scarf { a, b },
            (Family::TrigScarf { a, b }, true) => Shape::Scarf {
                a: b + 0.5,
                b: a - 0.5,
            },
            (Family::HypPoschlTeller { a, b }, false) => Shape::PoschlTeller { a, b },
            (Family::HypPoschlTeller { a, b }, true) => Shape::PoschlTeller {
                a: b - 0.5,
                b: a + 0.5,
            },
        }
    }

    pub fn jacobi_indices(&self) -> Option<JacobiIndices> {
        let (a, b, scarf) = match self.family {
            Family::RadialOscillator { .. } => return None,
            Family::TrigScarf { a, b } => (a, b, true),
            Family::HypPoschlTeller { a, b } => (a, b, false),
        };
        let (alpha, beta) = if scarf {
            (a - b - 0.5, a + b - 0.5)
        } else {
            (-a + b - 0.5, -a - b - 0.5)
        };
        Some(JacobiIndices {
            alpha,
            beta,
            gamma: b - a + 0.5,
            delta: a + b - 0.5,
            eta: a - b + 0.5,
            zeta: -a - b - 0.5,
        })
    }

    /// (alpha, beta) actually used by the closed forms of this spec.
    pub(crate) fn effective_jacobi(&self) -> Option<(f64, f64)> {
        match self.shape() {
            Shape::Oscillator { .. } => None,
            Shape::Scarf { a, b } => Some((a - b - 0.5, a + b - 0.5)),
            Shape::PoschlTeller { a, b } => Some((-a + b - 0.5, -a - b - 0.5)),
        }
    }

    pub(crate) fn xm_laguerre(&self) -> Option<XmLaguerreSpec> {
        match self.shape() {
            Shape::Oscillator { ell, .. } => Some(XmLaguerreSpec::new(self.m, ell + 0.5)),
            _ => None,
        }
    }

    pub(crate) fn xm_jacobi(&self) -> Option<XmJacobiSpec> {
        self.effective_jacobi()
            .map(|(alpha, beta)| XmJacobiSpec::new(self.m, alpha, beta))
    }

    /// The untruncated physical domain.
    pub fn natural_domain(&self) -> DomainInfo {
        match self.family {
            Family::TrigScarf { .. } => DomainInfo {
                x_min: -FRAC_PI_2,
                x_max: FRAC_PI_2,
                open_left: true,
                open_right: true,
                truncation: Truncation::None,
            },
            _ => DomainInfo {
                x_min: 0.0,
                x_max: f64::INFINITY,
                open_left: true,
                open_right: true,
                truncation: Truncation::None,
            },
        }
    }

    fn check_windows(&self) -> Result<()> {
        let invalid = |s: &str| Err(Error::InvalidSpec(s.to_string()));
        let finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        match (self.family, self.parametric) {
            (Family::RadialOscillator { omega, ell }, parametric) => {
                if !finite(&[omega, ell]) {
                    return invalid("finite omega, ell");
                }
                if !(omega > 0.0) {
                    return invalid("omega > 0");
                }
                if !(ell > 0.0) {
                    return invalid("ell > 0");
                }
                if parametric {
                    return invalid("no parametric variant of the radial oscillator");
                }
            }
            (Family::TrigScarf { a, b }, false) => {
                if !finite(&[a, b]) {
                    return invalid("finite A, B");
                }
                if !(0.0 < b && b < a - 1.0) {
                    return invalid("0 < B < A - 1");
                }
            }
            (Family::TrigScarf { a, b }, true) => {
                if !finite(&[a, b]) {
                    return invalid("finite A, B");
                }
                if !(b > a - 1.0 && a - 1.0 > 0.0) {
                    return invalid("B > A - 1 > 0");
                }
            }
            (Family::HypPoschlTeller { a, b }, false) => {
                if !finite(&[a, b]) {
                    return invalid("finite A, B");
                }
                if !(b > a + 1.0 && a + 1.0 > 1.0) {
                    return invalid("B > A + 1 > 1");
                }
            }
            (Family::HypPoschlTeller { a, b }, true) => {
                if !finite(&[a, b]) {
                    return invalid("finite A, B");
                }
                if !(a + 1.0 > b && b > 0.0) {
                    return invalid("A + 1 > B > 0");
                }
            }
        }
        Ok(())
    }

    /// Check the parameter window and, for `m >= 1`, that neither the
    /// eigenfunction denominator nor the ground-state numerator vanishes
    /// on the (truncated) domain.
    pub fn validate(&self) -> Result<DomainInfo> {
        self.check_windows()?;
        if self.m >= 1 {
            let scan_domain = self.conventional().truncate_domain(DEFAULT_TAIL_TOL)?;
            let grid = Grid::over(&scan_domain, xortho::SCAN_NODES)?;
            let polys: [(&str, JetMap); 2] = if let Some(l) = self.xm_laguerre() {
                [
                    ("L^(alpha-1)_m(-z)", Box::new(move |z| l.denominator_jet(z))),
                    ("L^(alpha)_m(-z)", Box::new(move |z| l.numerator_jet(z))),
                ]
            } else {
                let j = self.xm_jacobi().expect("jacobi family");
                [
                    (
                        "P^(-alpha-1,beta-1)_m(z)",
                        Box::new(move |z| j.denominator_jet(z)),
                    ),
                    (
                        "P^(-alpha-2,beta)_m(z)",
                        Box::new(move |z| j.numerator_jet(z)),
                    ),
                ]
            };
            for (name, poly) in polys.iter() {
                let at = first_vanishing_node(
                    |x| {
                        let z = self.z_jet(Jet::constant(x));
                        poly(z).v
                    },
                    &grid,
                );
                if let Some(x) = at {
                    return Err(Error::SingularExtension {
                        polynomial: name.to_string(),
                        x,
                    });
                }
            }
        }
        Ok(self.natural_domain())
    }

    pub(crate) fn check_interior(&self, x: f64) -> Result<()> {
        let d = self.natural_domain();
        if x.is_finite() && x > d.x_min && x < d.x_max {
            Ok(())
        } else {
            Err(Error::Domain {
                x,
                x_min: d.x_min,
                x_max: d.x_max,
            })
        }
    }

    /// z(x) as a jet; no domain check.
    pub(crate) fn z_jet(&self, x: Jet) -> Jet {
        match self.shape() {
            Shape::Oscillator { omega, .. } => x * x * (0.5 * omega),
            Shape::Scarf { .. } => x.sin(),
            Shape::PoschlTeller { .. } => x.cosh(),
        }
    }

    /// The family coordinate z(x) and dz/dx.
    pub fn map_z(&self, x: f64) -> Result<(f64, f64)> {
        self.check_interior(x)?;
        let z = self.z_jet(Jet::var(x));
        Ok((z.v, z.d1))
    }

    /// `(1 - z, 1 + z)` for Scarf and `(z - 1, z + 1)` for Pöschl-Teller,
    /// with the small factor evaluated without cancellation.
    pub(crate) fn edge_factors(&self, x: f64) -> (Jet, Jet) {
        match self.family {
            Family::TrigScarf { .. } => {
                let (s, c) = x.sin_cos();
                let lo = 2.0 * (FRAC_PI_4 - 0.5 * x).sin().powi(2);
                let hi = 2.0 * (FRAC_PI_4 + 0.5 * x).sin().powi(2);
                (Jet::new(lo, -c, s), Jet::new(hi, c, -s))
            }
            _ => {
                let (s, c) = (x.sinh(), x.cosh());
                let lo = 2.0 * (0.5 * x).sinh().powi(2);
                (Jet::new(lo, s, c), Jet::new(c + 1.0, s, c))
            }
        }
    }

    /// phi with its first two x-derivatives.
    pub fn phi_jet(&self, x: f64) -> Result<Jet> {
        self.check_interior(x)?;
        Ok(self.phi_jet_unchecked(x))
    }

    fn phi_jet_unchecked(&self, x: f64) -> Jet {
        let t = Jet::var(x);
        let m = self.m as i32;
        match self.shape() {
            Shape::Oscillator { omega, ell } => {
                let con = t * (0.5 * omega) - t.recip() * (ell + 1.0);
                if m == 0 {
                    return con;
                }
                let z = self.z_jet(t);
                let mz = -z;
                let ratio = lag(m - 1, ell + 0.5, mz) / lag(m, ell - 0.5, mz)
                    - lag(m - 1, ell + 1.5, mz) / lag(m, ell + 0.5, mz);
                con + t * ratio * omega
            }
            Shape::Scarf { a, b } => {
                let con = t.tan() * a - t.cos().recip() * b;
                if m == 0 {
                    return con;
                }
                con + self.jacobi_rational(self.z_jet(t), t.cos())
            }
            Shape::PoschlTeller { a, b } => {
                let sh = t.sinh();
                let con = t.cosh() / sh * a - sh.recip() * b;
                if m == 0 {
                    return con;
                }
                con + self.jacobi_rational(self.z_jet(t), sh)
            }
        }
    }

    /// -(beta - alpha + m - 1)/2 z' [P^{(-a-1,b+1)}_{m-1}/P^{(-a-2,b)}_m - P^{(-a,b)}_{m-1}/P^{(-a-1,b-1)}_m]
    fn jacobi_rational(&self, z: Jet, dz: Jet) -> Jet {
        let (a, b) = self.effective_jacobi().expect("jacobi family");
        let m = self.m as i32;
        let coeff = -(b - a + m as f64 - 1.0) / 2.0;
        let ratio = jac(m - 1, -a - 1.0, b + 1.0, z) / jac(m, -a - 2.0, b, z)
            - jac(m - 1, -a, b, z) / jac(m, -a - 1.0, b - 1.0, z);
        dz * ratio * coeff
    }

    pub fn phi(&self, x: f64) -> Result<f64> {
        Ok(self.phi_jet(x)?.v)
    }

    pub fn phi_prime(&self, x: f64) -> Result<f64> {
        Ok(self.phi_jet(x)?.d1)
    }

    /// V^(1) = phi^2 - phi' or V^(2) = phi^2 + phi'.
    pub fn potential_v(&self, which: Which, x: f64) -> Result<f64> {
        let p = self.phi_jet(x)?;
        Ok(match which {
            Which::One => p.v * p.v - p.d1,
            Which::Two => p.v * p.v + p.d1,
        })
    }

    /// Finite domain for gridding. Half-line problems are cut where the
    /// analytic ground state drops below `tail_tol` times its maximum; the
    /// singular Scarf endpoints are inset by [`EDGE_INSET`].
    pub fn truncate_domain(&self, tail_tol: f64) -> Result<DomainInfo> {
        if !(tail_tol > 0.0 && tail_tol <= 1e-6) {
            return Err(Error::InvalidArgument(format!(
                "tail_tol = {tail_tol} must lie in (0, 1e-6]"
            )));
        }
        let natural = self.natural_domain();
        if let Family::TrigScarf { .. } = self.family {
            return Ok(DomainInfo {
                x_min: natural.x_min + EDGE_INSET,
                x_max: natural.x_max - EDGE_INSET,
                ..natural
            });
        }
        let right = if spectra::max_level(self).is_empty() {
            FALLBACK_RIGHT_EDGE
        } else {
            self.ground_state_tail(tail_tol)?
        };
        Ok(DomainInfo {
            x_max: right,
            truncation: Truncation::RightTruncatedAt(right),
            ..natural
        })
    }

    fn ground_state_tail(&self, tail_tol: f64) -> Result<f64> {
        let log_tol = tail_tol.ln();
        let lnpsi = |x: f64| spectra::ln_abs_eigenfunction(self, 0, x);
        let step = 1e-2;
        let mut best = f64::NEG_INFINITY;
        let mut best_x = step;
        let mut i = 1;
        loop {
            let x = i as f64 * step;
            if x >= MARCH_LIMIT {
                return Err(Error::Numeric(format!(
                    "ground state of {self} does not decay below the tail tolerance"
                )));
            }
            let v = lnpsi(x)?;
            if !v.is_finite() {
                // z = cosh x passes ~1e154 near x = 355 and the polynomial
                // products overflow; only very shallow wells get this far.
                return Err(Error::Numeric(format!(
                    "ground state of {self} decays too slowly: the closed form overflows at x = {x} before reaching the tail tolerance"
                )));
            }
            if v > best {
                best = v;
                best_x = x;
            } else if v - best <= log_tol {
                break;
            }
            i += 1;
        }
        best = best.max(golden_max(&lnpsi, best_x - step, best_x + step)?);
        // the refined maximum can only move the crossing outwards
        while lnpsi(i as f64 * step)? - best > log_tol {
            i += 1;
        }
        let (mut lo, mut hi) = ((i - 1) as f64 * step, i as f64 * step);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if lnpsi(mid)? - best <= log_tol {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

/// Maximum of a unimodal function on [lo, hi] by golden-section search.
fn golden_max(f: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..80 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = f(d)?;
        }
    }
    Ok(fc.max(fd))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn osc(m: u32) -> PotentialSpec {
        PotentialSpec::new(
            Family::RadialOscillator {
                omega: 2.0,
                ell: 1.0,
            },
            m,
            false,
        )
    }

    fn scarf(m: u32) -> PotentialSpec {
        PotentialSpec::new(Family::TrigScarf { a: 3.0, b: 1.0 }, m, false)
    }

    #[test]
    fn validate_examples() {
        assert!(scarf(1).validate().is_ok());
        let bad = PotentialSpec::new(Family::TrigScarf { a: 1.0, b: 3.0 }, 0, false);
        match bad.validate() {
            Err(Error::InvalidSpec(s)) => assert_eq!(s, "0 < B < A - 1"),
            other => panic!("unexpected {other:?}"),
        }
        let pt = PotentialSpec::new(Family::HypPoschlTeller { a: 1.0, b: 3.0 }, 2, false);
        assert!(pt.validate().is_ok());
        let param_osc = PotentialSpec::new(
            Family::RadialOscillator {
                omega: 1.0,
                ell: 1.0,
            },
            0,
            true,
        );
        assert!(param_osc.validate().is_err());
    }

    #[test]
    fn parametric_windows() {
        let ok = PotentialSpec::new(Family::TrigScarf { a: 1.5, b: 2.5 }, 0, true);
        assert!(ok.validate().is_ok());
        let bad = PotentialSpec::new(Family::TrigScarf { a: 0.5, b: 2.5 }, 0, true);
        assert!(matches!(bad.validate(), Err(Error::InvalidSpec(_))));
        let ok = PotentialSpec::new(Family::HypPoschlTeller { a: 2.5, b: 1.5 }, 0, true);
        assert!(ok.validate().is_ok());
        let bad = PotentialSpec::new(Family::HypPoschlTeller { a: 0.2, b: 1.5 }, 0, true);
        assert!(matches!(bad.validate(), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn singular_extension_rejected() {
        // 2A - 1 - 2Bz with A = 3.2, B = 2.9 vanishes at z ~ 0.93 (window 0 < B < A-1 fails first),
        // so build a parametric Scarf whose substituted X_1 denominator 2B - (2A-1) z crosses zero.
        let spec = PotentialSpec::new(Family::TrigScarf { a: 2.5, b: 1.8 }, 1, true);
        assert!(spec.check_windows().is_ok());
        assert!(matches!(
            spec.validate(),
            Err(Error::SingularExtension { .. })
        ));
    }

    #[test]
    fn map_z_examples() {
        assert_eq!(osc(0).map_z(1.0).unwrap(), (1.0, 2.0));
        assert_eq!(scarf(0).map_z(0.0).unwrap(), (0.0, 1.0));
        let pt = PotentialSpec::new(Family::HypPoschlTeller { a: 1.0, b: 3.0 }, 0, false);
        let (z, _) = pt.map_z(1e-9).unwrap();
        assert!((z - 1.0).abs() < 1e-15);
        assert!(matches!(scarf(0).map_z(2.0), Err(Error::Domain { .. })));
        assert!(matches!(osc(0).map_z(0.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn phi_examples() {
        assert!((osc(0).phi(1.0).unwrap() + 1.0).abs() < 1e-15);
        // X_1 rational term 8/35 at omega = 2, ell = 1, r = 1
        let rat = osc(1).phi(1.0).unwrap() - osc(0).phi(1.0).unwrap();
        assert!((rat - 8.0 / 35.0).abs() < 1e-15);
        assert!((scarf(0).phi(0.0).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn phi_prime_examples() {
        assert!((osc(0).phi_prime(1.0).unwrap() - 3.0).abs() < 1e-14);
        assert!((scarf(0).phi_prime(0.0).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn potential_examples_both_routes() {
        let v = osc(0).potential_v(Which::One, 1.0).unwrap();
        // omega^2 r^2/4 + l(l+1)/r^2 - omega(l+3/2)
        let display = 4.0 / 4.0 + 2.0 - 2.0 * 2.5;
        assert!((v + 2.0).abs() < 1e-14);
        assert!((v - display).abs() < 1e-14);
        let v = scarf(0).potential_v(Which::One, 0.0).unwrap();
        let display = (2.0 * 3.0 + 1.0) - 0.0 - 9.0;
        assert!((v + 2.0).abs() < 1e-14);
        assert!((v - display).abs() < 1e-14);
    }

    #[test]
    fn partners_agree_where_phi_is_flat() {
        let mut specs = Vec::new();
        for m in 1..=3 {
            for (p, q) in [(0.5, 0.5), (1.0, 3.0), (2.0, 1.0), (0.3, 5.0)] {
                specs.push(PotentialSpec::new(
                    Family::RadialOscillator { omega: p, ell: q },
                    m,
                    false,
                ));
            }
            for (a, b) in [(3.0, 1.0), (6.0, 1.0), (4.0, 2.5), (2.2, 0.1)] {
                specs.push(PotentialSpec::new(Family::TrigScarf { a, b }, m, false));
            }
            for (a, b) in [(1.0, 3.0), (2.0, 5.0), (0.5, 4.0), (3.0, 4.5)] {
                specs.push(PotentialSpec::new(
                    Family::HypPoschlTeller { a, b },
                    m,
                    false,
                ));
            }
        }
        let specs: Vec<_> = specs
            .into_iter()
            .filter(|s| s.validate().is_ok() && s.truncate_domain(1e-12).is_ok())
            .collect();
        let mut found = 0;
        for &s in &specs {
            let d = s.truncate_domain(1e-12).unwrap();
            let grid = Grid::over(&d, 2000).unwrap();
            let dphi = |x: f64| s.phi_prime(x).unwrap();
            for w in grid.nodes().collect::<Vec<_>>().windows(2) {
                let (mut lo, mut hi) = (w[0], w[1]);
                if dphi(lo) * dphi(hi) >= 0.0 {
                    continue;
                }
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if dphi(lo) * dphi(mid) <= 0.0 {
                        hi = mid
                    } else {
                        lo = mid
                    }
                }
                let x = 0.5 * (lo + hi);
                let v1 = s.potential_v(Which::One, x).unwrap();
                let v2 = s.potential_v(Which::Two, x).unwrap();
                assert!((v1 - v2).abs() < 1e-9 * v1.abs().max(1.0), "{s} at {x}");
                found += 1;
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn shallow_well_tail_overflow_is_reported() {
        // A' = B - 1/2 = 0.075: psi ~ exp(-0.075 r) needs r ~ 370 to reach 1e-12
        let s = PotentialSpec::new(Family::HypPoschlTeller { a: 0.82, b: 0.575 }, 1, true);
        s.validate().unwrap();
        let err = s.truncate_domain(1e-12).unwrap_err();
        assert!(err.to_string().contains("decays too slowly"), "{err}");
        assert!(s.truncate_domain(1e-6).is_ok());
    }

    #[test]
    fn truncation_examples() {
        let d = osc(0).truncate_domain(1e-12).unwrap();
        // oracle: bisection on r^2 exp(-r^2/2) = 1e-12 * 2/e
        let target = 1e-12 * 2.0 * (-1.0f64).exp();
        let (mut lo, mut hi) = (2.0f64, 20.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid * (-mid * mid / 2.0).exp() > target {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((d.x_max - lo).abs() < 1e-6, "{} vs {lo}", d.x_max);
        assert!((lo - 7.98).abs() < 0.05);
        let s = scarf(2).truncate_domain(1e-12).unwrap();
        assert_eq!(s.x_min, -FRAC_PI_2 + 1e-6);
        assert_eq!(s.x_max, FRAC_PI_2 - 1e-6);
        let pt = PotentialSpec::new(Family::HypPoschlTeller { a: 1.0, b: 3.0 }, 0, false);
        let d = pt.truncate_domain(1e-12).unwrap();
        // oracle: tanh^2(r/2) sech^4(r/2) ... = 1e-12 * max, psi0 = sinh^2(r/2) cosh^-4(r/2)
        let f = |r: f64| (0.5 * r).sinh().powi(2) / (0.5 * r).cosh().powi(4);
        let target = 1e-12 * 0.25;
        let (mut lo, mut hi) = (2.0f64, 60.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > target {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((d.x_max - lo).abs() < 1e-6, "{} vs {lo}", d.x_max);
        assert!((lo - 30.0).abs() < 1.0);
        assert!(osc(0).truncate_domain(1e-3).is_err());
    }

    #[test]
    fn substitution_matches_parametric_indices() {
        let s = PotentialSpec::new(Family::TrigScarf { a: 1.5, b: 2.5 }, 1, true);
        let idx = s.jacobi_indices().unwrap();
        let (a, b) = s.effective_jacobi().unwrap();
        assert!((a - idx.gamma).abs() < 1e-15 && (b - idx.delta).abs() < 1e-15);
        let p = PotentialSpec::new(Family::HypPoschlTeller { a: 2.5, b: 1.5 }, 1, true);
        let idx = p.jacobi_indices().unwrap();
        let (a, b) = p.effective_jacobi().unwrap();
        assert!((a - idx.eta).abs() < 1e-15 && (b - idx.zeta).abs() < 1e-15);
    }
}
