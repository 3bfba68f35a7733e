//! Closed-form bound states of V^(1): energies, eigenfunctions, normalization
//! constants, partner states of V^(2) and the SUSY-breaking classification.
//!
//! Eigenfunctions are assembled as `weight * polynomial / denominator` with
//! the family weights
//!
//! ```text
//! oscillator  r^(l+1) exp(-z/2)
//! Scarf       (1 - z)^((A-B)/2) (1 + z)^((A+B)/2)
//! PT          (z - 1)^((B-A)/2) (z + 1)^(-(B+A)/2)
//! ```
//!
//! and the exceptional polynomials of [`crate::xortho`] (which reduce to the
//! classical ones at `m = 0`). Parametric specs use the substituted shape.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numerics::{quadrature, Grid};
use crate::potentials::{PotentialSpec, Shape};
use crate::specialfn::log_gamma;

/// Admissible bound-state indices of H1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelRange {
    Unbounded,
    UpTo(usize),
    Empty,
}

impl LevelRange {
    pub fn contains(&self, n: usize) -> bool {
        match *self {
            LevelRange::Unbounded => true,
            LevelRange::UpTo(max) => n <= max,
            LevelRange::Empty => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, LevelRange::Empty)
    }

    pub fn n_max(&self) -> Option<usize> {
        match *self {
            LevelRange::UpTo(max) => Some(max),
            _ => None,
        }
    }

    /// Number of levels among the first `cap`.
    pub fn count_capped(&self, cap: usize) -> usize {
        match *self {
            LevelRange::Unbounded => cap,
            LevelRange::UpTo(max) => cap.min(max + 1),
            LevelRange::Empty => 0,
        }
    }
}

pub fn max_level(spec: &PotentialSpec) -> LevelRange {
    match spec.shape() {
        Shape::PoschlTeller { a, .. } => {
            if a > 0.0 {
                LevelRange::UpTo(a.ceil() as usize - 1)
            } else {
                LevelRange::Empty
            }
        }
        _ => LevelRange::Unbounded,
    }
}

fn check_level(spec: &PotentialSpec, n: usize) -> Result<()> {
    let range = max_level(spec);
    if range.contains(n) {
        Ok(())
    } else {
        Err(Error::LevelRange {
            n,
            n_max: range.n_max(),
        })
    }
}

/// The energy exactly as the closed-form displays print it, additive
/// constant included.
pub fn energy_paper(spec: &PotentialSpec, n: usize) -> Result<f64> {
    check_level(spec, n)?;
    let nf = n as f64;
    use crate::potentials::Family::*;
    Ok(match (spec.family, spec.parametric) {
        (RadialOscillator { omega, ell }, _) => {
            if spec.m == 1 {
                2.0 * nf * omega
            } else {
                omega * (2.0 * nf + ell + 1.5)
            }
        }
        (TrigScarf { a, .. }, false) => (a + nf).powi(2) - a * a,
        (TrigScarf { b, .. }, true) => (b + nf + 0.5).powi(2),
        (HypPoschlTeller { a, .. }, false) => a * a - (a - nf).powi(2),
        (HypPoschlTeller { b, .. }, true) => -(b - nf - 0.5).powi(2),
    })
}

/// Factorization-convention energy: zero for the ground state.
pub fn energy(spec: &PotentialSpec, n: usize) -> Result<f64> {
    check_level(spec, n)?;
    let nf = n as f64;
    Ok(match spec.shape() {
        Shape::Oscillator { omega, .. } => 2.0 * nf * omega,
        Shape::Scarf { a, .. } => (a + nf).powi(2) - a * a,
        Shape::PoschlTeller { a, .. } => a * a - (a - nf).powi(2),
    })
}

/// Value of the right-hand side above the continuum, if any.
pub fn continuum_threshold(spec: &PotentialSpec) -> Option<f64> {
    match spec.shape() {
        Shape::PoschlTeller { a, .. } => Some(a * a),
        _ => None,
    }
}

/// ln of the weight and the polynomial ratio, each as a jet in x.
fn parts(spec: &PotentialSpec, n: usize, x: f64) -> Result<(Jet, Jet)> {
    spec.check_interior(x)?;
    check_level(spec, n)?;
    let t = Jet::var(x);
    let z = spec.z_jet(t);
    match spec.shape() {
        Shape::Oscillator { ell, .. } => {
            let l = spec.xm_laguerre().expect("laguerre family");
            let ln_w = t.ln() * (ell + 1.0) - z * 0.5;
            Ok((ln_w, l.hat_jet(n, z) / l.denominator_jet(z)))
        }
        shape => {
            let j = spec.xm_jacobi().expect("jacobi family");
            j.check(n)?;
            let (p, q) = match shape {
                Shape::Scarf { a, b } => ((a - b) / 2.0, (a + b) / 2.0),
                Shape::PoschlTeller { a, b } => ((b - a) / 2.0, -(b + a) / 2.0),
                Shape::Oscillator { .. } => unreachable!(),
            };
            let (lo, hi) = spec.edge_factors(x);
            let ln_w = lo.ln() * p + hi.ln() * q;
            Ok((ln_w, j.hat_jet(n, z) / j.denominator_jet(z)))
        }
    }
}

/// Unnormalized eigenfunction with its first two x-derivatives.
pub fn eigen_jet(spec: &PotentialSpec, n: usize, x: f64) -> Result<Jet> {
    let (ln_w, ratio) = parts(spec, n, x)?;
    Ok(ln_w.exp() * ratio)
}

/// Unnormalized Psi^(1)_n(x).
pub fn eigenfunction(spec: &PotentialSpec, n: usize, x: f64) -> Result<f64> {
    Ok(eigen_jet(spec, n, x)?.v)
}

/// d/dx of [`eigenfunction`].
pub fn eigenfunction_deriv(spec: &PotentialSpec, n: usize, x: f64) -> Result<f64> {
    Ok(eigen_jet(spec, n, x)?.d1)
}

/// ln |Psi^(1)_n(x)| without forming the possibly underflowing weight.
pub fn ln_abs_eigenfunction(spec: &PotentialSpec, n: usize, x: f64) -> Result<f64> {
    let (ln_w, ratio) = parts(spec, n, x)?;
    Ok(ln_w.v + ratio.v.abs().ln())
}

/// Closed-form normalization constant, or the reason it cannot be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaperNorm {
    Value(f64),
    Absent(String),
}

impl PaperNorm {
    pub fn value(&self) -> Option<f64> {
        match self {
            PaperNorm::Value(v) => Some(*v),
            PaperNorm::Absent(_) => None,
        }
    }
}

/// Signed product accumulated in log space.
struct Radicand {
    negative: bool,
    ln: f64,
    absent: Option<&'static str>,
}

impl Radicand {
    fn new() -> Self {
        Radicand {
            negative: false,
            ln: 0.0,
            absent: None,
        }
    }

    fn mul(mut self, f: f64) -> Self {
        if f == 0.0 {
            self.absent.get_or_insert("zero_factor");
        } else {
            self.negative ^= f < 0.0;
            self.ln += f.abs().ln();
        }
        self
    }

    fn div(mut self, f: f64) -> Self {
        if f == 0.0 {
            self.absent.get_or_insert("zero_factor");
        } else {
            self.negative ^= f < 0.0;
            self.ln -= f.abs().ln();
        }
        self
    }

    fn gamma(mut self, x: f64, invert: bool) -> Self {
        match log_gamma(x) {
            Ok(lg) => self.ln += if invert { -lg } else { lg },
            Err(_) => {
                self.absent.get_or_insert("gamma_nonpositive_argument");
            }
        }
        self
    }

    fn mul_gamma(self, x: f64) -> Self {
        self.gamma(x, false)
    }

    fn div_gamma(self, x: f64) -> Self {
        self.gamma(x, true)
    }

    fn pow2(mut self, e: f64) -> Self {
        self.ln += e * std::f64::consts::LN_2;
        self
    }

    fn sqrt(self) -> PaperNorm {
        if let Some(reason) = self.absent {
            return PaperNorm::Absent(reason.to_string());
        }
        if self.negative {
            return PaperNorm::Absent("negative_radicand".to_string());
        }
        let v = (0.5 * self.ln).exp();
        if v.is_finite() {
            PaperNorm::Value(v)
        } else {
            PaperNorm::Absent("overflow".to_string())
        }
    }
}

/// The printed normalization constants (parametric specs through the
/// substituted indices).
pub fn norm_constant_paper(spec: &PotentialSpec, n: usize) -> Result<PaperNorm> {
    check_level(spec, n)?;
    let nf = n as f64;
    let m = spec.m as f64;
    let r = Radicand::new().mul_gamma(nf + 1.0);
    let r = match spec.shape() {
        Shape::Oscillator { omega, ell } => {
            let shift = if spec.m == 0 { 0.0 } else { m };
            r.mul(omega.powf(ell + 1.5))
                .pow2(-(ell + 0.5))
                .div(ell + nf + shift + 0.5)
                .div_gamma(ell + nf + 0.5)
        }
        Shape::Scarf { .. } => {
            let (a, b) = spec.effective_jacobi().expect("jacobi family");
            let r = r
                .mul(a + b + 2.0 * nf + 1.0)
                .mul_gamma(nf + a + b + 1.0)
                .pow2(-(a + b + 1.0))
                .div_gamma(nf + b);
            if spec.m == 0 {
                r.div(nf + b).div_gamma(nf + a + 1.0)
            } else {
                r.mul(nf + a + 1.0)
                    .mul(nf + a + 1.0)
                    .div(nf + a - m + 1.0)
                    .div(nf + m + b)
                    .div_gamma(nf + a + 2.0)
            }
        }
        Shape::PoschlTeller { .. } => {
            let (a, b) = spec.effective_jacobi().expect("jacobi family");
            let r = r
                .mul(-a - b - 2.0 * nf - 1.0)
                .mul(a + nf + 1.0)
                .pow2(-(a + b + 1.0))
                .div_gamma(-a - b - nf);
            if spec.m == 0 {
                r.mul(nf + a + 1.0)
                    .mul_gamma(-b - nf)
                    .div(a + 1.0)
                    .div(a + 1.0)
                    .div_gamma(a + nf + 1.0)
            } else {
                let r = r
                    .mul_gamma(-b - nf + 1.0)
                    .div(-b - nf - 1.0)
                    .div(a)
                    .div(a)
                    .div_gamma(a + nf);
                if spec.m == 1 {
                    r
                } else {
                    r.mul(nf + a - m + 1.0).div(a + nf)
                }
            }
        }
    };
    Ok(r.sqrt())
}

fn raw_samples(spec: &PotentialSpec, n: usize, grid: &Grid) -> Result<Vec<f64>> {
    grid.sample(|x| eigenfunction(spec, n, x))
}

fn inverse_root_norm(values: &[f64], grid: &Grid) -> Result<f64> {
    let integral = quadrature(&values.iter().map(|v| v * v).collect::<Vec<_>>(), grid);
    if !(integral > 0.0) || !integral.is_finite() {
        return Err(Error::Numeric(format!(
            "norm integral {integral} is not positive and finite"
        )));
    }
    Ok(1.0 / integral.sqrt())
}

/// 1/sqrt(∫ |Psi|^2) by Simpson quadrature on `grid`.
pub fn norm_constant_numeric(spec: &PotentialSpec, n: usize, grid: &Grid) -> Result<f64> {
    inverse_root_norm(&raw_samples(spec, n, grid)?, grid)
}

/// -1 if the first significant lobe of `values` is negative.
fn lobe_sign(values: &[f64]) -> f64 {
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    match values.iter().find(|v| v.abs() > 0.01 * max) {
        Some(v) if *v < 0.0 => -1.0,
        _ => 1.0,
    }
}

/// A numerically normalized H1 eigenstate with the same sign convention as
/// the finite-difference eigenvectors (first significant lobe positive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub spec: PotentialSpec,
    pub n: usize,
    pub energy: f64,
    /// Signed factor applied to the raw eigenfunction.
    pub norm: f64,
}

impl BoundState {
    pub fn new(spec: &PotentialSpec, n: usize, grid: &Grid) -> Result<Self> {
        let raw = raw_samples(spec, n, grid)?;
        let norm = inverse_root_norm(&raw, grid)? * lobe_sign(&raw);
        Ok(BoundState {
            spec: *spec,
            n,
            energy: energy(spec, n)?,
            norm,
        })
    }

    pub fn psi_jet(&self, x: f64) -> Result<Jet> {
        Ok(eigen_jet(&self.spec, self.n, x)?.scale(self.norm))
    }

    pub fn psi(&self, x: f64) -> Result<f64> {
        Ok(self.psi_jet(x)?.v)
    }

    /// `(A Psi) / sqrt(E)` and its slope; identically zero for a zero mode.
    pub fn partner(&self, x: f64) -> Result<(f64, f64)> {
        if self.energy == 0.0 {
            return Ok((0.0, 0.0));
        }
        if self.energy < 0.0 {
            return Err(Error::Factorization {
                n: self.n,
                energy: self.energy,
            });
        }
        let psi = self.psi_jet(x)?;
        let phi = self.spec.phi_jet(x)?;
        let s = self.energy.sqrt();
        Ok((
            (psi.d1 + phi.v * psi.v) / s,
            (psi.d2 + phi.d1 * psi.v + phi.v * psi.d1) / s,
        ))
    }
}

/// Normalized Psi^(2)_n(x) = A Psi^(1)_{n+1} / sqrt(E_{n+1}).
pub fn partner_eigenfunction(spec: &PotentialSpec, n: usize, grid: &Grid, x: f64) -> Result<f64> {
    let upper = BoundState::new(spec, n + 1, grid)?;
    if !(upper.energy > 0.0) {
        return Err(Error::Factorization {
            n: n + 1,
            energy: upper.energy,
        });
    }
    Ok(upper.partner(x)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub n: usize,
    pub energy_analytic: f64,
    pub energy_paper: f64,
    pub norm_paper: Option<f64>,
    pub norm_numeric: f64,
}

pub fn level_record(spec: &PotentialSpec, n: usize, grid: &Grid) -> Result<LevelRecord> {
    Ok(LevelRecord {
        n,
        energy_analytic: energy(spec, n)?,
        energy_paper: energy_paper(spec, n)?,
        norm_paper: norm_constant_paper(spec, n)?.value(),
        norm_numeric: norm_constant_numeric(spec, n, grid)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroModeSide {
    H1,
    H2,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SusyClass {
    pub broken: bool,
    pub zero_mode_side: ZeroModeSide,
}

/// Edge exponent above which `dist^s` is square integrable.
const EDGE_EXPONENT_FLOOR: f64 = -0.5;
/// Log-slope below which a tail counts as decaying.
const TAIL_SLOPE_CEILING: f64 = -1e-3;

/// Decide which of exp(∓∫phi) is square integrable on the truncated domain.
pub fn classify_susy(spec: &PotentialSpec, grid: &Grid) -> Result<SusyClass> {
    let xs: Vec<f64> = grid.nodes().collect();
    let phi = grid.sample(|x| spec.phi(x))?;
    let mut cumulative = vec![0.0; xs.len()];
    for i in 1..xs.len() {
        cumulative[i] = cumulative[i - 1] + 0.5 * grid.h * (phi[i] + phi[i - 1]);
    }
    let natural = spec.natural_domain();
    let last = xs.len() - 1;
    let tail_start = last - last / 10;

    let integrable = |sign: f64| -> bool {
        let ln_f = |i: usize| sign * cumulative[i];
        let left = {
            let (d0, d1) = (xs[0] - natural.x_min, xs[1] - natural.x_min);
            (ln_f(1) - ln_f(0)) / (d1.ln() - d0.ln()) > EDGE_EXPONENT_FLOOR
        };
        let right = if natural.x_max.is_finite() {
            let (d0, d1) = (natural.x_max - xs[last], natural.x_max - xs[last - 1]);
            (ln_f(last - 1) - ln_f(last)) / (d1.ln() - d0.ln()) > EDGE_EXPONENT_FLOOR
        } else {
            (ln_f(last) - ln_f(tail_start)) / (xs[last] - xs[tail_start]) < TAIL_SLOPE_CEILING
        };
        left && right
    };

    match (integrable(-1.0), integrable(1.0)) {
        (true, false) => Ok(SusyClass {
            broken: false,
            zero_mode_side: ZeroModeSide::H1,
        }),
        (false, true) => Ok(SusyClass {
            broken: false,
            zero_mode_side: ZeroModeSide::H2,
        }),
        (false, false) => Ok(SusyClass {
            broken: true,
            zero_mode_side: ZeroModeSide::None,
        }),
        (true, true) => Err(Error::SusyInconsistent(format!(
            "both exp(-∫phi) and exp(+∫phi) look normalizable for {spec}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::Family;

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

    fn pt(m: u32) -> PotentialSpec {
        PotentialSpec::new(Family::HypPoschlTeller { a: 1.0, b: 3.0 }, m, false)
    }

    fn grid_for(spec: &PotentialSpec, count: usize) -> Grid {
        Grid::over(&spec.truncate_domain(1e-12).unwrap(), count).unwrap()
    }

    #[test]
    fn max_level_examples() {
        let hypothetical = PotentialSpec::new(Family::HypPoschlTeller { a: 2.5, b: 4.0 }, 0, false);
        assert_eq!(max_level(&hypothetical), LevelRange::UpTo(2));
        assert_eq!(max_level(&pt(0)), LevelRange::UpTo(0));
        assert_eq!(max_level(&scarf(0)), LevelRange::Unbounded);
        let tiny = PotentialSpec::new(Family::HypPoschlTeller { a: 1.0, b: 0.4 }, 0, true);
        assert_eq!(max_level(&tiny), LevelRange::Empty);
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy(&scarf(0), 2).unwrap(), 16.0);
        for ell in [0.5, 1.0, 3.0] {
            let s = PotentialSpec::new(Family::RadialOscillator { omega: 2.0, ell }, 1, false);
            assert_eq!(energy(&s, 3).unwrap(), 12.0);
        }
        let p = PotentialSpec::new(Family::TrigScarf { a: 1.5, b: 2.5 }, 0, true);
        assert_eq!(energy_paper(&p, 1).unwrap(), 16.0);
        assert_eq!(energy(&p, 1).unwrap(), 7.0);
        assert!(matches!(
            energy(&pt(0), 1),
            Err(Error::LevelRange {
                n: 1,
                n_max: Some(0)
            })
        ));
    }

    #[test]
    fn paper_energy_minus_ground_is_factorization_energy() {
        let specs = [
            scarf(2),
            pt(1),
            PotentialSpec::new(Family::TrigScarf { a: 1.5, b: 2.5 }, 1, true),
            PotentialSpec::new(Family::HypPoschlTeller { a: 2.5, b: 4.5 }, 0, true),
        ];
        for s in specs {
            for n in 0..max_level(&s).count_capped(4) {
                let d = energy_paper(&s, n).unwrap() - energy_paper(&s, 0).unwrap();
                assert!((d - energy(&s, n).unwrap()).abs() < 1e-12, "{s} n={n}");
            }
        }
    }

    #[test]
    fn eigenfunction_examples() {
        let v = eigenfunction(&osc(0), 0, 1.0).unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 1e-15);
        assert!((eigenfunction(&scarf(0), 0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        for (s, edge) in [
            (scarf(1), std::f64::consts::FRAC_PI_2 - 1e-4),
            (osc(2), 1e-4),
            (pt(2), 1e-4),
        ] {
            let near = eigenfunction(&s, 0, edge).unwrap().abs();
            let bulk = eigenfunction(&s, 0, 0.5).unwrap().abs();
            assert!(near < 1e-6 * bulk, "{s}");
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        for s in [osc(2), scarf(2), pt(1)] {
            for x in [0.3, 0.7, 1.1] {
                let h = 1e-6;
                let fd = (eigenfunction(&s, 0, x + h).unwrap()
                    - eigenfunction(&s, 0, x - h).unwrap())
                    / (2.0 * h);
                let d = eigenfunction_deriv(&s, 0, x).unwrap();
                assert!((d - fd).abs() < 1e-7 * d.abs().max(1.0), "{s} x={x}");
            }
        }
    }

    #[test]
    fn ground_state_log_derivative_is_minus_phi() {
        for s in [osc(0), osc(2), scarf(1), pt(2)] {
            for x in [0.2, 0.9, 1.3] {
                let j = eigen_jet(&s, 0, x).unwrap();
                let phi = s.phi(x).unwrap();
                assert!(
                    (j.d1 / j.v + phi).abs() < 1e-10 * phi.abs().max(1.0),
                    "{s} x={x}"
                );
            }
        }
    }

    #[test]
    fn oscillator_paper_norm_matches_numeric() {
        let s = osc(0);
        let g = grid_for(&s, 4000);
        for n in 0..=3 {
            let paper = norm_constant_paper(&s, n).unwrap().value().unwrap();
            let numeric = norm_constant_numeric(&s, n, &g).unwrap();
            assert!((paper - numeric).abs() < 1e-6 * paper, "n={n}");
        }
    }

    #[test]
    fn norm_example_values() {
        // [omega^(5/2) / (2^(3/2) (3/2) Gamma(3/2))]^(1/2) at omega = 2
        let gamma_3_2 = std::f64::consts::PI.sqrt() / 2.0;
        let expect = (2f64.powf(2.5) / (2f64.powf(1.5) * 1.5 * gamma_3_2)).sqrt();
        let got = norm_constant_paper(&osc(0), 0).unwrap().value().unwrap();
        assert!((got - expect).abs() < 1e-14);
        assert!(matches!(
            norm_constant_paper(&pt(0), 0).unwrap(),
            PaperNorm::Value(_)
        ));
        // parametric PT A = 1/2, B = 6/5: alpha = -1/5, so Gamma(alpha + n) at n = 0 is undefined
        let neg = PotentialSpec::new(Family::HypPoschlTeller { a: 0.5, b: 1.2 }, 1, true);
        assert_eq!(
            norm_constant_paper(&neg, 0).unwrap(),
            PaperNorm::Absent("gamma_nonpositive_argument".into())
        );
    }

    #[test]
    fn normalized_state_has_unit_norm() {
        let s = scarf(2);
        let g = grid_for(&s, 4000);
        let b = BoundState::new(&s, 1, &g).unwrap();
        let vals: Vec<f64> = g
            .sample(|x| b.psi(x))
            .unwrap()
            .iter()
            .map(|v| v * v)
            .collect();
        assert!((quadrature(&vals, &g) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_mode_is_annihilated() {
        for s in [osc(1), scarf(2), pt(2)] {
            let g = grid_for(&s, 400);
            let b = BoundState::new(&s, 0, &g).unwrap();
            let max = g
                .sample(|x| b.psi(x))
                .unwrap()
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            for x in g.nodes() {
                let j = b.psi_jet(x).unwrap();
                let a_psi = j.d1 + s.phi(x).unwrap() * j.v;
                assert!(a_psi.abs() < 1e-9 * max, "{s} x={x}");
            }
        }
    }

    #[test]
    fn oscillator_partner_ground_state() {
        let s = osc(0);
        let g = grid_for(&s, 4000);
        let upper = BoundState::new(&s, 1, &g).unwrap();
        let partner = g.sample(|x| partner_eigenfunction(&s, 0, &g, x)).unwrap();
        // grid application of A with 5-point differences, then re-normalization
        let applied: Vec<f64> = g
            .nodes()
            .map(|x| {
                let h: f64 = 1e-3;
                let d = crate::numerics::five_point_derivative(|y| upper.psi(y), x, h.min(x / 3.0))
                    .unwrap();
                d + s.phi(x).unwrap() * upper.psi(x).unwrap()
            })
            .collect();
        let sq: Vec<f64> = applied.iter().map(|v| v * v).collect();
        let k = 1.0 / quadrature(&sq, &g).sqrt();
        let sign = lobe_sign(&applied) * lobe_sign(&partner);
        for (a, p) in applied.iter().zip(&partner) {
            assert!((a * k * sign - p).abs() < 1e-7);
        }
        let sq: Vec<f64> = partner.iter().map(|v| v * v).collect();
        assert!((quadrature(&sq, &g) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn factorization_error_for_zero_energy() {
        let s = osc(0);
        let g = grid_for(&s, 200);
        // partner index -1 does not exist; E_0 = 0 cannot be factorized
        let b = BoundState::new(&s, 0, &g).unwrap();
        assert_eq!(b.partner(1.0).unwrap(), (0.0, 0.0));
        assert!(matches!(
            partner_eigenfunction(&pt(0), 0, &g, 1.0),
            Err(Error::LevelRange { .. })
        ));
    }

    #[test]
    fn susy_classification_examples() {
        for s in [osc(0), scarf(0), osc(2), pt(1)] {
            let c = classify_susy(&s, &grid_for(&s, 2000)).unwrap();
            assert_eq!(
                c,
                SusyClass {
                    broken: false,
                    zero_mode_side: ZeroModeSide::H1
                },
                "{s}"
            );
        }
    }
}
