//! End-to-end checks of the closed forms against the finite-difference
//! eigensolver, assembled into a [`VerificationReport`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    build_hamiltonian, eigenvalues_lowest, eigenvector, five_point_derivative,
    five_point_second_derivative, quadrature, richardson, sign_changes, Grid,
};
use crate::potentials::{PotentialSpec, Which};
use crate::spectra::{
    self, classify_susy, continuum_threshold, max_level, BoundState, LevelRecord, SusyClass,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub spectrum: f64,
    pub spacing: f64,
    pub gram: f64,
    pub intertwine: f64,
    pub zero_mode: f64,
    pub dirac: f64,
    pub schrodinger: f64,
    pub offset_stability: f64,
    pub overlap: f64,
    pub norm_relative: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            spectrum: 1e-4,
            spacing: 1e-4,
            gram: 1e-7,
            intertwine: 1e-6,
            zero_mode: 1e-9,
            dirac: 1e-6,
            schrodinger: 1e-5,
            offset_stability: 1e-5,
            overlap: 1e-6,
            norm_relative: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub grid_count: usize,
    pub tail_tol: f64,
    pub seed: u64,
    pub n_levels: usize,
    /// Skip the second Richardson pair used for the grid-stability check.
    pub single_grid: bool,
    /// Added to the analytic energy of `perturb_level` (every level if `None`).
    pub energy_perturbation: f64,
    pub perturb_level: Option<usize>,
    pub thresholds: Thresholds,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            grid_count: 4000,
            tail_tol: 1e-12,
            seed: 42,
            n_levels: 6,
            single_grid: false,
            energy_perturbation: 0.0,
            perturb_level: None,
            thresholds: Thresholds::default(),
        }
    }
}

impl Settings {
    pub fn quick() -> Self {
        Settings {
            n_levels: 3,
            single_grid: true,
            ..Settings::default()
        }
    }

    fn perturbed(&self, n: usize, e: f64) -> f64 {
        match self.perturb_level {
            Some(k) if k != n => e,
            _ => e + self.energy_perturbation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelComparison {
    pub n: usize,
    pub numeric: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumComparison {
    pub offset_c: f64,
    pub spacing_max_dev: f64,
    pub levels: Vec<LevelComparison>,
}

/// Richardson-extrapolated lowest `k` eigenvalues of H^(which).
pub fn extrapolated_eigenvalues(
    spec: &PotentialSpec,
    which: Which,
    k: usize,
    pair: (&Grid, &Grid),
) -> Result<Vec<f64>> {
    let coarse = eigenvalues_lowest(&build_hamiltonian(spec, which, pair.0)?, k)?;
    let fine = eigenvalues_lowest(&build_hamiltonian(spec, which, pair.1)?, k)?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| richardson(*c, *f, 2))
        .collect())
}

/// Numeric H1 levels against `analytic` (one entry per level, from n = 0)
/// and the displayed energies.
pub fn compare_spectrum(
    spec: &PotentialSpec,
    analytic: &[f64],
    pair: (&Grid, &Grid),
) -> Result<SpectrumComparison> {
    let k = analytic.len();
    if k == 0 {
        return Err(Error::InvalidArgument("no levels to compare".into()));
    }
    let numeric = extrapolated_eigenvalues(spec, Which::One, k, pair)?;
    if let Some(threshold) = continuum_threshold(spec) {
        if let Some((n, e)) = numeric.iter().enumerate().find(|(_, e)| **e >= threshold) {
            return Err(Error::TruncationTooTight(format!(
                "level {n} of {spec} sits at {e}, above the continuum threshold {threshold}"
            )));
        }
    }
    let paper = (0..k)
        .map(|n| spectra::energy_paper(spec, n))
        .collect::<Result<Vec<_>>>()?;
    let offset_c = paper.iter().zip(&numeric).map(|(p, e)| p - e).sum::<f64>() / k as f64;
    let spacing_max_dev = (1..k)
        .map(|n| ((numeric[n] - numeric[n - 1]) - (paper[n] - paper[n - 1])).abs())
        .fold(0.0, f64::max);
    let levels = numeric
        .iter()
        .zip(analytic)
        .enumerate()
        .map(|(n, (e, a))| LevelComparison {
            n,
            numeric: *e,
            abs_err: (e - a).abs(),
        })
        .collect();
    Ok(SpectrumComparison {
        offset_c,
        spacing_max_dev,
        levels,
    })
}

/// Finite-difference step at x: at most 1e-3 and a quarter of the distance
/// to a finite domain edge.
fn fd_step(spec: &PotentialSpec, grid: &Grid, x: f64) -> f64 {
    let d = spec.natural_domain();
    let mut dist = x - d.x_min;
    if d.x_max.is_finite() {
        dist = dist.min(d.x_max - x);
    }
    grid.h.min(1e-3).min(0.25 * dist)
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `‖A Psi_0‖ / ‖Psi_0‖` in max norm with analytic derivatives.
fn zero_mode_residual(ground: &BoundState, grid: &Grid) -> Result<f64> {
    let spec = &ground.spec;
    let mut res = 0.0f64;
    let mut amp = 0.0f64;
    for x in grid.nodes() {
        let psi = ground.psi_jet(x)?;
        res = res.max((psi.d1 + spec.phi(x)? * psi.v).abs());
        amp = amp.max(psi.v.abs());
    }
    Ok(res / amp)
}

fn intertwining_residual(upper: &BoundState, grid: &Grid) -> Result<f64> {
    if !(upper.energy > 0.0) {
        return Err(Error::Factorization {
            n: upper.n,
            energy: upper.energy,
        });
    }
    let spec = &upper.spec;
    let s = upper.energy.sqrt();
    let mut worst = 0.0f64;
    for x in grid.nodes() {
        let h = fd_step(spec, grid, x);
        let phi = spec.phi(x)?;
        let psi1 = upper.psi(x)?;
        let psi2 = upper.partner(x)?.0;
        let a_psi1 = five_point_derivative(|y| upper.psi(y), x, h)? + phi * psi1;
        let adag_psi2 = -five_point_derivative(|y| Ok(upper.partner(y)?.0), x, h)? + phi * psi2;
        worst = worst
            .max((a_psi1 - s * psi2).abs())
            .max((adag_psi2 - s * psi1).abs());
    }
    Ok(worst)
}

/// `max |A Psi1_{n+1} - sqrt(E) Psi2_n|` and the reverse map `A†`, with
/// numerically normalized states and five-point derivatives.
pub fn intertwining_check(spec: &PotentialSpec, n: usize, grid: &Grid) -> Result<f64> {
    intertwining_residual(&BoundState::new(spec, n + 1, grid)?, grid)
}

fn dirac_state_residual(state: &BoundState, grid: &Grid) -> Result<f64> {
    if state.energy < 0.0 {
        return Err(Error::NoRealEnergy(state.energy));
    }
    let spec = &state.spec;
    let eps = state.energy.sqrt();
    let mut worst = 0.0f64;
    let mut amp = 0.0f64;
    for sample in spinor_samples(state, grid)? {
        let x = sample.x;
        let phi = spec.phi(x)?;
        let psi1 = state.psi_jet(x)?;
        let (psi2, dpsi2) = state.partner(x)?;
        let r1 = psi1.d1 + phi * psi1.v - eps * psi2;
        let r2 = dpsi2 - phi * psi2 + eps * psi1.v;
        worst = worst.max(r1.abs()).max(r2.abs());
        amp = amp.max(psi1.v.abs()).max(psi2.abs());
    }
    Ok(worst / amp)
}

/// Both first-order Dirac residuals for level n, scaled by the spinor amplitude.
pub fn dirac_residual(spec: &PotentialSpec, n: usize, grid: &Grid) -> Result<f64> {
    dirac_state_residual(&BoundState::new(spec, n, grid)?, grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinorSample {
    pub x: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub epsilon: f64,
}

/// The Dirac spinor of a bound state on the grid nodes, positive-energy branch.
pub fn spinor_samples(state: &BoundState, grid: &Grid) -> Result<Vec<SpinorSample>> {
    if state.energy < 0.0 {
        return Err(Error::NoRealEnergy(state.energy));
    }
    let epsilon = state.energy.sqrt();
    grid.nodes()
        .map(|x| {
            Ok(SpinorSample {
                x,
                psi1: state.psi(x)?,
                psi2: state.partner(x)?.0,
                epsilon,
            })
        })
        .collect()
}

fn schrodinger_residual(state: &BoundState, grid: &Grid) -> Result<f64> {
    let spec = &state.spec;
    let mut worst = 0.0f64;
    let mut amp = 0.0f64;
    for x in grid.nodes() {
        let h = fd_step(spec, grid, x);
        let psi = state.psi(x)?;
        let d2 = five_point_second_derivative(|y| state.psi(y), x, h)?;
        let v = spec.potential_v(Which::One, x)?;
        worst = worst.max((-d2 + v * psi - state.energy * psi).abs());
        amp = amp.max(psi.abs());
    }
    Ok(worst / amp)
}

fn gram_deviation(samples: &[Vec<f64>], grid: &Grid) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in samples.iter().enumerate() {
        for (j, b) in samples.iter().enumerate().skip(i) {
            let prod: Vec<f64> = a.iter().zip(b).map(|(p, q)| p * q).collect();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((quadrature(&prod, grid) - target).abs());
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormMismatch {
    pub n: usize,
    pub paper: f64,
    pub numeric: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    #[serde(flatten)]
    pub record: LevelRecord,
    pub numeric: f64,
    pub abs_err: f64,
    pub nodes: usize,
    pub overlap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub spec: PotentialSpec,
    pub levels: Vec<LevelReport>,
    pub offset_c: f64,
    pub offset_c_stability: Option<f64>,
    pub spacing_max_dev: f64,
    pub gram_max_dev: f64,
    pub partner_gram_max_dev: f64,
    pub intertwine_max: f64,
    pub zero_mode_max: f64,
    pub dirac_residual_max: f64,
    pub schrodinger_residual_max: f64,
    pub h2_spectrum_max_dev: f64,
    /// Numeric H1 eigenvalues below the continuum threshold (Pöschl-Teller).
    pub numeric_bound_states: Option<usize>,
    pub susy: SusyClass,
    pub norm_mismatches: Vec<NormMismatch>,
    pub settings: Settings,
    pub passed: bool,
    pub failures: Vec<String>,
}

struct Failures {
    list: Vec<String>,
}

impl Failures {
    fn check(&mut self, name: &str, value: f64, limit: f64) {
        if !(value < limit) {
            self.list
                .push(format!("{name} = {value:e} exceeds {limit:e}"));
        }
    }
}

/// Run every check for `spec` on the first `n_levels` levels (capped by the
/// admissible range).
pub fn full_report(
    spec: &PotentialSpec,
    n_levels: usize,
    settings: &Settings,
) -> Result<VerificationReport> {
    spec.validate()?;
    let t = settings.thresholds;
    let count = max_level(spec).count_capped(n_levels);
    if count == 0 {
        return Err(Error::LevelRange { n: 0, n_max: None });
    }
    let truncated = spec.truncate_domain(settings.tail_tol)?;
    let grid = Grid::over(&truncated, settings.grid_count)?;
    let fine = grid.refined();
    let mut failures = Failures { list: Vec::new() };

    let states = (0..count)
        .map(|n| {
            let mut s = BoundState::new(spec, n, &grid)?;
            s.energy = settings.perturbed(n, s.energy);
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    let analytic: Vec<f64> = states.iter().map(|s| s.energy).collect();

    let comparison = compare_spectrum(spec, &analytic, (&grid, &fine))?;
    let offset_c_stability = if settings.single_grid {
        None
    } else {
        let finer = fine.refined();
        let again = compare_spectrum(spec, &analytic, (&fine, &finer))?;
        Some((again.offset_c - comparison.offset_c).abs())
    };

    let numeric_bound_states = match continuum_threshold(spec) {
        Some(threshold) => {
            let probe = extrapolated_eigenvalues(spec, Which::One, count + 1, (&grid, &fine))?;
            Some(probe.iter().filter(|e| **e < threshold).count())
        }
        None => None,
    };

    let samples = states
        .iter()
        .map(|s| grid.sample(|x| s.psi(x)))
        .collect::<Result<Vec<_>>>()?;
    let gram_max_dev = gram_deviation(&samples, &grid);

    let op = build_hamiltonian(spec, Which::One, &grid)?;
    let raw = eigenvalues_lowest(&op, count)?;
    let mut levels = Vec::with_capacity(count);
    let mut norm_mismatches = Vec::new();
    for (n, state) in states.iter().enumerate() {
        let mut record = spectra::level_record(spec, n, &grid)?;
        record.energy_analytic = state.energy;
        let vector = eigenvector(&op, raw[n], settings.seed.wrapping_add(n as u64))?;
        let norm2 = samples[n].iter().map(|v| v * v).sum::<f64>().sqrt();
        let overlap = vector
            .iter()
            .zip(&samples[n])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / norm2;
        let nodes = sign_changes(&samples[n], 1e-9);
        if nodes != n {
            failures.list.push(format!("level {n} has {nodes} nodes"));
        }
        failures.check(&format!("1 - overlap[{n}]"), 1.0 - overlap, t.overlap);
        if let Some(paper) = record.norm_paper {
            let numeric = record.norm_numeric;
            if (paper - numeric).abs() > t.norm_relative * numeric {
                norm_mismatches.push(NormMismatch { n, paper, numeric });
            }
        }
        let cmp = comparison.levels[n];
        levels.push(LevelReport {
            record,
            numeric: cmp.numeric,
            abs_err: cmp.abs_err,
            nodes,
            overlap,
        });
    }

    let zero_mode_max = zero_mode_residual(&states[0], &grid)?;
    let mut intertwine_max = 0.0f64;
    let mut partner_samples = Vec::new();
    for upper in &states[1..] {
        intertwine_max = intertwine_max.max(intertwining_residual(upper, &grid)?);
        partner_samples.push(grid.sample(|x| Ok(upper.partner(x)?.0))?);
    }
    let partner_gram_max_dev = gram_deviation(&partner_samples, &grid);

    let h2_spectrum_max_dev = if count > 1 {
        let h2 = extrapolated_eigenvalues(spec, Which::Two, count - 1, (&grid, &fine))?;
        h2.iter()
            .zip(&analytic[1..])
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        0.0
    };

    let mut dirac_residual_max = 0.0f64;
    let mut schrodinger_residual_max = 0.0f64;
    for state in &states {
        match dirac_state_residual(state, &grid) {
            Ok(r) => dirac_residual_max = dirac_residual_max.max(r),
            Err(e @ Error::NoRealEnergy(_)) => {
                failures.list.push(format!("level {}: {e}", state.n))
            }
            Err(e) => return Err(e),
        }
        schrodinger_residual_max =
            schrodinger_residual_max.max(schrodinger_residual(state, &grid)?);
    }

    let susy = classify_susy(spec, &grid)?;

    let max_abs_err = max_abs(levels.iter().map(|l| l.abs_err));
    failures.check("max |numeric - energy_analytic|", max_abs_err, t.spectrum);
    failures.check("spacing_max_dev", comparison.spacing_max_dev, t.spacing);
    failures.check("gram_max_dev", gram_max_dev, t.gram);
    failures.check("partner_gram_max_dev", partner_gram_max_dev, t.gram);
    failures.check("intertwine_max", intertwine_max, t.intertwine);
    failures.check("zero_mode_max", zero_mode_max, t.zero_mode);
    failures.check("dirac_residual_max", dirac_residual_max, t.dirac);
    failures.check(
        "schrodinger_residual_max",
        schrodinger_residual_max,
        t.schrodinger,
    );
    failures.check("h2_spectrum_max_dev", h2_spectrum_max_dev, t.spectrum);
    if let Some(s) = offset_c_stability {
        failures.check("offset_c_stability", s, t.offset_stability);
    }

    Ok(VerificationReport {
        spec: *spec,
        levels,
        offset_c: comparison.offset_c,
        offset_c_stability,
        spacing_max_dev: comparison.spacing_max_dev,
        gram_max_dev,
        partner_gram_max_dev,
        intertwine_max,
        zero_mode_max,
        dirac_residual_max,
        schrodinger_residual_max,
        h2_spectrum_max_dev,
        numeric_bound_states,
        susy,
        norm_mismatches,
        settings: *settings,
        passed: failures.list.is_empty(),
        failures: failures.list,
    })
}
