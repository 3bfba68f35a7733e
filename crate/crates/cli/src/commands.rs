use anyhow::Context;
use direop::numerics::Grid;
use direop::potentials::{DomainInfo, Family, PotentialSpec, Which};
use direop::spectra::{self, max_level, BoundState};
use direop::verify::{compare_spectrum, full_report, Settings, VerificationReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CommandConfig, Format, RunConfig, Suite, UsageError};
use crate::output::{render_csv, render_table_json, to_json, Cell, Table};

/// Rendered output plus the exit code it implies.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

pub fn execute(config: &RunConfig) -> anyhow::Result<Outcome> {
    config.check()?;
    match config.command {
        CommandConfig::Potential => table_outcome(config, potential_table(config)?, 0),
        CommandConfig::Wavefunction { n } => {
            table_outcome(config, wavefunction_table(config, n)?, 0)
        }
        CommandConfig::Spectrum { levels, check, tol } => {
            let table = spectrum_table(config, levels)?;
            let worst = table
                .rows
                .iter()
                .filter_map(|r| match r.last() {
                    Some(Cell::Float(e)) => Some(*e),
                    _ => None,
                })
                .fold(0.0f64, f64::max);
            let code = if check && !(worst <= tol) {
                eprintln!("spectrum check failed: max abs_err {worst:e} exceeds --tol {tol:e}");
                1
            } else {
                0
            };
            table_outcome(config, table, code)
        }
        CommandConfig::Verify { .. } => verify_outcome(config),
    }
}

fn table_outcome(config: &RunConfig, table: Table, code: u8) -> anyhow::Result<Outcome> {
    let text = match config.format {
        Format::Csv => render_csv(config, &table)?,
        Format::Json => render_table_json(config, &table)?,
    };
    Ok(Outcome { text, code })
}

/// Interior sampling nodes over the requested range, defaulting to the
/// truncated domain of `spec`.
fn sampling_grid(config: &RunConfig, spec: &PotentialSpec) -> anyhow::Result<Grid> {
    let truncated = spec.truncate_domain(config.tail_tol)?;
    let range = DomainInfo {
        x_min: config.x_min.unwrap_or(truncated.x_min),
        x_max: config.x_max.unwrap_or(truncated.x_max),
        ..truncated
    };
    Ok(Grid::over(&range, config.points)?)
}

fn numerics_grid(config: &RunConfig, spec: &PotentialSpec) -> anyhow::Result<Grid> {
    Ok(Grid::over(
        &spec.truncate_domain(config.tail_tol)?,
        config.grid_count,
    )?)
}

fn potential_table(config: &RunConfig) -> anyhow::Result<Table> {
    let mut table = Table::new(&["m", "x", "phi", "v1", "v2"]);
    for spec in config.specs()? {
        let grid = sampling_grid(config, &spec)?;
        for x in grid.nodes() {
            let phi = spec.phi(x).with_context(|| format!("{spec} at x = {x}"))?;
            table.push(vec![
                spec.m.into(),
                x.into(),
                phi.into(),
                spec.potential_v(Which::One, x)?.into(),
                spec.potential_v(Which::Two, x)?.into(),
            ]);
        }
    }
    Ok(table)
}

fn level_guard(spec: &PotentialSpec, n: usize) -> anyhow::Result<()> {
    let range = max_level(spec);
    if range.contains(n) {
        return Ok(());
    }
    let why = match range.n_max() {
        Some(k) => format!("n = {n} exceeds n_max = {k}"),
        None => "no bound states".to_string(),
    };
    Err(UsageError(format!("{spec}: {why}")).into())
}

fn wavefunction_table(config: &RunConfig, n: usize) -> anyhow::Result<Table> {
    let mut table = Table::new(&["m", "n", "x", "psi1", "psi2"]);
    for spec in config.specs()? {
        level_guard(&spec, n)?;
        let state = BoundState::new(&spec, n, &numerics_grid(config, &spec)?)?;
        for x in sampling_grid(config, &spec)?.nodes() {
            table.push(vec![
                spec.m.into(),
                n.into(),
                x.into(),
                state.psi(x)?.into(),
                state.partner(x)?.0.into(),
            ]);
        }
    }
    Ok(table)
}

fn spectrum_table(config: &RunConfig, levels: usize) -> anyhow::Result<Table> {
    let mut table = Table::new(&[
        "m",
        "n",
        "energy_analytic",
        "energy_paper",
        "numeric",
        "abs_err",
    ]);
    for spec in config.specs()? {
        let count = max_level(&spec).count_capped(levels);
        if count == 0 {
            level_guard(&spec, 0)?;
        }
        let analytic = (0..count)
            .map(|n| spectra::energy(&spec, n))
            .collect::<direop::Result<Vec<_>>>()?;
        let grid = numerics_grid(config, &spec)?;
        let comparison = compare_spectrum(&spec, &analytic, (&grid, &grid.refined()))?;
        for level in &comparison.levels {
            table.push(vec![
                spec.m.into(),
                level.n.into(),
                analytic[level.n].into(),
                spectra::energy_paper(&spec, level.n)?.into(),
                level.numeric.into(),
                level.abs_err.into(),
            ]);
        }
    }
    Ok(table)
}

/// The five figure parameter sets, each with m = 0, 1, 2.
pub fn ci_matrix() -> Vec<PotentialSpec> {
    FIGURES
        .iter()
        .filter(|f| f.potential)
        .flat_map(|f| (0..3).map(move |m| PotentialSpec::new(f.family, m, f.parametric)))
        .filter(|s| s.validate().is_ok())
        .collect()
}

#[derive(Serialize)]
struct SpecError {
    spec: PotentialSpec,
    error: String,
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    config: &'a RunConfig,
    passed: bool,
    reports: Vec<VerificationReport>,
    errors: Vec<SpecError>,
}

fn verify_settings(config: &RunConfig) -> anyhow::Result<Settings> {
    let CommandConfig::Verify {
        suite,
        tol,
        perturb_energy,
        perturb_level,
    } = config.command
    else {
        unreachable!("verify settings requested for {}", config.command.name())
    };
    let base = match suite {
        Suite::Quick => Settings::quick(),
        Suite::Full => Settings::default(),
    };
    let mut settings = Settings {
        grid_count: config.grid_count,
        tail_tol: config.tail_tol,
        seed: config.seed,
        energy_perturbation: perturb_energy,
        perturb_level,
        ..base
    };
    if let Some(t) = tol {
        if !(t >= 0.0) {
            return Err(UsageError(format!("--tol must be non-negative, got {t}")).into());
        }
        settings.thresholds.spectrum = t;
        settings.thresholds.spacing = t;
    }
    Ok(settings)
}

fn verify_outcome(config: &RunConfig) -> anyhow::Result<Outcome> {
    if config.format != Format::Json {
        return Err(UsageError("verify writes JSON only; use --format json".into()).into());
    }
    let settings = verify_settings(config)?;
    let specs = if config.family.is_some() {
        config.specs()?
    } else {
        ci_matrix()
    };
    let results: Vec<(PotentialSpec, direop::Result<VerificationReport>)> = specs
        .par_iter()
        .map(|s| (*s, full_report(s, settings.n_levels, &settings)))
        .collect();

    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (spec, result) in results {
        match result {
            Ok(r) => {
                if !r.passed {
                    eprintln!("FAIL {spec}: {}", r.failures.join("; "));
                }
                reports.push(r);
            }
            Err(e) => {
                eprintln!("ERROR {spec}: {e}");
                errors.push(SpecError {
                    spec,
                    error: e.to_string(),
                });
            }
        }
    }
    let passed = errors.is_empty() && reports.iter().all(|r| r.passed);
    let mut text = to_json(&VerifyDocument {
        config,
        passed,
        reports,
        errors,
    })?;
    text.push('\n');
    Ok(Outcome {
        text,
        code: if passed { 0 } else { 1 },
    })
}

pub struct Figure {
    pub id: &'static str,
    pub family: Family,
    pub parametric: bool,
    /// Potential panel (a) or ground-state panel (b).
    pub potential: bool,
}

macro_rules! figure_pair {
    ($a:literal, $b:literal, $family:expr, $parametric:expr) => {
        [
            Figure {
                id: $a,
                family: $family,
                parametric: $parametric,
                potential: true,
            },
            Figure {
                id: $b,
                family: $family,
                parametric: $parametric,
                potential: false,
            },
        ]
    };
}

pub const FIGURES: [Figure; 10] = {
    let [f1a, f1b] = figure_pair!(
        "1a",
        "1b",
        Family::RadialOscillator {
            omega: 2.0,
            ell: 1.0
        },
        false
    );
    let [f2a, f2b] = figure_pair!("2a", "2b", Family::TrigScarf { a: 3.0, b: 1.0 }, false);
    let [f3a, f3b] = figure_pair!(
        "3a",
        "3b",
        Family::HypPoschlTeller { a: 1.0, b: 3.0 },
        false
    );
    let [f4a, f4b] = figure_pair!("4a", "4b", Family::TrigScarf { a: 1.5, b: 2.5 }, true);
    let [f5a, f5b] = figure_pair!("5a", "5b", Family::HypPoschlTeller { a: 2.5, b: 1.5 }, true);
    [f1a, f1b, f2a, f2b, f3a, f3b, f4a, f4b, f5a, f5b]
};

/// Rewrite `base` into the potential or ground-state invocation for figure `id`.
pub fn expand_figure(id: &str, base: RunConfig) -> anyhow::Result<RunConfig> {
    use crate::config::FamilyName;
    let Some(fig) = FIGURES.iter().find(|f| f.id == id) else {
        let known: Vec<&str> = FIGURES.iter().map(|f| f.id).collect();
        return Err(UsageError(format!(
            "unknown figure {id:?}; expected one of {}",
            known.join(", ")
        ))
        .into());
    };
    let mut cfg = RunConfig {
        command: if fig.potential {
            CommandConfig::Potential
        } else {
            CommandConfig::Wavefunction { n: 0 }
        },
        m: vec![0, 1, 2],
        parametric: fig.parametric,
        omega: None,
        ell: None,
        a: None,
        b: None,
        ..base
    };
    match fig.family {
        Family::RadialOscillator { omega, ell } => {
            cfg.family = Some(FamilyName::Oscillator);
            cfg.omega = Some(omega);
            cfg.ell = Some(ell);
        }
        Family::TrigScarf { a, b } => {
            cfg.family = Some(FamilyName::Scarf);
            cfg.a = Some(a);
            cfg.b = Some(b);
        }
        Family::HypPoschlTeller { a, b } => {
            cfg.family = Some(FamilyName::Pt);
            cfg.a = Some(a);
            cfg.b = Some(b);
        }
    }
    Ok(cfg)
}
