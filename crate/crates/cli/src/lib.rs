//! Command-line front end for `direop`: potential and wavefunction samples,
//! spectra against the eigensolver, verification suites and figure datasets.
//!
//! Every table is preceded (CSV) or wrapped (JSON) by the [`RunConfig`] that
//! produced it, so `direop replay <file>` regenerates it byte-for-byte.
//!
//! CSV column order:
//! - potential: `m,x,phi,v1,v2`
//! - wavefunction: `m,n,x,psi1,psi2`
//! - spectrum: `m,n,energy_analytic,energy_paper,numeric,abs_err`

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

pub use commands::{ci_matrix, execute, expand_figure, Outcome, FIGURES};
pub use config::{CommandConfig, FamilyName, Format, RunConfig, Suite, UsageError};

pub const SEED_ENV: &str = "DIREOP_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "direop",
    version,
    about = "Dirac scalar potentials from exceptional orthogonal polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub ell: Option<f64>,
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Comma-separated extension indices.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub m: Vec<u32>,
    /// Use the parametric-symmetry partner of the family.
    #[arg(long)]
    pub parametric: bool,
}

#[derive(Debug, Args)]
pub struct NumericArgs {
    /// Interior nodes of the finite-difference grid.
    #[arg(long, default_value_t = 4000)]
    pub grid_count: usize,
    /// Ground-state amplitude at which infinite domains are cut.
    #[arg(long, default_value_t = 1e-12)]
    pub tail_tol: f64,
    /// Seed for inverse iteration start vectors; DIREOP_SEED overrides it.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Interior sample points per series.
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Superpotential and both partner potentials, one series per m.
    Potential {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        numeric: NumericArgs,
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Normalized upper spinor component and its partner for level n.
    Wavefunction {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[command(flatten)]
        numeric: NumericArgs,
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Closed-form levels next to Richardson-extrapolated eigenvalues.
    Spectrum {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Exit 1 if any |numeric - analytic| exceeds --tol.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[command(flatten)]
        numeric: NumericArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Full verification reports (JSON) over the CI matrix or the given spec.
    Verify {
        #[arg(long, value_enum, default_value = "full")]
        suite: Suite,
        #[command(flatten)]
        spec: SpecArgs,
        /// Override the spectrum and spacing tolerances.
        #[arg(long)]
        tol: Option<f64>,
        /// Shift applied to the analytic energies before checking.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        perturb_energy: f64,
        /// Only perturb this level (all levels if omitted).
        #[arg(long)]
        perturb_level: Option<usize>,
        #[command(flatten)]
        numeric: NumericArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Dataset behind a figure panel: 1a..5a potentials, 1b..5b ground states.
    Figure {
        id: String,
        #[command(flatten)]
        numeric: NumericArgs,
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-run the configuration embedded in a previous output file.
    Replay {
        file: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn seed_from_env(flag: u64) -> anyhow::Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("{SEED_ENV}={v:?} is not an unsigned integer")).into()),
        Err(_) => Ok(flag),
    }
}

fn assemble(
    command: CommandConfig,
    spec: Option<SpecArgs>,
    numeric: NumericArgs,
    format: Format,
    sample: Option<SampleArgs>,
) -> anyhow::Result<RunConfig> {
    let spec = spec.unwrap_or(SpecArgs {
        family: None,
        omega: None,
        ell: None,
        a: None,
        b: None,
        m: vec![0, 1, 2],
        parametric: false,
    });
    let (points, x_min, x_max) = match sample {
        Some(s) => (s.points, s.x_min, s.x_max),
        None => (2001, None, None),
    };
    Ok(RunConfig {
        command,
        family: spec.family,
        omega: spec.omega,
        ell: spec.ell,
        a: spec.a,
        b: spec.b,
        m: spec.m,
        parametric: spec.parametric,
        grid_count: numeric.grid_count,
        tail_tol: numeric.tail_tol,
        seed: seed_from_env(numeric.seed)?,
        format,
        points,
        x_min,
        x_max,
    })
}

/// Pull the embedded configuration out of a CSV or JSON output file.
pub fn read_embedded_config(text: &str) -> anyhow::Result<RunConfig> {
    if let Some(first) = text.lines().next().filter(|l| l.starts_with("# direop ")) {
        let json = first
            .split_once("config=")
            .map(|(_, j)| j)
            .ok_or_else(|| UsageError("CSV header carries no config".into()))?;
        return serde_json::from_str(json)
            .map_err(|e| UsageError(format!("bad embedded config: {e}")).into());
    }
    #[derive(serde::Deserialize)]
    struct Wrapper {
        config: RunConfig,
    }
    serde_json::from_str::<Wrapper>(text)
        .map(|w| w.config)
        .map_err(|e| UsageError(format!("not a direop output file: {e}")).into())
}

/// Parse-free entry point; returns the process exit code for non-error outcomes.
pub fn run(cli: Cli) -> anyhow::Result<u8> {
    let (config, output) = match cli.command {
        Cmd::Potential {
            spec,
            numeric,
            sample,
            output,
        } => {
            let format = sample.format;
            (
                assemble(
                    CommandConfig::Potential,
                    Some(spec),
                    numeric,
                    format,
                    Some(sample),
                )?,
                output,
            )
        }
        Cmd::Wavefunction {
            spec,
            n,
            numeric,
            sample,
            output,
        } => {
            let format = sample.format;
            (
                assemble(
                    CommandConfig::Wavefunction { n },
                    Some(spec),
                    numeric,
                    format,
                    Some(sample),
                )?,
                output,
            )
        }
        Cmd::Spectrum {
            spec,
            levels,
            check,
            tol,
            numeric,
            format,
            output,
        } => (
            assemble(
                CommandConfig::Spectrum { levels, check, tol },
                Some(spec),
                numeric,
                format,
                None,
            )?,
            output,
        ),
        Cmd::Verify {
            suite,
            spec,
            tol,
            perturb_energy,
            perturb_level,
            numeric,
            output,
        } => {
            let command = CommandConfig::Verify {
                suite,
                tol,
                perturb_energy,
                perturb_level,
            };
            let spec = if spec.family.is_some() {
                Some(spec)
            } else {
                None
            };
            (
                assemble(command, spec, numeric, Format::Json, None)?,
                output,
            )
        }
        Cmd::Figure {
            id,
            numeric,
            sample,
            output,
        } => {
            let format = sample.format;
            let base = assemble(
                CommandConfig::Potential,
                None,
                numeric,
                format,
                Some(sample),
            )?;
            (expand_figure(&id, base)?, output)
        }
        Cmd::Replay { file, output } => {
            let text =
                fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            (read_embedded_config(&text)?, output)
        }
    };
    let outcome = execute(&config)?;
    emit(&outcome.text, output.as_deref())?;
    Ok(outcome.code)
}

fn emit(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                // A closed downstream pipe (`| head`) is not a failure of the run.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> RunConfig {
        RunConfig {
            command: CommandConfig::Potential,
            family: None,
            omega: None,
            ell: None,
            a: None,
            b: None,
            m: vec![0],
            parametric: false,
            grid_count: 4000,
            tail_tol: 1e-12,
            seed: 42,
            format: Format::Csv,
            points: 64,
            x_min: None,
            x_max: None,
        }
    }

    #[test]
    fn figure_ids_expand_to_caption_parameters() {
        let c = expand_figure("4a", base()).unwrap();
        assert_eq!(c.family, Some(FamilyName::Scarf));
        assert_eq!((c.a, c.b, c.parametric), (Some(1.5), Some(2.5), true));
        assert_eq!(c.m, vec![0, 1, 2]);
        let c = expand_figure("3b", base()).unwrap();
        assert_eq!(c.command, CommandConfig::Wavefunction { n: 0 });
        assert_eq!((c.a, c.b), (Some(1.0), Some(3.0)));
        assert!(expand_figure("6a", base()).unwrap_err().is::<UsageError>());
    }

    #[test]
    fn ci_matrix_is_fifteen_specs() {
        assert_eq!(ci_matrix().len(), 15);
    }

    #[test]
    fn embedded_config_round_trips_through_both_formats() {
        let cfg = expand_figure("2a", base()).unwrap();
        let csv = execute(&cfg).unwrap().text;
        assert!(csv.starts_with("# direop potential config={"));
        assert_eq!(read_embedded_config(&csv).unwrap(), cfg);
        let json_cfg = RunConfig {
            format: Format::Json,
            ..cfg
        };
        let json = execute(&json_cfg).unwrap().text;
        assert_eq!(read_embedded_config(&json).unwrap(), json_cfg);
    }

    #[test]
    fn invalid_spec_names_the_inequality() {
        let cfg = RunConfig {
            family: Some(FamilyName::Scarf),
            a: Some(1.0),
            b: Some(3.0),
            m: vec![1],
            ..base()
        };
        let err = execute(&cfg).unwrap_err();
        assert!(err.is::<UsageError>());
        assert!(err.to_string().contains('<'), "{err}");
    }

    #[test]
    fn missing_parameter_is_a_usage_error() {
        let cfg = RunConfig {
            family: Some(FamilyName::Oscillator),
            omega: Some(2.0),
            ..base()
        };
        let err = execute(&cfg).unwrap_err();
        assert!(err.to_string().contains("--ell"), "{err}");
    }
}
